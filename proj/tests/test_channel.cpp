// Copyright 2026 The doflab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <set>

#include "doflab/channel.hpp"
#include "support/modrank.hpp"

namespace doflab {
namespace {

TEST(SplitMix, MatchesReferenceOutputs) {
  // First outputs of SplitMix64 seeded with 0 and 1234567 (reference C
  // implementation by Vigna).
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(s), 0x6E789E6AA1B965F4ULL);
  std::uint64_t t = 1234567;
  EXPECT_EQ(splitmix64(t), 6457827717110365317ULL);
  EXPECT_EQ(splitmix64(t), 3203168211198807973ULL);
}

TEST(SplitMix, DeriveSeedIndexesTheSequence) {
  std::uint64_t state = 42;
  for (std::uint64_t i = 0; i < 10; ++i) {
    std::uint64_t copy = 42 + i * 0x9E3779B97F4A7C15ULL;
    EXPECT_EQ(deriveSeed(42, i), splitmix64(copy));
  }
  EXPECT_EQ(deriveSeed(42, 0), splitmix64(state));
}

TEST(UniformInt, StaysInRangeAndHitsEndpoints) {
  std::mt19937_64 gen(1);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = detail::uniformInt(gen, -3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(SampleRealization, Deterministic) {
  EXPECT_EQ(sampleRealization(9, LinkSet::xChannel(), 5), sampleRealization(9, LinkSet::xChannel(), 5));
  EXPECT_NE(sampleRealization(9, LinkSet::xChannel(), 5), sampleRealization(10, LinkSet::xChannel(), 5));
}

TEST(SampleRealization, CountAndNonzero) {
  const auto r = sampleRealization(3, LinkSet::xChannel(), 5);
  EXPECT_EQ(r.coefficients().size(), 20u);
  for (const auto& c : r.coefficients()) EXPECT_NE(c, 0);
}

TEST(SampleRealization, GridDenominatorAndRange) {
  const mpz_class scale("2147483648");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = sampleRealization(seed, LinkSet::interference3(), 4);
    EXPECT_EQ(r.coefficients().size(), 36u);
    for (const auto& c : r.coefficients()) {
      const Rational scaled = c * Rational(scale);
      EXPECT_EQ(scaled.get_den(), 1);
      EXPECT_LE(abs(scaled.get_num()), scale);
      EXPECT_NE(scaled.get_num(), 0);
    }
  }
}

TEST(SampleRealization, RejectsBadArguments) {
  EXPECT_THROW(sampleRealization(1, LinkSet::xChannel(), 0), std::invalid_argument);
  EXPECT_THROW(sampleRealization(1, LinkSet{4, 2}, 2), std::invalid_argument);
}

// A 5x5 matrix assembled from 25 sampled coefficients is nonsingular.
TEST(SampleRealization, GenericMatricesHaveFullRank) {
  const LinkSet links{3, 3};
  std::size_t full = 0;
  const std::size_t draws = 10'000;
  for (std::uint64_t seed = 0; seed < draws; ++seed) {
    const auto r = sampleRealization(seed, links, 3);  // 27 coefficients
    std::vector<Rational> entries(r.coefficients().begin(), r.coefficients().begin() + 25);
    const RationalMatrix m(5, 5, std::move(entries));
    if (rank(m) == 5) ++full;
  }
  EXPECT_EQ(full, draws);
}

TEST(ChannelRealization, RejectsZeroAndMiscount) {
  EXPECT_THROW(ChannelRealization(LinkSet::xChannel(), 1, {1, 1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(ChannelRealization(LinkSet::xChannel(), 1, {1, 1, 1}), DimensionError);
  const ChannelRealization r(LinkSet::xChannel(), 1, {1, 2, 3, 4});
  EXPECT_EQ(r.coeff(1, 2, 1), 2);
  EXPECT_EQ(r.coeff(2, 1, 1), 3);
  EXPECT_THROW(r.coeff(3, 1, 1), BoundsError);
  EXPECT_THROW(r.coeff(1, 1, 2), BoundsError);
}

TEST(DiagBlock, SingleSlot) {
  const auto r = sampleRealization(4, LinkSet::xChannel(), 5);
  const std::vector<int> times{3};
  const auto d = diagBlock(r, 1, 2, times);
  EXPECT_EQ(d, RationalMatrix::fromRows({{r.coeff(1, 2, 3)}}));
}

TEST(DiagBlock, EmptyAndFullRange) {
  const auto r = sampleRealization(4, LinkSet::xChannel(), 5);
  const auto empty = diagBlock(r, 1, 1, std::vector<int>{});
  EXPECT_EQ(empty.rows(), 0u);
  EXPECT_EQ(empty.cols(), 0u);
  const auto full = diagBlock(r, 2, 1);
  EXPECT_EQ(rank(full), 5u);
  for (int t = 1; t <= 5; ++t) EXPECT_EQ(full(t - 1, t - 1), r.coeff(2, 1, t));
}

TEST(DiagBlock, AscendingOrderAndBounds) {
  const auto r = sampleRealization(4, LinkSet::xChannel(), 5);
  const auto d = diagBlock(r, 1, 1, std::vector<int>{5, 2});
  EXPECT_EQ(d(0, 0), r.coeff(1, 1, 2));
  EXPECT_EQ(d(1, 1), r.coeff(1, 1, 5));
  EXPECT_THROW(diagBlock(r, 1, 1, std::vector<int>{6}), BoundsError);
  EXPECT_THROW(diagBlock(r, 1, 1, std::vector<int>{0}), BoundsError);
}

TEST(CsitView, FirstSlotSeesNothing) {
  const auto r = sampleRealization(1, LinkSet::xChannel(), 5);
  const auto view = csitAt(r, 1);
  for (int k = 1; k <= 2; ++k)
    for (int j = 1; j <= 2; ++j) EXPECT_THROW(view.coeff(k, j, 1), CausalityViolation);
}

TEST(CsitView, AnswersThePast) {
  const auto r = sampleRealization(1, LinkSet::xChannel(), 5);
  const auto view = csitAt(r, 5);
  EXPECT_EQ(view.coeff(2, 1, 4), r.coeff(2, 1, 4));
  EXPECT_EQ(view.time(), 5);
}

TEST(CsitView, RejectsCurrentSlot) {
  const auto r = sampleRealization(1, LinkSet::xChannel(), 5);
  EXPECT_THROW(csitAt(r, 3).coeff(1, 1, 3), CausalityViolation);
  EXPECT_THROW(csitAt(r, 3).coeff(1, 1, 5), CausalityViolation);
  EXPECT_THROW(csitAt(r, 6), BoundsError);
  EXPECT_THROW(csitAt(r, 0), BoundsError);
}

TEST(CsitView, FullViewIsPrivileged) {
  const auto r = sampleRealization(1, LinkSet::xChannel(), 5);
  EXPECT_EQ(unsafe::fullCsit(r, 2).coeff(1, 1, 5), r.coeff(1, 1, 5));
}

TEST(Serialization, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = sampleRealization(seed, seed % 2 ? LinkSet::xChannel() : LinkSet::interference3(), 4);
    const auto text = toJson(r).dump();
    const auto back = realizationFromJson(nlohmann::json::parse(text));
    EXPECT_EQ(back, r);
    EXPECT_EQ(toJson(back).dump(), text);
    EXPECT_EQ(realizationHash(back), realizationHash(r));
  }
}

TEST(Serialization, DocumentShape) {
  const ChannelRealization r(LinkSet::xChannel(), 1, {Rational(1, 2), 2, 3, 4});
  const auto j = toJson(r);
  EXPECT_EQ(j["links"], nlohmann::json::array({2, 2}));
  EXPECT_EQ(j["n"], 1);
  EXPECT_EQ(j["coeffs"][0], nlohmann::json({{"k", 1}, {"j", 1}, {"t", 1}, {"v", "1/2"}}));
}

TEST(Serialization, RejectsMalformedDocuments) {
  auto doc = toJson(sampleRealization(1, LinkSet::xChannel(), 2));
  auto missing = doc;
  missing["coeffs"].erase(missing["coeffs"].begin());
  EXPECT_THROW(realizationFromJson(missing), std::invalid_argument);
  auto duplicate = doc;
  duplicate["coeffs"][1] = duplicate["coeffs"][0];
  EXPECT_THROW(realizationFromJson(duplicate), std::invalid_argument);
  auto out_of_range = doc;
  out_of_range["coeffs"][0]["t"] = 3;
  EXPECT_THROW(realizationFromJson(out_of_range), BoundsError);
  auto zero = doc;
  zero["coeffs"][0]["v"] = "0/1";
  EXPECT_THROW(realizationFromJson(zero), std::invalid_argument);
}

TEST(Hash, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hash, DetectsSingleCoefficientChange) {
  const auto r = sampleRealization(5, LinkSet::xChannel(), 3);
  const auto changed = withCoefficient(r, 2, 2, 3, r.coeff(2, 2, 3) + 1);
  EXPECT_NE(realizationHash(r), realizationHash(changed));
}

}  // namespace
}  // namespace doflab
