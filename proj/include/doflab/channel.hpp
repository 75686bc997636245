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

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "doflab/ratmat.hpp"

namespace doflab {

/// A transmitter-to-receiver link, 1-based: rx = k, tx = j.
struct Link {
  int rx = 1;
  int tx = 1;
  auto operator<=>(const Link&) const = default;
};

/// "kj" label used by the file formats, e.g. {2,1} -> "21".
inline std::string linkLabel(Link l) { return std::to_string(l.rx) + std::to_string(l.tx); }

struct LinkSet {
  int numTx = 2;
  int numRx = 2;
  auto operator<=>(const LinkSet&) const = default;

  static constexpr LinkSet xChannel() { return {2, 2}; }
  static constexpr LinkSet interference3() { return {3, 3}; }
};

inline void validate(LinkSet links) {
  auto ok = [](int v) { return v == 2 || v == 3; };
  if (!ok(links.numTx) || !ok(links.numRx)) throw std::invalid_argument("link set sizes must be 2 or 3");
}

class CausalityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// All channel coefficients g_kj(t), 1 <= t <= n, for one experiment. Every
/// coefficient is nonzero.
class ChannelRealization {
 public:
  ChannelRealization(LinkSet links, int n, std::vector<Rational> coeffs)
      : links_(links), n_(n), coeffs_(std::move(coeffs)) {
    validate(links_);
    if (n_ < 1) throw std::invalid_argument("block length must be positive");
    if (coeffs_.size() != static_cast<std::size_t>(n_ * links_.numRx * links_.numTx)) {
      throw DimensionError("coefficient count does not match links x n");
    }
    for (const auto& q : coeffs_) {
      if (q == 0) throw std::invalid_argument("channel coefficients must be nonzero");
    }
  }

  LinkSet links() const { return links_; }
  int n() const { return n_; }

  const Rational& coeff(int k, int j, int t) const { return coeffs_[index(k, j, t)]; }

  /// Raw storage, ordered by t, then k, then j.
  std::span<const Rational> coefficients() const { return coeffs_; }

  std::size_t index(int k, int j, int t) const {
    if (k < 1 || k > links_.numRx || j < 1 || j > links_.numTx || t < 1 || t > n_) {
      throw BoundsError("channel coefficient index out of range");
    }
    return static_cast<std::size_t>(((t - 1) * links_.numRx + (k - 1)) * links_.numTx + (j - 1));
  }

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;

 private:
  LinkSet links_;
  int n_;
  std::vector<Rational> coeffs_;
};

/// SplitMix64 step: advances `state` and returns the next output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Output number `index` (0-based) of the SplitMix64 sequence seeded with
/// `base`. O(1) in the index.
inline std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t state = base + index * 0x9E3779B97F4A7C15ULL;
  return splitmix64(state);
}

inline constexpr std::int64_t kCoefficientScale = std::int64_t{1} << 31;

namespace detail {

/// Uniform draw from the closed range [lo, hi] by rejection; independent of
/// the standard library's distribution implementations.
inline std::int64_t uniformInt(std::mt19937_64& gen, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = span == 0 ? 0 : (UINT64_MAX / span) * span;
  std::uint64_t x = gen();
  while (limit != 0 && x >= limit) x = gen();
  return lo + static_cast<std::int64_t>(span == 0 ? x : x % span);
}

}  // namespace detail

/// Coefficients p / 2^31 with p uniform on [-2^31, 2^31] \ {0}, drawn in
/// storage order from mt19937_64(seed).
inline ChannelRealization sampleRealization(std::uint64_t seed, LinkSet links, int n) {
  validate(links);
  if (n < 1) throw std::invalid_argument("block length must be positive");
  std::mt19937_64 gen(seed);
  std::vector<Rational> coeffs(static_cast<std::size_t>(n * links.numRx * links.numTx));
  for (auto& q : coeffs) {
    std::int64_t p = 0;
    while (p == 0) p = detail::uniformInt(gen, -kCoefficientScale, kCoefficientScale);
    q = Rational(static_cast<long>(p), static_cast<unsigned long>(kCoefficientScale));
    q.canonicalize();
  }
  return ChannelRealization(links, n, std::move(coeffs));
}

/// |times| x |times| diagonal matrix of g_kj(t) over the given 1-based
/// timeslots, ascending.
inline RationalMatrix diagBlock(const ChannelRealization& r, int k, int j, std::span<const int> times) {
  std::vector<int> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Rational> diag;
  diag.reserve(sorted.size());
  for (int t : sorted) diag.push_back(r.coeff(k, j, t));
  return RationalMatrix::diagonal(diag);
}

/// Full-range diagonal G_kj^n.
inline RationalMatrix diagBlock(const ChannelRealization& r, int k, int j) {
  std::vector<Rational> diag;
  for (int t = 1; t <= r.n(); ++t) diag.push_back(r.coeff(k, j, t));
  return RationalMatrix::diagonal(diag);
}

/// g_kj(t) for t = 1..n, the diagonal of G_kj^n.
inline std::vector<Rational> diagEntries(const ChannelRealization& r, int k, int j) {
  std::vector<Rational> diag;
  diag.reserve(static_cast<std::size_t>(r.n()));
  for (int t = 1; t <= r.n(); ++t) diag.push_back(r.coeff(k, j, t));
  return diag;
}

class CsitView;
namespace unsafe {
CsitView fullCsit(const ChannelRealization& r, int t);
}

/// What a transmitter knows when precoding timeslot t: coefficients of
/// timeslots strictly before t. Any other query throws CausalityViolation.
class CsitView {
 public:
  int time() const { return time_; }
  LinkSet links() const { return realization_->links(); }
  int n() const { return realization_->n(); }

  const Rational& coeff(int k, int j, int s) const {
    if (s >= horizon_) {
      throw CausalityViolation("precoder at t=" + std::to_string(time_) + " queried g_" + std::to_string(k) +
                               std::to_string(j) + "(" + std::to_string(s) + ")");
    }
    return realization_->coeff(k, j, s);
  }

 private:
  CsitView(const ChannelRealization& r, int t, int horizon) : realization_(&r), time_(t), horizon_(horizon) {}

  friend CsitView csitAt(const ChannelRealization& r, int t);
  friend CsitView unsafe::fullCsit(const ChannelRealization& r, int t);

  const ChannelRealization* realization_;
  int time_;
  int horizon_;  // queries need s < horizon_
};

inline CsitView csitAt(const ChannelRealization& r, int t) {
  if (t < 1 || t > r.n()) throw BoundsError("csitAt: timeslot out of range");
  return CsitView(r, t, t);
}

namespace unsafe {

/// Full-knowledge view for the instantaneous-CSIT negative control and the
/// causality audit. Never handed to schemes by runScheme.
inline CsitView fullCsit(const ChannelRealization& r, int t) {
  if (t < 1 || t > r.n()) throw BoundsError("fullCsit: timeslot out of range");
  return CsitView(r, t, r.n() + 1);
}

}  // namespace unsafe

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json toJson(const ChannelRealization& r) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int t = 1; t <= r.n(); ++t)
    for (int k = 1; k <= r.links().numRx; ++k)
      for (int j = 1; j <= r.links().numTx; ++j)
        coeffs.push_back({{"k", k}, {"j", j}, {"t", t}, {"v", toString(r.coeff(k, j, t))}});
  return {{"links", {r.links().numTx, r.links().numRx}}, {"n", r.n()}, {"coeffs", std::move(coeffs)}};
}

inline ChannelRealization realizationFromJson(const nlohmann::json& doc) {
  const auto& links_json = doc.at("links");
  if (!links_json.is_array() || links_json.size() != 2) throw std::invalid_argument("links must be [numTx, numRx]");
  const LinkSet links{links_json[0].get<int>(), links_json[1].get<int>()};
  validate(links);
  const int n = doc.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("block length must be positive");
  std::vector<Rational> coeffs(static_cast<std::size_t>(n * links.numRx * links.numTx));
  std::vector<bool> seen(coeffs.size(), false);
  // Index arithmetic is duplicated here so malformed input is rejected before
  // a realization exists.
  for (const auto& entry : doc.at("coeffs")) {
    const int k = entry.at("k").get<int>();
    const int j = entry.at("j").get<int>();
    const int t = entry.at("t").get<int>();
    if (k < 1 || k > links.numRx || j < 1 || j > links.numTx || t < 1 || t > n) {
      throw BoundsError("coefficient index out of range");
    }
    const auto idx = static_cast<std::size_t>(((t - 1) * links.numRx + (k - 1)) * links.numTx + (j - 1));
    if (seen[idx]) throw std::invalid_argument("duplicate coefficient entry");
    seen[idx] = true;
    coeffs[idx] = parseRational(entry.at("v").get<std::string>());
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::invalid_argument("missing coefficient entries");
  }
  return ChannelRealization(links, n, std::move(coeffs));
}

/// 64-bit FNV-1a over the compact canonical JSON serialization.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t realizationHash(const ChannelRealization& r) { return fnv1a64(toJson(r).dump()); }

/// Copy of `r` with g_kj(t) replaced.
inline ChannelRealization withCoefficient(const ChannelRealization& r, int k, int j, int t, Rational value) {
  std::vector<Rational> coeffs(r.coefficients().begin(), r.coefficients().end());
  coeffs[r.index(k, j, t)] = std::move(value);
  return ChannelRealization(r.links(), r.n(), std::move(coeffs));
}

}  // namespace doflab
