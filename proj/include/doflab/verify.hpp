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

// Mechanical checkers for the rank identities and inequalities of linear
// schemes on the two-user X-channel with delayed CSIT.
//
// Every check is an exact integer comparison between ranks computed over Q.
// A check whose premise does not hold for the trace (non-causal precoders,
// non-decodable sizes) is still evaluated but carries hypothesis_violated,
// so its outcome is informational rather than a finding.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "doflab/channel.hpp"
#include "doflab/ratmat.hpp"
#include "doflab/scheme.hpp"

namespace doflab {

class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CheckResult {
  std::string name;
  bool holds = false;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::string witness;
  bool hypothesisViolated = false;

  /// A failed check whose premise held.
  bool isFinding() const { return !holds && !hypothesisViolated; }

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

/// Named checks in evaluation order; each name appears once.
class VerificationReport {
 public:
  void add(CheckResult check) {
    if (contains(check.name)) throw std::logic_error("duplicate check '" + check.name + "'");
    checks_.push_back(std::move(check));
  }

  void merge(const VerificationReport& other) {
    for (const auto& c : other.checks_) add(c);
  }

  bool contains(std::string_view name) const {
    return std::any_of(checks_.begin(), checks_.end(), [&](const CheckResult& c) { return c.name == name; });
  }

  const CheckResult& at(std::string_view name) const {
    for (const auto& c : checks_)
      if (c.name == name) return c;
    throw std::out_of_range("no check named '" + std::string(name) + "'");
  }

  const std::vector<CheckResult>& checks() const { return checks_; }

  bool allHold() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.holds; });
  }

  bool hasFinding() const {
    return std::any_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.isFinding(); });
  }

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;

 private:
  std::vector<CheckResult> checks_;
};

inline nlohmann::json toJson(const CheckResult& c) {
  nlohmann::json j{{"name", c.name}, {"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}};
  if (c.hypothesisViolated) j["hypothesis_violated"] = true;
  if (!c.witness.empty()) j["witness"] = c.witness;
  return j;
}

inline nlohmann::json toJson(const VerificationReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : report.checks()) arr.push_back(toJson(c));
  return arr;
}

inline VerificationReport reportFromJson(const nlohmann::json& arr) {
  VerificationReport report;
  for (const auto& j : arr) {
    report.add(CheckResult{j.at("name").get<std::string>(), j.at("holds").get<bool>(), j.at("lhs").get<std::int64_t>(),
                           j.at("rhs").get<std::int64_t>(), j.value("witness", std::string()),
                           j.value("hypothesis_violated", false)});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Received blocks

/// G_{k, l.tx}^n V_l^n for every receiver k and message link l of a trace:
/// the noise-free beamforming part of what Rx_k observes.
class RxSignalBlocks {
 public:
  RxSignalBlocks(const PrecoderTrace& trace, const ChannelRealization& r) : trace_(&trace), realization_(&r) {
    if (trace.n != r.n() || trace.links != r.links()) throw DimensionError("trace and realization shapes differ");
    for (int k = 1; k <= r.links().numRx; ++k) {
      for (const auto& [l, v] : trace.V) {
        if (v.rows() != static_cast<std::size_t>(r.n())) throw DimensionError("precoder row count differs from n");
        blocks_[{k, l}] = scaleRows(diagEntries(r, k, l.tx), v);
      }
    }
  }

  const RationalMatrix& block(int k, Link l) const {
    auto it = blocks_.find({k, l});
    if (it == blocks_.end()) throw BoundsError("no received block for receiver " + std::to_string(k));
    return it->second;
  }

  RationalMatrix concat(int k, std::initializer_list<Link> links) const {
    return concat(k, std::vector<Link>(links));
  }
  RationalMatrix concat(int k, const std::vector<Link>& links) const {
    std::vector<RationalMatrix> parts;
    for (Link l : links) parts.push_back(block(k, l));
    if (parts.empty()) return RationalMatrix(static_cast<std::size_t>(trace_->n), 0);
    return hconcat(parts);
  }

  std::size_t rankOf(int k, std::initializer_list<Link> links) const { return rank(concat(k, links)); }
  std::size_t rankOf(int k, const std::vector<Link>& links) const { return rank(concat(k, links)); }

  const PrecoderTrace& trace() const { return *trace_; }
  const ChannelRealization& realization() const { return *realization_; }

 private:
  const PrecoderTrace* trace_;
  const ChannelRealization* realization_;
  std::map<std::pair<int, Link>, RationalMatrix> blocks_;
};

namespace detail {

inline CheckResult equality(std::string name, std::int64_t lhs, std::int64_t rhs, std::string witness = {}) {
  return CheckResult{std::move(name), lhs == rhs, lhs, rhs, std::move(witness), false};
}

inline CheckResult atMost(std::string name, std::int64_t lhs, std::int64_t rhs, std::string witness = {}) {
  return CheckResult{std::move(name), lhs <= rhs, lhs, rhs, std::move(witness), false};
}

inline std::int64_t i64(std::size_t v) { return static_cast<std::int64_t>(v); }

inline void requireXChannel(const PrecoderTrace& trace) {
  if (trace.links != LinkSet::xChannel()) throw DimensionError("X-channel trace required");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Decodability

/// Rank-form decodability for every message (k, j): the desired block and
/// the three interfering blocks at Rx_k add up in rank and V_kj has full
/// column rank ("condi1".."condi4"), plus the projection-dimension form
/// dim Proj_{I_kj^perp} colspan(G_kj V_kj) = m_kj ("eq4.k.j").
inline VerificationReport decodabilityCheck(const PrecoderTrace& trace, const ChannelRealization& r) {
  detail::requireXChannel(trace);
  const RxSignalBlocks rx(trace, r);
  VerificationReport report;
  int index = 0;
  for (int k = 1; k <= 2; ++k) {
    const std::vector<Link> all{{1, 1}, {2, 1}, {1, 2}, {2, 2}};
    const std::size_t total = rx.rankOf(k, all);
    for (int j = 1; j <= 2; ++j) {
      ++index;
      const Link desired{k, j};
      std::vector<Link> interference;
      for (Link l : all)
        if (l != desired) interference.push_back(l);
      const RationalMatrix interf = rx.concat(k, interference);
      const std::size_t interf_rank = rank(interf);
      const std::size_t desired_rank = rank(rx.block(k, desired));
      const std::size_t v_rank = rank(trace.v(desired));
      const int m = trace.size(desired);

      CheckResult cond = detail::equality("condi" + std::to_string(index), detail::i64(desired_rank + interf_rank),
                                          detail::i64(total));
      cond.holds = cond.holds && v_rank == static_cast<std::size_t>(m);
      cond.witness = "rank[V" + linkLabel(desired) + "]=" + std::to_string(v_rank) + " m=" + std::to_string(m);
      report.add(std::move(cond));

      const std::size_t proj = projDim(rx.block(k, desired), interf);
      CheckResult eq4 = detail::equality("eq4." + std::to_string(k) + "." + std::to_string(j), detail::i64(proj), m);
      eq4.holds = eq4.holds && v_rank == static_cast<std::size_t>(m);
      report.add(std::move(eq4));
    }
  }
  return report;
}

inline bool isDecodable(const PrecoderTrace& trace, const ChannelRealization& r) {
  return decodabilityCheck(trace, r).allHold();
}

// ---------------------------------------------------------------------------
// Transmitter pairs

/// Two messages from distinct transmitters, the receiver whose rank Lemma 1
/// bounds, and the reference receiver whose past row span defines the set T.
struct TxPair {
  Link first;
  Link second;
  int boundedRx;
  int referenceRx;
  std::string label;

  /// (V11, V12): Rx1 bounded by Rx2.
  static TxPair pair12() { return {{1, 1}, {1, 2}, 1, 2, "pair12"}; }
  /// (V21, V22): Rx2 bounded by Rx1.
  static TxPair pair21() { return {{2, 1}, {2, 2}, 2, 1, "pair21"}; }

  const Link& member(int j) const { return j == 1 ? first : second; }
};

namespace detail {

inline std::vector<std::size_t> slotRows(std::span<const int> slots) {
  std::vector<std::size_t> rows;
  for (int t : slots) rows.push_back(static_cast<std::size_t>(t - 1));
  return rows;
}

inline std::vector<int> prefixSlots(int count) {
  std::vector<int> slots(static_cast<std::size_t>(count));
  std::iota(slots.begin(), slots.end(), 1);
  return slots;
}

}  // namespace detail

/// [G_{k,1}^S V_1^S  G_{k,2}^S V_2^S] for the pair over 1-based slots S.
inline RationalMatrix pairBlock(const PrecoderTrace& trace, const ChannelRealization& r, const TxPair& pair, int k,
                                std::span<const int> slots) {
  const auto rows = detail::slotRows(slots);
  std::vector<Rational> g1, g2;
  for (int t : slots) {
    g1.push_back(r.coeff(k, pair.first.tx, t));
    g2.push_back(r.coeff(k, pair.second.tx, t));
  }
  return hconcat({scaleRows(g1, rowSubmatrix(trace.v(pair.first), rows)),
                  scaleRows(g2, rowSubmatrix(trace.v(pair.second), rows))});
}

inline RationalMatrix pairBlock(const PrecoderTrace& trace, const ChannelRealization& r, const TxPair& pair, int k) {
  const auto all = detail::prefixSlots(r.n());
  return pairBlock(trace, r, pair, k, all);
}

struct RankRatio {
  std::int64_t lhs = 0;  // rank at the bounded receiver
  std::int64_t rhs = 0;  // rank at the reference receiver
};

inline RankRatio rankRatio(const PrecoderTrace& trace, const ChannelRealization& r, const TxPair& pair) {
  return {detail::i64(rank(pairBlock(trace, r, pair, pair.boundedRx))),
          detail::i64(rank(pairBlock(trace, r, pair, pair.referenceRx)))};
}

/// 2 * lhs <= 3 * rhs, in integers.
inline bool withinRatioBound(RankRatio ratio) { return 2 * ratio.lhs <= 3 * ratio.rhs; }

inline CheckResult rankRatioCheck(const PrecoderTrace& trace, const ChannelRealization& r, const TxPair& pair,
                                  bool causal, const std::string& prefix = "lemma1") {
  const RankRatio ratio = rankRatio(trace, r, pair);
  CheckResult c{prefix + "." + pair.label, withinRatioBound(ratio), ratio.lhs, ratio.rhs,
                "2*" + std::to_string(ratio.lhs) + " <= 3*" + std::to_string(ratio.rhs), !causal};
  if (!causal) c.witness += "; hypothesis-violated: precoders are not delayed-CSIT";
  return c;
}

/// Rank Ratio Inequality on (V11, V12) and on the mirrored (V21, V22).
inline VerificationReport rankRatioCheck(const PrecoderTrace& trace, const ChannelRealization& r, bool causal = true) {
  detail::requireXChannel(trace);
  VerificationReport report;
  report.add(rankRatioCheck(trace, r, TxPair::pair12(), causal));
  report.add(rankRatioCheck(trace, r, TxPair::pair21(), causal));
  return report;
}

// ---------------------------------------------------------------------------
// The set T and the quantities r_1, r_2

/// Slots t at which [v1(t)^T 0] and [0 v2(t)^T] both lie in the row span of
/// the reference receiver's pair block over slots 1..t-1.
inline std::vector<int> computeT(const PrecoderTrace& trace, const ChannelRealization& r,
                                 const TxPair& pair = TxPair::pair12()) {
  const auto m1 = trace.v(pair.first).cols();
  const auto m2 = trace.v(pair.second).cols();
  std::vector<int> slots;
  for (int t = 1; t <= r.n(); ++t) {
    const auto prefix = detail::prefixSlots(t - 1);
    const RationalMatrix past = pairBlock(trace, r, pair, pair.referenceRx, prefix);
    RowVector own(m1 + m2), other(m1 + m2);
    const RowVector v1 = trace.v(pair.first).row(static_cast<std::size_t>(t - 1));
    const RowVector v2 = trace.v(pair.second).row(static_cast<std::size_t>(t - 1));
    std::copy(v1.begin(), v1.end(), own.begin());
    std::copy(v2.begin(), v2.end(), other.begin() + static_cast<std::ptrdiff_t>(m1));
    if (rowspanContains(past, own) && rowspanContains(past, other)) slots.push_back(t);
  }
  return slots;
}

/// dim span{s : [s 0] (j = 1) or [0 s] (j = 2) lies in the row span of the
/// reference receiver's full pair block}. Computed through the left nullspace
/// of the other block and through rank[both] - rank[other]; the two must agree.
inline std::int64_t computeR(const PrecoderTrace& trace, const ChannelRealization& r, int j,
                             const TxPair& pair = TxPair::pair12()) {
  if (j != 1 && j != 2) throw std::invalid_argument("computeR: j must be 1 or 2");
  const int k = pair.referenceRx;
  const Link own_link = pair.member(j);
  const Link other_link = pair.member(3 - j);
  const RationalMatrix own = scaleRows(diagEntries(r, k, own_link.tx), trace.v(own_link));
  const RationalMatrix other = scaleRows(diagEntries(r, k, other_link.tx), trace.v(other_link));

  const RationalMatrix annihilator = leftNullspaceBasis(other);
  const std::size_t direct = annihilator.rows() == 0 ? 0 : rank(multiply(annihilator, own));
  const std::size_t closed_form = rank(hconcat({own, other})) - rank(other);
  if (direct != closed_form) {
    throw ConsistencyError("computeR: left-nullspace route gives " + std::to_string(direct) +
                           ", rank-difference route gives " + std::to_string(closed_form));
  }
  return detail::i64(direct);
}

// ---------------------------------------------------------------------------
// Per-slot events and the degenerate-event scan

/// Membership of one slot i in the events
///   A_i: no rank growth at the reference receiver,
///   B_i: i in T,
///   C_i: rank growth at the bounded receiver.
struct SlotEvents {
  int slot = 0;
  bool a = false;
  bool b = false;
  bool c = false;
  int boundedGrowth = 0;    // rank increment at the bounded receiver (0 or 1)
  int referenceGrowth = 0;  // rank increment at the reference receiver (0 or 1)
};

struct DegenerateScan {
  std::int64_t count = 0;  // |{i : A_i and not B_i}|
  std::vector<SlotEvents> slots;
  std::vector<int> T;
};

inline DegenerateScan degenerateEventScan(const PrecoderTrace& trace, const ChannelRealization& r,
                                          const TxPair& pair = TxPair::pair12()) {
  DegenerateScan scan;
  scan.T = computeT(trace, r, pair);
  std::size_t prev_bounded = 0;
  std::size_t prev_reference = 0;
  for (int i = 1; i <= r.n(); ++i) {
    const auto prefix = detail::prefixSlots(i);
    const std::size_t bounded = rank(pairBlock(trace, r, pair, pair.boundedRx, prefix));
    const std::size_t reference = rank(pairBlock(trace, r, pair, pair.referenceRx, prefix));
    SlotEvents ev;
    ev.slot = i;
    ev.boundedGrowth = static_cast<int>(bounded - prev_bounded);
    ev.referenceGrowth = static_cast<int>(reference - prev_reference);
    ev.a = reference == prev_reference;
    ev.b = std::find(scan.T.begin(), scan.T.end(), i) != scan.T.end();
    ev.c = bounded == prev_bounded + 1;
    if (ev.a && !ev.b) ++scan.count;
    scan.slots.push_back(ev);
    prev_bounded = bounded;
    prev_reference = reference;
  }
  return scan;
}

inline CheckResult degenerateEventCheck(const PrecoderTrace& trace, const ChannelRealization& r,
                                        const TxPair& pair = TxPair::pair12(), const std::string& name = "lemma6.count") {
  const DegenerateScan scan = degenerateEventScan(trace, r, pair);
  std::string witness;
  for (const auto& ev : scan.slots) {
    if (ev.a && !ev.b) witness += (witness.empty() ? "slots:" : ",") + std::to_string(ev.slot);
  }
  return detail::equality(name, scan.count, 0, witness);
}

// ---------------------------------------------------------------------------
// Lemma 5

/// The three inequalities bounding the rank gap between the two receivers by
/// the slots in T, plus the reassembled ratio chain, the per-slot step
/// decomposition, and the T-prefix monotonicity used to prove the first.
inline VerificationReport lemma5Check(const PrecoderTrace& trace, const ChannelRealization& r,
                                      const TxPair& pair = TxPair::pair12(), bool causal = true,
                                      const std::string& prefix = "lemma5") {
  using detail::i64;
  const DegenerateScan scan = degenerateEventScan(trace, r, pair);
  const std::vector<int>& T = scan.T;
  const auto t_rows = detail::slotRows(T);
  const std::int64_t bounded = i64(rank(pairBlock(trace, r, pair, pair.boundedRx)));
  const std::int64_t reference = i64(rank(pairBlock(trace, r, pair, pair.referenceRx)));
  const std::int64_t rank_over_t = i64(rank(pairBlock(trace, r, pair, pair.boundedRx, T)));
  const std::int64_t rv1 = i64(rank(trace.v(pair.first)));
  const std::int64_t rv2 = i64(rank(trace.v(pair.second)));
  const std::int64_t rv1_t = i64(rank(rowSubmatrix(trace.v(pair.first), t_rows)));
  const std::int64_t rv2_t = i64(rank(rowSubmatrix(trace.v(pair.second), t_rows)));
  const std::int64_t r1 = computeR(trace, r, 1, pair);
  const std::int64_t r2 = computeR(trace, r, 2, pair);

  std::string t_text = "T={";
  for (std::size_t i = 0; i < T.size(); ++i) t_text += (i ? "," : "") + std::to_string(T[i]);
  t_text += "}";

  VerificationReport report;
  auto add = [&](CheckResult c) {
    if (!causal) {
      c.hypothesisViolated = true;
      c.witness += (c.witness.empty() ? "" : "; ") + std::string("hypothesis-violated: precoders are not delayed-CSIT");
    }
    report.add(std::move(c));
  };

  add(detail::atMost(prefix + ".b1", bounded - reference, rank_over_t, t_text));

  CheckResult b2_1 = detail::atMost(prefix + ".b2.j1", rv1_t, r1);
  CheckResult b2_2 = detail::atMost(prefix + ".b2.j2", rv2_t, r2);
  CheckResult b2{prefix + ".b2", b2_1.holds && b2_2.holds, rv1_t + rv2_t, r1 + r2,
                 "rank[V1^T]=" + std::to_string(rv1_t) + "<=r1=" + std::to_string(r1) + "; rank[V2^T]=" +
                     std::to_string(rv2_t) + "<=r2=" + std::to_string(r2)};
  CheckResult b3_1 = detail::atMost(prefix + ".b3.j1", r1, reference - rv2);
  CheckResult b3_2 = detail::atMost(prefix + ".b3.j2", r2, reference - rv1);
  CheckResult b3{prefix + ".b3", b3_1.holds && b3_2.holds, r1 + r2, 2 * reference - rv1 - rv2,
                 "r1=" + std::to_string(r1) + "<=" + std::to_string(reference - rv2) + "; r2=" + std::to_string(r2) +
                     "<=" + std::to_string(reference - rv1)};
  add(std::move(b2));
  add(std::move(b2_1));
  add(std::move(b2_2));
  add(std::move(b3));
  add(std::move(b3_1));
  add(std::move(b3_2));

  // bounded - reference <= rank over T <= rank[V1^T] + rank[V2^T] <= r1 + r2
  //   <= 2 reference - rank[V1] - rank[V2] <= 2 reference - bounded.
  const bool chain = bounded - reference <= rank_over_t && rank_over_t <= rv1_t + rv2_t && rv1_t + rv2_t <= r1 + r2 &&
                     r1 + r2 <= 2 * reference - rv1 - rv2 && rv1 + rv2 >= bounded;
  add(CheckResult{prefix + ".chain", chain, bounded - reference, 2 * reference - bounded,
                  "2*" + std::to_string(bounded) + " <= 3*" + std::to_string(reference)});

  // Telescoping identity and the indicator bound it feeds.
  std::int64_t telescoped = 0;
  std::int64_t positive_part = 0;
  std::int64_t a_and_c = 0;
  std::int64_t t_and_c = 0;
  bool increments_binary = true;
  for (const auto& ev : scan.slots) {
    telescoped += ev.boundedGrowth - ev.referenceGrowth;
    positive_part += std::max(ev.boundedGrowth - ev.referenceGrowth, 0);
    increments_binary = increments_binary && (ev.boundedGrowth == 0 || ev.boundedGrowth == 1) &&
                        (ev.referenceGrowth == 0 || ev.referenceGrowth == 1);
    if (ev.a && ev.c) ++a_and_c;
    if (ev.b && ev.c) ++t_and_c;
  }
  const bool steps = telescoped == bounded - reference && increments_binary && positive_part == a_and_c &&
                     a_and_c <= t_and_c + scan.count;
  add(CheckResult{prefix + ".steps", steps, telescoped, bounded - reference,
                  "sum I(A&C)=" + std::to_string(a_and_c) + " <= sum_T I(C)=" + std::to_string(t_and_c) +
                      " + degenerate=" + std::to_string(scan.count)});

  // Growth at tau_j against the full prefix implies growth against T_{j-1}.
  bool monotone = true;
  std::int64_t t_prev_rank = 0;
  for (std::size_t idx = 0; idx < T.size(); ++idx) {
    const std::vector<int> t_prefix(T.begin(), T.begin() + static_cast<std::ptrdiff_t>(idx + 1));
    const std::int64_t t_rank = i64(rank(pairBlock(trace, r, pair, pair.boundedRx, t_prefix)));
    const bool full_growth = scan.slots[static_cast<std::size_t>(T[idx] - 1)].c;
    if (full_growth && t_rank != t_prev_rank + 1) monotone = false;
    t_prev_rank = t_rank;
  }
  add(CheckResult{prefix + ".claim1", monotone, t_and_c, rank_over_t, t_text});
  return report;
}

// ---------------------------------------------------------------------------
// Converse

/// Equalities joint1/joint2 (consequences of decodability via Lemma 4) and the
/// weighted bounds 2(m11+m12) + 3(m21+m22) <= 3n and its mirror, both via the
/// chain through the rank at the second receiver and directly against n.
inline VerificationReport converseAudit(const PrecoderTrace& trace, const ChannelRealization& r, bool decodable,
                                        bool causal = true) {
  using detail::i64;
  detail::requireXChannel(trace);
  const RxSignalBlocks rx(trace, r);
  const std::vector<Link> all{{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  const std::int64_t total1 = i64(rx.rankOf(1, all));
  const std::int64_t total2 = i64(rx.rankOf(2, all));
  const std::int64_t n = r.n();
  const std::int64_t rx1_desired = trace.size(1, 1) + trace.size(1, 2);
  const std::int64_t rx2_desired = trace.size(2, 1) + trace.size(2, 2);

  std::string premise;
  if (!decodable) premise = "hypothesis-violated: trace is not decodable";
  if (!causal) premise += (premise.empty() ? "" : "; ") + std::string("hypothesis-violated: precoders are not delayed-CSIT");

  VerificationReport report;
  auto add = [&](CheckResult c) {
    if (!premise.empty()) {
      c.hypothesisViolated = true;
      c.witness += (c.witness.empty() ? "" : "; ") + premise;
    }
    report.add(std::move(c));
  };

  add(detail::equality("joint1", i64(rx.rankOf(1, {{1, 1}}) + rx.rankOf(1, {{1, 2}})),
                       total1 - i64(rx.rankOf(1, {{2, 1}, {2, 2}}))));
  add(detail::equality("joint2", i64(rx.rankOf(2, {{2, 1}}) + rx.rankOf(2, {{2, 2}})),
                       total2 - i64(rx.rankOf(2, {{1, 1}, {1, 2}}))));
  add(detail::atMost("converse.chain.2r2x", 2 * rx1_desired + 3 * rx2_desired, 3 * total2));
  add(detail::atMost("converse.chain.2r1x", 3 * rx1_desired + 2 * rx2_desired, 3 * total1));
  add(detail::atMost("bound.2r2x", 2 * rx1_desired + 3 * rx2_desired, 3 * n));
  add(detail::atMost("bound.2r1x", 3 * rx1_desired + 2 * rx2_desired, 3 * n));
  add(detail::atMost("bound.sum", 5 * (rx1_desired + rx2_desired), 6 * n, "5*m_total <= 6*n"));
  return report;
}

/// Sum DoF m_total / n of a trace, reduced.
inline std::pair<std::int64_t, std::int64_t> sumDof(const MessageSizes& sizes, int n) {
  const std::int64_t total = totalSymbols(sizes);
  const std::int64_t g = std::gcd(total, static_cast<std::int64_t>(n));
  return {total / (g == 0 ? 1 : g), n / (g == 0 ? 1 : g)};
}

}  // namespace doflab
