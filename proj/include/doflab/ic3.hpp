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

// Three-user interference channel: Tx_j carries one message, for Rx_j.
// Decodability in projection form and the audit of the 9/7 linear DoF
// upper bound for symmetric message sizes.

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "doflab/channel.hpp"
#include "doflab/ratmat.hpp"
#include "doflab/scheme.hpp"
#include "doflab/verify.hpp"

namespace doflab {

struct IcTrace {
  int n = 0;
  std::array<int, 3> m{};
  std::array<RationalMatrix, 3> V;

  const RationalMatrix& v(int j) const { return V.at(static_cast<std::size_t>(j - 1)); }
  int size(int j) const { return m.at(static_cast<std::size_t>(j - 1)); }
  bool symmetric() const { return m[0] == m[1] && m[1] == m[2]; }

  /// Diagonal messages of a 3x3 trace. Cross messages must be empty.
  static IcTrace fromPrecoderTrace(const PrecoderTrace& trace) {
    if (trace.links != LinkSet::interference3()) throw DimensionError("three-user trace required");
    for (const auto& [l, size] : trace.sizes) {
      if (l.rx != l.tx && size != 0) throw DimensionError("interference channel carries only direct messages");
    }
    IcTrace ic;
    ic.n = trace.n;
    for (int j = 1; j <= 3; ++j) {
      ic.m[static_cast<std::size_t>(j - 1)] = trace.size(j, j);
      ic.V[static_cast<std::size_t>(j - 1)] = trace.v(j, j);
    }
    return ic;
  }
};

namespace detail {

inline RationalMatrix icBlock(const IcTrace& trace, const ChannelRealization& r, int k, int j) {
  return scaleRows(diagEntries(r, k, j), trace.v(j));
}

inline RationalMatrix icConcat(const IcTrace& trace, const ChannelRealization& r, int k,
                               std::initializer_list<int> users) {
  std::vector<RationalMatrix> parts;
  for (int j : users) parts.push_back(icBlock(trace, r, k, j));
  return hconcat(parts);
}

inline void checkIcShapes(const IcTrace& trace, const ChannelRealization& r) {
  if (r.links() != LinkSet::interference3() || trace.n != r.n()) {
    throw DimensionError("IC trace and realization shapes differ");
  }
  for (int j = 1; j <= 3; ++j) {
    const auto& v = trace.v(j);
    if (v.rows() != static_cast<std::size_t>(r.n()) || v.cols() != static_cast<std::size_t>(trace.size(j))) {
      throw DimensionError("V" + std::to_string(j) + " is not n x m" + std::to_string(j));
    }
  }
}

/// User j's position under the cyclic relabeling 1 -> 1 + shift.
inline int rotate(int j, int shift) { return (j - 1 + shift) % 3 + 1; }

}  // namespace detail

/// "ic.decode.j": projDim(G_jj V_j, [G_ji V_i  G_jl V_l]) = m_j and
/// rank V_j = m_j.
inline VerificationReport icDecodabilityCheck(const IcTrace& trace, const ChannelRealization& r) {
  detail::checkIcShapes(trace, r);
  VerificationReport report;
  for (int j = 1; j <= 3; ++j) {
    const int a = detail::rotate(j, 1);
    const int b = detail::rotate(j, 2);
    const RationalMatrix interference = detail::icConcat(trace, r, j, {a, b});
    const std::size_t proj = projDim(detail::icBlock(trace, r, j, j), interference);
    const std::size_t v_rank = rank(trace.v(j));
    CheckResult c = detail::equality("ic.decode." + std::to_string(j), detail::i64(proj), trace.size(j),
                                     "rank[V" + std::to_string(j) + "]=" + std::to_string(v_rank));
    c.holds = c.holds && v_rank == static_cast<std::size_t>(trace.size(j));
    report.add(std::move(c));
  }
  return report;
}

/// The symmetric-rate converse chain ending in 7 m <= 3 n, for the receiver
/// roles of the proof and for the two cyclic relabelings (".rot1", ".rot2").
/// Chain links assume decodability and delayed CSIT; when either fails the
/// checks are still evaluated and labelled hypothesis-violated.
inline VerificationReport theorem2Audit(const IcTrace& trace, const ChannelRealization& r, bool decodable,
                                        bool causal = true) {
  using detail::i64;
  detail::checkIcShapes(trace, r);
  if (!trace.symmetric()) {
    throw PreconditionError("theorem2Audit needs m1 = m2 = m3, got (" + std::to_string(trace.m[0]) + "," +
                            std::to_string(trace.m[1]) + "," + std::to_string(trace.m[2]) + ")");
  }
  const std::int64_t m = trace.size(1);
  const std::int64_t n = r.n();

  VerificationReport report;
  for (int shift = 0; shift < 3; ++shift) {
    const std::string suffix = shift == 0 ? "" : ".rot" + std::to_string(shift);
    // In the unrotated frame: u1 decodes against (u2, u3) at Rx u1, and the
    // pair (V_u2, V_u3) is bounded at Rx u2 by its image at Rx u1.
    const int u1 = detail::rotate(1, shift);
    const int u2 = detail::rotate(2, shift);
    const int u3 = detail::rotate(3, shift);

    const std::int64_t own1 = i64(rank(detail::icBlock(trace, r, u1, u1)));
    const std::int64_t cross1 = i64(rank(detail::icConcat(trace, r, u1, {u2, u3})));
    const std::int64_t all1 = i64(rank(detail::icConcat(trace, r, u1, {u1, u2, u3})));
    const std::int64_t own2 = i64(rank(detail::icBlock(trace, r, u2, u2)));
    const std::int64_t cross2 = i64(rank(detail::icConcat(trace, r, u2, {u1, u3})));
    const std::int64_t all2 = i64(rank(detail::icConcat(trace, r, u2, {u1, u2, u3})));
    const std::int64_t pair_at_u2 = i64(rank(detail::icConcat(trace, r, u2, {u2, u3})));
    const std::int64_t pair_at_u1 = cross1;

    std::string premise;
    if (!decodable) premise = "hypothesis-violated: trace is not decodable";
    if (!causal) {
      premise += (premise.empty() ? "" : "; ") + std::string("hypothesis-violated: precoders are not delayed-CSIT");
    }
    auto add = [&](CheckResult c, bool needs_decodability) {
      const bool violated = !causal || (needs_decodability && !decodable);
      if (violated) {
        c.hypothesisViolated = true;
        c.witness += (c.witness.empty() ? "" : "; ") + premise;
      }
      report.add(std::move(c));
    };

    add(detail::equality("ic.do3user" + suffix, own1 + cross1, all1), true);
    add(detail::equality("ic.do3user0" + suffix, own2 + cross2, all2), true);
    add(detail::equality("ic.do3user3" + suffix, pair_at_u2, 2 * m,
                         "rank[V" + std::to_string(u2) + "]+rank[V" + std::to_string(u3) + "]=" +
                             std::to_string(rank(trace.v(u2)) + rank(trace.v(u3)))),
        true);
    CheckResult lemma = detail::atMost("ic.lemma1" + suffix, 2 * pair_at_u2, 3 * pair_at_u1,
                                       "2*" + std::to_string(pair_at_u2) + " <= 3*" + std::to_string(pair_at_u1));
    lemma.lhs = pair_at_u2;
    lemma.rhs = pair_at_u1;
    add(std::move(lemma), false);
    add(detail::atMost("ic.do3user5" + suffix, 4 * m, 3 * pair_at_u1), true);
    add(detail::atMost("ic.bound97" + suffix, 7 * m, 3 * n), true);
  }
  return report;
}

}  // namespace doflab
