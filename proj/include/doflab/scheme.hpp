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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "doflab/channel.hpp"
#include "doflab/ratmat.hpp"

namespace doflab {

/// Number of information symbols per message link, m_kj(n). For the
/// X-channel all four links are present; for the interference channel only
/// the direct links (j, j).
using MessageSizes = std::map<Link, int>;

/// Precoder rows emitted for one timeslot, keyed by message link.
using PrecoderRows = std::map<Link, RowVector>;

class SchemeContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline int totalSymbols(const MessageSizes& sizes) {
  int total = 0;
  for (const auto& [link, m] : sizes) total += m;
  return total;
}

/// A linear coding strategy with block length n. precode(t, csit) must read
/// channel state only through `csit`.
class LinearScheme {
 public:
  virtual ~LinearScheme() = default;

  virtual std::string name() const = 0;
  virtual LinkSet links() const = 0;
  virtual int blockLength() const = 0;
  virtual MessageSizes sizes() const = 0;
  virtual PrecoderRows precode(int t, const CsitView& csit) const = 0;

  /// Set only by negative controls that need current-slot coefficients.
  virtual bool requiresInstantCsit() const { return false; }

  /// False for search schemes whose sizes are drawn without regard to
  /// whether the receivers can decode.
  virtual bool claimsDecodability() const { return true; }
};

/// Row t of V[l] is the precoder emitted for link l at timeslot t.
struct PrecoderTrace {
  LinkSet links;
  int n = 0;
  MessageSizes sizes;
  std::map<Link, RationalMatrix> V;

  /// n x m_l precoding matrix; n x 0 for links without a message.
  const RationalMatrix& v(Link l) const {
    auto it = V.find(l);
    if (it == V.end()) throw BoundsError("trace has no link " + linkLabel(l));
    return it->second;
  }
  const RationalMatrix& v(int k, int j) const { return v(Link{k, j}); }

  int size(Link l) const {
    auto it = sizes.find(l);
    return it == sizes.end() ? 0 : it->second;
  }
  int size(int k, int j) const { return size(Link{k, j}); }

  friend bool operator==(const PrecoderTrace&, const PrecoderTrace&) = default;
};

namespace detail {

inline void checkSizes(const MessageSizes& sizes, LinkSet links) {
  for (const auto& [l, m] : sizes) {
    if (l.rx < 1 || l.rx > links.numRx || l.tx < 1 || l.tx > links.numTx) {
      throw SchemeContractError("message link " + linkLabel(l) + " outside the link set");
    }
    if (m < 0) throw SchemeContractError("negative message size for " + linkLabel(l));
  }
}

template <typename ViewFactory>
PrecoderTrace execute(const LinearScheme& s, const ChannelRealization& r, ViewFactory&& view_at) {
  if (s.blockLength() != r.n()) {
    throw SchemeContractError("scheme block length " + std::to_string(s.blockLength()) +
                              " does not match realization length " + std::to_string(r.n()));
  }
  if (s.links() != r.links()) throw SchemeContractError("scheme and realization link sets differ");
  const MessageSizes sizes = s.sizes();
  checkSizes(sizes, r.links());

  std::map<Link, std::vector<RowVector>> rows;
  for (int t = 1; t <= r.n(); ++t) {
    PrecoderRows emitted = s.precode(t, view_at(r, t));
    for (const auto& [l, m] : sizes) {
      auto it = emitted.find(l);
      if (it == emitted.end()) {
        if (m == 0) {
          rows[l].emplace_back();
          continue;
        }
        throw SchemeContractError("no precoder emitted for link " + linkLabel(l) + " at t=" + std::to_string(t));
      }
      if (it->second.size() != static_cast<std::size_t>(m)) {
        throw SchemeContractError("precoder for link " + linkLabel(l) + " at t=" + std::to_string(t) +
                                  " has length " + std::to_string(it->second.size()) + ", expected " +
                                  std::to_string(m));
      }
      rows[l].push_back(std::move(it->second));
      emitted.erase(it);
    }
    if (!emitted.empty()) {
      throw SchemeContractError("precoder emitted for undeclared link " + linkLabel(emitted.begin()->first));
    }
  }

  PrecoderTrace trace{r.links(), r.n(), sizes, {}};
  for (int k = 1; k <= r.links().numRx; ++k) {
    for (int j = 1; j <= r.links().numTx; ++j) {
      const Link l{k, j};
      auto it = rows.find(l);
      trace.V[l] = it == rows.end() ? RationalMatrix(static_cast<std::size_t>(r.n()), 0)
                                    : RationalMatrix::fromRowVectors(it->second, static_cast<std::size_t>(trace.size(l)));
    }
  }
  return trace;
}

}  // namespace detail

/// Runs `s` for t = 1..n, giving it csitAt(r, t) at each step.
inline PrecoderTrace runScheme(const LinearScheme& s, const ChannelRealization& r) {
  return detail::execute(s, r, [](const ChannelRealization& rr, int t) { return csitAt(rr, t); });
}

namespace unsafe {

/// Runs `s` with full knowledge of the realization at every timeslot.
inline PrecoderTrace runSchemeFullCsit(const LinearScheme& s, const ChannelRealization& r) {
  return detail::execute(s, r, [](const ChannelRealization& rr, int t) { return fullCsit(rr, t); });
}

}  // namespace unsafe

// ---------------------------------------------------------------------------
// Built-in schemes

namespace detail {

inline RowVector row(std::initializer_list<int> values) {
  RowVector out;
  for (int v : values) out.emplace_back(v);
  return out;
}

inline MessageSizes xSizes(int m11, int m12, int m21, int m22) {
  return {{{1, 1}, m11}, {{1, 2}, m12}, {{2, 1}, m21}, {{2, 2}, m22}};
}

}  // namespace detail

/// Five-slot delayed-CSIT X-channel scheme with sizes (m11, m12, m21, m22) =
/// (2, 1, 1, 2). Slots 1-2 serve a1, a2 and b1, slots 3-4 serve c1 and d1, d2;
/// slot 5 retransmits the equations each receiver overheard for the other:
///   m1 = (g22(2) g21(1), -g22(1) g21(2)) on V11,
///   m2 = (g12(3) g11(4), -g11(3) g12(4)) on V22.
class GmkScheme final : public LinearScheme {
 public:
  std::string name() const override { return "gmk"; }
  LinkSet links() const override { return LinkSet::xChannel(); }
  int blockLength() const override { return 5; }
  MessageSizes sizes() const override { return detail::xSizes(2, 1, 1, 2); }

  PrecoderRows precode(int t, const CsitView& csit) const override {
    using detail::row;
    switch (t) {
      case 1: return {{{1, 1}, row({1, 0})}, {{1, 2}, row({1})}, {{2, 1}, row({0})}, {{2, 2}, row({0, 0})}};
      case 2: return {{{1, 1}, row({0, 1})}, {{1, 2}, row({1})}, {{2, 1}, row({0})}, {{2, 2}, row({0, 0})}};
      case 3: return {{{1, 1}, row({0, 0})}, {{1, 2}, row({0})}, {{2, 1}, row({1})}, {{2, 2}, row({1, 0})}};
      case 4: return {{{1, 1}, row({0, 0})}, {{1, 2}, row({0})}, {{2, 1}, row({1})}, {{2, 2}, row({0, 1})}};
      case 5: {
        RowVector m1{csit.coeff(2, 2, 2) * csit.coeff(2, 1, 1), -csit.coeff(2, 2, 1) * csit.coeff(2, 1, 2)};
        RowVector m2{csit.coeff(1, 2, 3) * csit.coeff(1, 1, 4), -csit.coeff(1, 1, 3) * csit.coeff(1, 2, 4)};
        return {{{1, 1}, std::move(m1)}, {{1, 2}, row({0})}, {{2, 1}, row({0})}, {{2, 2}, std::move(m2)}};
      }
      default: throw BoundsError("gmk: timeslot out of range");
    }
  }
};

/// Orthogonal time sharing: each slot carries one fresh symbol of the link
/// assigned to it (or nothing), with unit precoders.
class TdmaScheme final : public LinearScheme {
 public:
  /// `assignment[t-1]` is the link served at slot t; nullopt leaves it idle.
  TdmaScheme(LinkSet links, std::vector<Link> message_links, std::vector<std::optional<Link>> assignment,
             std::string name = "tdma")
      : links_(links), assignment_(std::move(assignment)), name_(std::move(name)) {
    validate(links_);
    if (assignment_.empty()) throw std::invalid_argument("tdma: block length must be positive");
    for (Link l : message_links) sizes_[l] = 0;
    for (const auto& slot : assignment_) {
      if (!slot) continue;
      if (!sizes_.contains(*slot)) throw std::invalid_argument("tdma: slot assigned to undeclared link");
      ++sizes_[*slot];
    }
    detail::checkSizes(sizes_, links_);
  }

  std::string name() const override { return name_; }
  LinkSet links() const override { return links_; }
  int blockLength() const override { return static_cast<int>(assignment_.size()); }
  MessageSizes sizes() const override { return sizes_; }

  PrecoderRows precode(int t, const CsitView&) const override {
    if (t < 1 || t > blockLength()) throw BoundsError("tdma: timeslot out of range");
    PrecoderRows rows;
    for (const auto& [l, m] : sizes_) rows[l] = RowVector(static_cast<std::size_t>(m));
    if (const auto& slot = assignment_[static_cast<std::size_t>(t - 1)]) {
      int column = 0;
      for (int s = 1; s < t; ++s) {
        if (assignment_[static_cast<std::size_t>(s - 1)] == slot) ++column;
      }
      rows[*slot][static_cast<std::size_t>(column)] = 1;
    }
    return rows;
  }

 private:
  LinkSet links_;
  std::vector<std::optional<Link>> assignment_;
  MessageSizes sizes_;
  std::string name_;
};

/// X-channel round robin over (1,1), (1,2), (2,1), (2,2).
inline std::unique_ptr<LinearScheme> tdmaScheme(int n) {
  if (n < 1) throw std::invalid_argument("tdma: block length must be positive");
  const std::vector<Link> order{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  std::vector<std::optional<Link>> assignment;
  for (int t = 0; t < n; ++t) assignment.emplace_back(order[static_cast<std::size_t>(t % 4)]);
  return std::make_unique<TdmaScheme>(LinkSet::xChannel(), order, std::move(assignment));
}

/// Three-user interference channel round robin over users 1, 2, 3.
inline std::unique_ptr<LinearScheme> icTdmaScheme(int n) {
  if (n < 1) throw std::invalid_argument("tdma: block length must be positive");
  const std::vector<Link> users{{1, 1}, {2, 2}, {3, 3}};
  std::vector<std::optional<Link>> assignment;
  for (int t = 0; t < n; ++t) assignment.emplace_back(users[static_cast<std::size_t>(t % 3)]);
  return std::make_unique<TdmaScheme>(LinkSet::interference3(), users, std::move(assignment), "ic-tdma");
}

/// Three slots, m11 = 2, m12 = 1: slots 1-2 as in GmkScheme, slot 3 sends
/// m1^T x11 from Tx1 while Tx2 is silent. Rx1 sees rank 3 and Rx2 rank 2.
class RatioWitnessScheme final : public LinearScheme {
 public:
  std::string name() const override { return "ratio-witness"; }
  LinkSet links() const override { return LinkSet::xChannel(); }
  int blockLength() const override { return 3; }
  MessageSizes sizes() const override { return detail::xSizes(2, 1, 0, 0); }

  PrecoderRows precode(int t, const CsitView& csit) const override {
    using detail::row;
    switch (t) {
      case 1: return {{{1, 1}, row({1, 0})}, {{1, 2}, row({1})}};
      case 2: return {{{1, 1}, row({0, 1})}, {{1, 2}, row({1})}};
      case 3:
        return {{{1, 1}, RowVector{csit.coeff(2, 2, 2) * csit.coeff(2, 1, 1),
                                   -csit.coeff(2, 2, 1) * csit.coeff(2, 1, 2)}},
                {{1, 2}, row({0})}};
      default: throw BoundsError("ratio-witness: timeslot out of range");
    }
  }
};

/// Negative control. Both transmitters send one symbol at t=1 and resend it at
/// t=2 scaled by g2j(1)/g2j(2), which makes Rx2's second equation a copy of
/// its first. Needs g(2) at t=2, so runScheme rejects it.
class InstantCsitRepeatScheme final : public LinearScheme {
 public:
  std::string name() const override { return "icsit-repeat"; }
  LinkSet links() const override { return LinkSet::xChannel(); }
  int blockLength() const override { return 2; }
  MessageSizes sizes() const override { return detail::xSizes(1, 1, 0, 0); }
  bool requiresInstantCsit() const override { return true; }

  PrecoderRows precode(int t, const CsitView& csit) const override {
    switch (t) {
      case 1: return {{{1, 1}, detail::row({1})}, {{1, 2}, detail::row({1})}};
      case 2:
        return {{{1, 1}, RowVector{csit.coeff(2, 1, 1) / csit.coeff(2, 1, 2)}},
                {{1, 2}, RowVector{csit.coeff(2, 2, 1) / csit.coeff(2, 2, 2)}}};
      default: throw BoundsError("icsit-repeat: timeslot out of range");
    }
  }
};

/// Constant precoders read from rows; the static-scheme file format.
class StaticScheme final : public LinearScheme {
 public:
  StaticScheme(LinkSet links, int n, MessageSizes sizes, std::map<Link, RationalMatrix> rows,
               std::string name = "static")
      : links_(links), n_(n), sizes_(std::move(sizes)), rows_(std::move(rows)), name_(std::move(name)) {
    validate(links_);
    if (n_ < 1) throw std::invalid_argument("static scheme: block length must be positive");
    detail::checkSizes(sizes_, links_);
    for (const auto& [l, m] : sizes_) {
      auto it = rows_.find(l);
      if (it == rows_.end()) {
        if (m != 0) throw SchemeContractError("static scheme: missing rows for link " + linkLabel(l));
        rows_[l] = RationalMatrix(static_cast<std::size_t>(n_), 0);
        continue;
      }
      if (it->second.rows() != static_cast<std::size_t>(n_) || it->second.cols() != static_cast<std::size_t>(m)) {
        throw SchemeContractError("static scheme: rows for link " + linkLabel(l) + " have the wrong shape");
      }
    }
    for (const auto& [l, matrix] : rows_) {
      if (!sizes_.contains(l)) throw SchemeContractError("static scheme: rows for undeclared link " + linkLabel(l));
    }
  }

  std::string name() const override { return name_; }
  LinkSet links() const override { return links_; }
  int blockLength() const override { return n_; }
  MessageSizes sizes() const override { return sizes_; }

  PrecoderRows precode(int t, const CsitView&) const override {
    if (t < 1 || t > n_) throw BoundsError("static scheme: timeslot out of range");
    PrecoderRows out;
    for (const auto& [l, matrix] : rows_) out[l] = matrix.row(static_cast<std::size_t>(t - 1));
    return out;
  }

 private:
  LinkSet links_;
  int n_;
  MessageSizes sizes_;
  std::map<Link, RationalMatrix> rows_;
  std::string name_;
};

/// V11 and V12 each carry one symbol with unit precoders in every slot; the
/// other links are empty. Used for the degenerate-event sensitivity case.
inline std::unique_ptr<LinearScheme> repeatScheme(int n) {
  const auto un = static_cast<std::size_t>(n);
  RationalMatrix ones(un, 1);
  for (std::size_t t = 0; t < un; ++t) ones(t, 0) = 1;
  return std::make_unique<StaticScheme>(LinkSet::xChannel(), n, detail::xSizes(1, 1, 0, 0),
                                        std::map<Link, RationalMatrix>{{{1, 1}, ones}, {{1, 2}, ones}}, "repeat");
}

inline Link parseLinkLabel(const std::string& label) {
  if (label.size() != 2 || label[0] < '1' || label[0] > '3' || label[1] < '1' || label[1] > '3') {
    throw std::invalid_argument("bad link label '" + label + "'");
  }
  return Link{label[0] - '0', label[1] - '0'};
}

/// {"n":5, "sizes":{"11":2,...}, "rows":{"11":[["1","0"],...]}} with an
/// optional "links":[numTx,numRx] (default inferred from the labels).
inline std::unique_ptr<StaticScheme> staticSchemeFromJson(const nlohmann::json& doc, std::string name = "static") {
  const int n = doc.at("n").get<int>();
  MessageSizes sizes;
  bool mentions_three = false;
  for (const auto& [label, m] : doc.at("sizes").items()) {
    const Link l = parseLinkLabel(label);
    mentions_three = mentions_three || l.rx == 3 || l.tx == 3;
    sizes[l] = m.get<int>();
  }
  LinkSet links = mentions_three ? LinkSet::interference3() : LinkSet::xChannel();
  if (doc.contains("links")) links = LinkSet{doc["links"].at(0).get<int>(), doc["links"].at(1).get<int>()};

  std::map<Link, RationalMatrix> rows;
  if (doc.contains("rows")) {
    for (const auto& [label, matrix] : doc["rows"].items()) {
      const Link l = parseLinkLabel(label);
      if (!sizes.contains(l)) throw SchemeContractError("static scheme: rows for undeclared link " + label);
      const auto m = static_cast<std::size_t>(sizes[l]);
      std::vector<RowVector> parsed;
      for (const auto& r : matrix) {
        RowVector v;
        for (const auto& e : r) v.push_back(parseRational(e.get<std::string>()));
        parsed.push_back(std::move(v));
      }
      if (parsed.size() != static_cast<std::size_t>(n)) {
        throw SchemeContractError("static scheme: link " + label + " needs " + std::to_string(n) + " rows");
      }
      try {
        rows[l] = RationalMatrix::fromRowVectors(parsed, m);
      } catch (const DimensionError&) {
        throw SchemeContractError("static scheme: a row of link " + label + " has the wrong length");
      }
    }
  }
  return std::make_unique<StaticScheme>(links, n, std::move(sizes), std::move(rows), std::move(name));
}

// ---------------------------------------------------------------------------
// Random delayed-CSIT schemes

/// Each nonzero precoder entry at slot t is a sparse rational combination of
/// monomials of degree <= complexity in coefficients of slots 1..t-1. The
/// monomial program is fixed by the seed at construction, so the scheme is
/// causal by construction. Rows are silent with probability 1/4.
class RandomDelayedScheme final : public LinearScheme {
 public:
  struct Coord {
    int k, j, s;
  };
  struct Term {
    Rational coef;
    std::vector<Coord> factors;
  };

  bool claimsDecodability() const override { return false; }

  RandomDelayedScheme(std::uint64_t seed, LinkSet links, int n, MessageSizes sizes, int complexity)
      : seed_(seed), links_(links), n_(n), sizes_(std::move(sizes)), complexity_(complexity) {
    validate(links_);
    if (n_ < 1) throw std::invalid_argument("random scheme: block length must be positive");
    if (complexity_ < 0) throw std::invalid_argument("random scheme: complexity must be nonnegative");
    detail::checkSizes(sizes_, links_);

    std::mt19937_64 gen(seed_);
    auto draw = [&](std::int64_t lo, std::int64_t hi) { return detail::uniformInt(gen, lo, hi); };
    for (const auto& [l, m] : sizes_) {
      auto& per_slot = program_[l];
      per_slot.resize(static_cast<std::size_t>(n_));
      for (int t = 1; t <= n_; ++t) {
        auto& entries = per_slot[static_cast<std::size_t>(t - 1)];
        entries.resize(static_cast<std::size_t>(m));
        if (draw(0, 3) == 0) continue;  // silent slot
        for (auto& terms : entries) {
          const auto count = draw(1, 3);
          for (std::int64_t c = 0; c < count; ++c) {
            Term term;
            std::int64_t a = 0;
            while (a == 0) a = draw(-9, 9);
            term.coef = Rational(static_cast<long>(a), static_cast<unsigned long>(draw(1, 4)));
            term.coef.canonicalize();
            const std::int64_t max_degree = t > 1 ? complexity_ : 0;
            const auto degree = draw(0, max_degree);
            for (std::int64_t d = 0; d < degree; ++d) {
              term.factors.push_back(Coord{static_cast<int>(draw(1, links_.numRx)),
                                           static_cast<int>(draw(1, links_.numTx)),
                                           static_cast<int>(draw(1, t - 1))});
            }
            terms.push_back(std::move(term));
          }
        }
      }
    }
  }

  std::string name() const override {
    return "random:" + std::to_string(seed_) + ":" + std::to_string(complexity_);
  }
  LinkSet links() const override { return links_; }
  int blockLength() const override { return n_; }
  MessageSizes sizes() const override { return sizes_; }
  int complexity() const { return complexity_; }

  PrecoderRows precode(int t, const CsitView& csit) const override {
    if (t < 1 || t > n_) throw BoundsError("random scheme: timeslot out of range");
    PrecoderRows out;
    for (const auto& [l, per_slot] : program_) {
      const auto& entries = per_slot[static_cast<std::size_t>(t - 1)];
      RowVector v(entries.size());
      for (std::size_t c = 0; c < entries.size(); ++c) {
        for (const Term& term : entries[c]) {
          Rational value = term.coef;
          for (const Coord& f : term.factors) value *= csit.coeff(f.k, f.j, f.s);
          v[c] += value;
        }
      }
      out[l] = std::move(v);
    }
    return out;
  }

 private:
  std::uint64_t seed_;
  LinkSet links_;
  int n_;
  MessageSizes sizes_;
  int complexity_;
  // program_[link][t-1][column] -> terms
  std::map<Link, std::vector<std::vector<std::vector<Term>>>> program_;
};

/// X-channel sizes derived from the seed: each m_kj uniform on [0, ceil(n/2)].
inline MessageSizes randomXSizes(std::uint64_t seed, int n) {
  std::mt19937_64 gen(deriveSeed(seed, 0));
  MessageSizes sizes;
  for (int k = 1; k <= 2; ++k)
    for (int j = 1; j <= 2; ++j) sizes[{k, j}] = static_cast<int>(detail::uniformInt(gen, 0, (n + 1) / 2));
  return sizes;
}

inline std::unique_ptr<LinearScheme> randomDelayedScheme(std::uint64_t seed, int n, MessageSizes sizes,
                                                         int complexity) {
  bool three_user = false;
  for (const auto& [l, m] : sizes) three_user = three_user || l.rx == 3 || l.tx == 3;
  const LinkSet links = three_user ? LinkSet::interference3() : LinkSet::xChannel();
  return std::make_unique<RandomDelayedScheme>(seed, links, n, std::move(sizes), complexity);
}

// ---------------------------------------------------------------------------
// Causality audit

struct CausalityAuditResult {
  bool causal = true;
  int slot = 0;       // first timeslot whose row changed under mutation (0 if none)
  Link link{};        // link whose row changed
};

/// Copy of `r` whose coefficients at timeslots >= t are replaced by fresh
/// draws from `seed`; every replaced coefficient differs from the original.
inline ChannelRealization mutateFrom(const ChannelRealization& r, int t, std::uint64_t seed) {
  const ChannelRealization fresh = sampleRealization(seed, r.links(), r.n());
  std::vector<Rational> coeffs(r.coefficients().begin(), r.coefficients().end());
  for (int s = t; s <= r.n(); ++s) {
    for (int k = 1; k <= r.links().numRx; ++k) {
      for (int j = 1; j <= r.links().numTx; ++j) {
        const std::size_t idx = r.index(k, j, s);
        coeffs[idx] = fresh.coeff(k, j, s) == coeffs[idx] ? Rational(-coeffs[idx]) : fresh.coeff(k, j, s);
      }
    }
  }
  return ChannelRealization(r.links(), r.n(), std::move(coeffs));
}

/// For every t, runs `s` with full channel access on `r` and on a mutant that
/// agrees with `r` before t and differs from t on; the scheme is causal on
/// this pair iff row t of every V_kj is unchanged.
inline CausalityAuditResult causalityAuditDetail(const LinearScheme& s, const ChannelRealization& r,
                                                 std::uint64_t seed) {
  const PrecoderTrace base = unsafe::runSchemeFullCsit(s, r);
  for (int t = 1; t <= r.n(); ++t) {
    const ChannelRealization mutant = mutateFrom(r, t, deriveSeed(seed, static_cast<std::uint64_t>(t)));
    const PrecoderTrace other = unsafe::runSchemeFullCsit(s, mutant);
    for (const auto& [l, matrix] : base.V) {
      if (matrix.row(static_cast<std::size_t>(t - 1)) != other.v(l).row(static_cast<std::size_t>(t - 1))) {
        return {false, t, l};
      }
    }
  }
  return {};
}

inline bool causalityAudit(const LinearScheme& s, const ChannelRealization& r, std::uint64_t seed) {
  return causalityAuditDetail(s, r, seed).causal;
}

// ---------------------------------------------------------------------------
// Name resolution

/// Built-in names: "gmk", "tdma", "ratio-witness", "icsit-repeat", "repeat",
/// "ic-tdma", "random:<seed>:<complexity>". `n` applies to the schemes with a
/// free block length (tdma: 4, repeat: 2, ic-tdma: 3, random: 5 by default).
inline std::unique_ptr<LinearScheme> builtinScheme(std::string_view name, std::optional<int> n = std::nullopt) {
  if (name == "gmk") return std::make_unique<GmkScheme>();
  if (name == "ratio-witness") return std::make_unique<RatioWitnessScheme>();
  if (name == "icsit-repeat") return std::make_unique<InstantCsitRepeatScheme>();
  if (name == "tdma") return tdmaScheme(n.value_or(4));
  if (name == "repeat") return repeatScheme(n.value_or(2));
  if (name == "ic-tdma") return icTdmaScheme(n.value_or(3));
  if (name.starts_with("random:")) {
    const std::string_view rest = name.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("expected random:<seed>:<complexity>");
    std::uint64_t seed = 0;
    int complexity = 0;
    const auto seed_text = rest.substr(0, colon);
    const auto cx_text = rest.substr(colon + 1);
    auto r1 = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
    auto r2 = std::from_chars(cx_text.data(), cx_text.data() + cx_text.size(), complexity);
    if (r1.ec != std::errc{} || r1.ptr != seed_text.data() + seed_text.size() || r2.ec != std::errc{} ||
        r2.ptr != cx_text.data() + cx_text.size()) {
      throw std::invalid_argument("expected random:<seed>:<complexity>, got '" + std::string(name) + "'");
    }
    const int block = n.value_or(5);
    return std::make_unique<RandomDelayedScheme>(seed, LinkSet::xChannel(), block, randomXSizes(seed, block),
                                                 complexity);
  }
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

/// A built-in name, or a path to a static-scheme JSON file.
inline std::unique_ptr<LinearScheme> resolveScheme(const std::string& name_or_path, std::optional<int> n = std::nullopt) {
  try {
    return builtinScheme(name_or_path, n);
  } catch (const std::invalid_argument&) {
    if (name_or_path.starts_with("random:")) throw;
  }
  std::ifstream in(name_or_path);
  if (!in) throw std::invalid_argument("unknown scheme or unreadable file '" + name_or_path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("cannot parse scheme file '" + name_or_path + "': " + e.what());
  }
  return staticSchemeFromJson(doc, doc.value("name", std::string("static")));
}

}  // namespace doflab
