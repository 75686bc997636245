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

// Seeded Monte-Carlo runs of (scheme, realization) trials.
//
// Trial i draws everything it needs from deriveSeed(base_seed, i), so the
// outcome of a trial depends only on the configuration and its index; worker
// count and scheduling never reach the log.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "doflab/channel.hpp"
#include "doflab/ic3.hpp"
#include "doflab/scheme.hpp"
#include "doflab/verify.hpp"

namespace doflab {

inline const std::set<std::string>& knownCheckGroups() {
  static const std::set<std::string> groups{"decodability", "lemma1", "lemma5", "converse",
                                            "lemma6",       "causality", "ic3"};
  return groups;
}

struct ExperimentConfig {
  /// A built-in name, a static-scheme file, or a per-trial family:
  /// "random:*" / "random:*:<complexity>", "ic-random", "ic-tdma-variant",
  /// "ic-mix" (alternates the two IC families by trial parity).
  std::string scheme = "gmk";
  std::uint64_t trials = 1;
  std::uint64_t baseSeed = 0;
  std::optional<int> n;  // fixed block length; otherwise drawn from [nMin, nMax] for families
  int nMin = 2;
  int nMax = 8;
  std::optional<int> complexity;  // random families: fixed complexity, else drawn from {0, 1, 2}
  std::optional<int> m;           // IC families: fixed per-user size, else drawn
  std::set<std::string> checks{"decodability", "lemma1", "lemma5", "converse", "lemma6", "causality"};
  bool adversarialLemma6 = false;
  unsigned threads = 0;  // 0: hardware concurrency, capped by DOFLAB_THREADS

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (checks.empty()) throw std::invalid_argument("at least one check group is required");
    for (const auto& c : checks) {
      if (!knownCheckGroups().contains(c)) throw std::invalid_argument("unknown check group '" + c + "'");
    }
    if (nMin < 1 || nMax < nMin) throw std::invalid_argument("invalid block-length range");
    if (n && *n < 1) throw std::invalid_argument("block length must be positive");
    if (complexity && *complexity < 0) throw std::invalid_argument("complexity must be nonnegative");
    if (m && *m < 0) throw std::invalid_argument("message size must be nonnegative");
    if (scheme.starts_with("random:*") && scheme != "random:*") {
      const std::string rest = scheme.substr(8);
      if (rest.size() < 2 || rest[0] != ':' || rest.find_first_not_of("0123456789", 1) != std::string::npos) {
        throw std::invalid_argument("expected random:* or random:*:<complexity>, got '" + scheme + "'");
      }
    }
  }
};

inline nlohmann::json toJson(const ExperimentConfig& cfg) {
  nlohmann::json j{{"scheme", cfg.scheme},
                   {"trials", cfg.trials},
                   {"base_seed", cfg.baseSeed},
                   {"n", cfg.n ? nlohmann::json(*cfg.n) : nlohmann::json()},
                   {"n_min", cfg.nMin},
                   {"n_max", cfg.nMax},
                   {"complexity", cfg.complexity ? nlohmann::json(*cfg.complexity) : nlohmann::json()},
                   {"m", cfg.m ? nlohmann::json(*cfg.m) : nlohmann::json()},
                   {"checks", cfg.checks},
                   {"adversarial_lemma6", cfg.adversarialLemma6}};
  return j;
}

inline ExperimentConfig configFromJson(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.scheme = j.at("scheme").get<std::string>();
  cfg.trials = j.at("trials").get<std::uint64_t>();
  cfg.baseSeed = j.at("base_seed").get<std::uint64_t>();
  if (!j.at("n").is_null()) cfg.n = j.at("n").get<int>();
  cfg.nMin = j.at("n_min").get<int>();
  cfg.nMax = j.at("n_max").get<int>();
  if (!j.at("complexity").is_null()) cfg.complexity = j.at("complexity").get<int>();
  if (!j.at("m").is_null()) cfg.m = j.at("m").get<int>();
  cfg.checks = j.at("checks").get<std::set<std::string>>();
  cfg.adversarialLemma6 = j.at("adversarial_lemma6").get<bool>();
  cfg.validate();
  return cfg;
}

struct TrialRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::uint64_t realizationHash = 0;
  std::string scheme;
  int n = 0;
  MessageSizes sizes;
  bool causal = true;
  bool expectedNegative = false;
  bool decodable = false;
  VerificationReport report;
  std::string error;      // empty unless the trial threw
  std::string errorKind;  // "contract" or "internal"

  /// A failed check (or internal error) that is not explained by a violated
  /// premise or a whitelisted negative control.
  bool hasFinding() const {
    if (expectedNegative) return false;
    return errorKind == "internal" || report.hasFinding();
  }
};

inline nlohmann::json sizesToJson(const MessageSizes& sizes) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [l, m] : sizes) j[linkLabel(l)] = m;
  return j;
}

inline nlohmann::json toJson(const TrialRecord& t) {
  nlohmann::json j{{"trial", t.index},
                   {"seed", t.seed},
                   {"realization_hash", t.realizationHash},
                   {"scheme", t.scheme},
                   {"n", t.n},
                   {"sizes", sizesToJson(t.sizes)},
                   {"causal", t.causal},
                   {"expected_negative", t.expectedNegative},
                   {"decodable", t.decodable},
                   {"checks", toJson(t.report)}};
  if (!t.error.empty()) {
    j["error"] = t.error;
    j["error_kind"] = t.errorKind;
  }
  return j;
}

inline TrialRecord trialFromJson(const nlohmann::json& j) {
  TrialRecord t;
  t.index = j.at("trial").get<std::uint64_t>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.realizationHash = j.at("realization_hash").get<std::uint64_t>();
  t.scheme = j.at("scheme").get<std::string>();
  t.n = j.at("n").get<int>();
  for (const auto& [label, m] : j.at("sizes").items()) t.sizes[parseLinkLabel(label)] = m.get<int>();
  t.causal = j.at("causal").get<bool>();
  t.expectedNegative = j.at("expected_negative").get<bool>();
  t.decodable = j.at("decodable").get<bool>();
  t.report = reportFromJson(j.at("checks"));
  t.error = j.value("error", std::string());
  t.errorKind = j.value("error_kind", std::string());
  return t;
}

struct CheckTally {
  std::uint64_t pass = 0;
  std::uint64_t fail = 0;
  std::uint64_t hypothesisViolated = 0;  // counted in pass/fail too
  friend bool operator==(const CheckTally&, const CheckTally&) = default;
};

struct RatioPair {
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::uint64_t trial = 0;
  std::string check;
  std::string scheme;
  friend bool operator==(const RatioPair&, const RatioPair&) = default;
};

/// lhs1/rhs1 > lhs2/rhs2 with rhs possibly zero (x/0 with x > 0 is infinite).
inline bool ratioGreater(std::int64_t lhs1, std::int64_t rhs1, std::int64_t lhs2, std::int64_t rhs2) {
  // 0/0 (both blocks empty) ranks below every other pair.
  if (lhs2 == 0 && rhs2 == 0) return lhs1 != 0 || rhs1 != 0;
  return lhs1 * rhs2 > lhs2 * rhs1;
}

struct Finding {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string check;
  friend bool operator==(const Finding&, const Finding&) = default;
};

struct Aggregate {
  std::map<std::string, CheckTally> tallies;
  std::optional<RatioPair> maxRatio;  // over lemma1.* and ic.lemma1* on causal trials
  std::vector<Finding> findings;
  std::uint64_t decodable = 0;
  std::uint64_t causal = 0;
  std::uint64_t errors = 0;
  std::uint64_t contractErrors = 0;
};

struct TrialLog {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  Aggregate aggregate;

  bool hasFinding() const { return !aggregate.findings.empty(); }
};

inline bool isRatioCheck(const std::string& name) {
  return name.starts_with("lemma1.") || name.starts_with("ic.lemma1");
}

/// Folds trial records in index order. Every statistic is an exact count or
/// an integer pair; ties for the maximum ratio keep the earliest trial.
inline Aggregate aggregate(const std::vector<TrialRecord>& trials) {
  Aggregate agg;
  for (const auto& t : trials) {
    if (t.decodable) ++agg.decodable;
    if (t.causal) ++agg.causal;
    if (!t.error.empty()) {
      ++agg.errors;
      if (t.errorKind == "contract") ++agg.contractErrors;
      if (t.errorKind == "internal" && !t.expectedNegative) agg.findings.push_back({t.index, t.seed, "error"});
    }
    for (const auto& c : t.report.checks()) {
      auto& tally = agg.tallies[c.name];
      (c.holds ? tally.pass : tally.fail) += 1;
      if (c.hypothesisViolated) ++tally.hypothesisViolated;
      if (c.isFinding() && !t.expectedNegative) agg.findings.push_back({t.index, t.seed, c.name});
      if (isRatioCheck(c.name) && t.causal && !c.hypothesisViolated) {
        if (!agg.maxRatio || ratioGreater(c.lhs, c.rhs, agg.maxRatio->lhs, agg.maxRatio->rhs)) {
          agg.maxRatio = RatioPair{c.lhs, c.rhs, t.index, c.name, t.scheme};
        }
      }
    }
  }
  return agg;
}

inline nlohmann::json toJson(const Aggregate& agg) {
  nlohmann::json tallies = nlohmann::json::object();
  for (const auto& [name, t] : agg.tallies) {
    tallies[name] = {{"pass", t.pass}, {"fail", t.fail}, {"hypothesis_violated", t.hypothesisViolated}};
  }
  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : agg.findings) findings.push_back({{"trial", f.trial}, {"seed", f.seed}, {"check", f.check}});
  nlohmann::json j{{"checks", tallies},  {"findings", findings},
                   {"decodable", agg.decodable}, {"causal", agg.causal},
                   {"errors", agg.errors}};
  if (agg.maxRatio) {
    j["max_ratio"] = {{"lhs", agg.maxRatio->lhs},
                      {"rhs", agg.maxRatio->rhs},
                      {"trial", agg.maxRatio->trial},
                      {"check", agg.maxRatio->check},
                      {"scheme", agg.maxRatio->scheme}};
  } else {
    j["max_ratio"] = nullptr;
  }
  return j;
}

inline nlohmann::json toJson(const TrialLog& log) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : log.trials) trials.push_back(toJson(t));
  return {{"schema", "doflab/1"}, {"config", toJson(log.config)}, {"trials", trials},
          {"aggregate", toJson(log.aggregate)}};
}

/// trial,seed,check,holds,lhs,rhs; one row per check of every trial.
inline std::string toCsv(const std::vector<TrialRecord>& trials) {
  std::ostringstream out;
  out << "trial,seed,check,holds,lhs,rhs\n";
  for (const auto& t : trials) {
    for (const auto& c : t.report.checks()) {
      out << t.index << ',' << t.seed << ',' << c.name << ',' << (c.holds ? "true" : "false") << ',' << c.lhs << ','
          << c.rhs << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Per-trial scheme selection

namespace detail {

// Sub-seed slots of a trial seed.
inline constexpr std::uint64_t kSchemeStream = 1;
inline constexpr std::uint64_t kRealizationStream = 2;
inline constexpr std::uint64_t kAuditStream = 3;
inline constexpr std::uint64_t kShapeStream = 4;

inline std::int64_t drawIn(std::uint64_t seed, std::int64_t lo, std::int64_t hi) {
  std::mt19937_64 gen(seed);
  return uniformInt(gen, lo, hi);
}

/// Three-user time sharing with m slots per user in a seed-shuffled order;
/// leftover slots stay idle.
inline std::unique_ptr<LinearScheme> icTdmaVariant(std::uint64_t seed, int n, int m) {
  if (3 * m > n) throw std::invalid_argument("ic-tdma-variant needs 3m <= n");
  std::vector<std::optional<Link>> assignment(static_cast<std::size_t>(n));
  for (int j = 1; j <= 3; ++j)
    for (int c = 0; c < m; ++c) assignment[static_cast<std::size_t>((j - 1) * m + c)] = Link{j, j};
  std::mt19937_64 gen(seed);
  for (std::size_t i = assignment.size(); i > 1; --i) {
    const auto k = static_cast<std::size_t>(uniformInt(gen, 0, static_cast<std::int64_t>(i - 1)));
    std::swap(assignment[i - 1], assignment[k]);
  }
  return std::make_unique<TdmaScheme>(LinkSet::interference3(), std::vector<Link>{{1, 1}, {2, 2}, {3, 3}},
                                      std::move(assignment), "ic-tdma-variant");
}

inline std::unique_ptr<LinearScheme> icRandom(std::uint64_t seed, int n, int m, int complexity) {
  MessageSizes sizes{{{1, 1}, m}, {{2, 2}, m}, {{3, 3}, m}};
  return std::make_unique<RandomDelayedScheme>(seed, LinkSet::interference3(), n, std::move(sizes), complexity);
}

inline bool isFamily(const std::string& name) {
  return name.starts_with("random:*") || name == "ic-random" || name == "ic-tdma-variant" || name == "ic-mix";
}

inline std::optional<int> familyComplexity(const ExperimentConfig& cfg) {
  if (cfg.scheme.starts_with("random:*:")) return std::stoi(cfg.scheme.substr(9));
  return cfg.complexity;
}

/// Scheme for trial `trial_seed` under a per-trial family.
inline std::unique_ptr<LinearScheme> familyScheme(const ExperimentConfig& cfg, std::uint64_t index,
                                                  std::uint64_t trial_seed) {
  const std::uint64_t shape_seed = deriveSeed(trial_seed, kShapeStream);
  const int n = cfg.n.value_or(static_cast<int>(drawIn(deriveSeed(shape_seed, 0), cfg.nMin, cfg.nMax)));
  const int complexity =
      familyComplexity(cfg).value_or(static_cast<int>(drawIn(deriveSeed(shape_seed, 1), 0, 2)));
  const std::uint64_t scheme_seed = deriveSeed(trial_seed, kSchemeStream);

  if (cfg.scheme.starts_with("random:*")) {
    return std::make_unique<RandomDelayedScheme>(scheme_seed, LinkSet::xChannel(), n, randomXSizes(scheme_seed, n),
                                                 complexity);
  }
  const int m = cfg.m.value_or(static_cast<int>(drawIn(deriveSeed(shape_seed, 2), 1, std::max(1, n / 3))));
  std::string family = cfg.scheme;
  if (family == "ic-mix") family = (index % 2 == 0 && 3 * m <= n) ? "ic-tdma-variant" : "ic-random";
  if (family == "ic-tdma-variant") return icTdmaVariant(scheme_seed, n, m);
  return icRandom(scheme_seed, n, m, complexity);
}

}  // namespace detail

/// g21(2) := g22(2) g21(1) / g22(1), which makes slot 2's row at Rx2 parallel
/// to slot 1's for any pair of constant nonzero precoders.
inline ChannelRealization adversarialLemma6Realization(const ChannelRealization& r) {
  if (r.links() != LinkSet::xChannel() || r.n() < 2) {
    throw std::invalid_argument("adversarial Lemma 6 construction needs an X-channel with n >= 2");
  }
  return withCoefficient(r, 2, 1, 2, r.coeff(2, 2, 2) * r.coeff(2, 1, 1) / r.coeff(2, 2, 1));
}

namespace detail {

inline void markHypothesis(CheckResult& c, const std::string& why) {
  c.hypothesisViolated = true;
  c.witness += (c.witness.empty() ? "" : "; ") + why;
}

/// Copies `report` with every failed check labelled by `why`.
inline VerificationReport labelFailures(const VerificationReport& report, const std::string& why) {
  VerificationReport out;
  for (CheckResult c : report.checks()) {
    if (!c.holds && !c.hypothesisViolated) markHypothesis(c, why);
    out.add(std::move(c));
  }
  return out;
}

inline constexpr const char* kNoDecodabilityClaim = "hypothesis-violated: scheme makes no decodability claim";
inline constexpr const char* kConstructed = "hypothesis-violated: constructed realization, not sampled";

inline void evaluateX(const ExperimentConfig& cfg, const PrecoderTrace& trace, const ChannelRealization& r,
                      TrialRecord& rec, bool claims_decodability) {
  const auto& checks = cfg.checks;
  VerificationReport decode = decodabilityCheck(trace, r);
  rec.decodable = decode.allHold();
  if (!claims_decodability) decode = labelFailures(decode, kNoDecodabilityClaim);
  VerificationReport audit;
  if (checks.contains("decodability")) audit.merge(decode);
  if (checks.contains("lemma1")) audit.merge(rankRatioCheck(trace, r, rec.causal));
  if (checks.contains("lemma5")) audit.merge(lemma5Check(trace, r, TxPair::pair12(), rec.causal));
  if (checks.contains("converse")) audit.merge(converseAudit(trace, r, rec.decodable, rec.causal));
  if (checks.contains("lemma6")) {
    CheckResult c = degenerateEventCheck(trace, r);
    if (!rec.causal) markHypothesis(c, "hypothesis-violated: precoders are not delayed-CSIT");
    if (cfg.adversarialLemma6) markHypothesis(c, kConstructed);
    audit.add(std::move(c));
  }
  // Every inequality assumes a generic realization.
  rec.report.merge(cfg.adversarialLemma6 ? labelFailures(audit, kConstructed) : audit);
}

inline void evaluateIc(const ExperimentConfig& cfg, const PrecoderTrace& trace, const ChannelRealization& r,
                       TrialRecord& rec, bool claims_decodability) {
  const IcTrace ic = IcTrace::fromPrecoderTrace(trace);
  VerificationReport decode = icDecodabilityCheck(ic, r);
  rec.decodable = decode.allHold();
  if (!claims_decodability) decode = labelFailures(decode, kNoDecodabilityClaim);
  if (!cfg.checks.contains("ic3") && !cfg.checks.contains("decodability")) return;
  rec.report.merge(decode);
  if (cfg.checks.contains("ic3") && ic.symmetric()) rec.report.merge(theorem2Audit(ic, r, rec.decodable, rec.causal));
}

}  // namespace detail

/// Runs trial `index` of `cfg`. Never throws for scheme or checker failures;
/// those are recorded in the returned record.
inline TrialRecord runTrial(const ExperimentConfig& cfg, std::uint64_t index, const LinearScheme* shared = nullptr) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = deriveSeed(cfg.baseSeed, index);
  try {
    std::unique_ptr<LinearScheme> owned;
    const LinearScheme* scheme = shared;
    if (!scheme) {
      owned = detail::isFamily(cfg.scheme) ? detail::familyScheme(cfg, index, rec.seed)
                                           : resolveScheme(cfg.scheme, cfg.n);
      scheme = owned.get();
    }
    rec.scheme = scheme->name();
    rec.n = scheme->blockLength();
    rec.sizes = scheme->sizes();
    rec.expectedNegative = scheme->requiresInstantCsit();
    if (cfg.n && *cfg.n != rec.n) {
      throw SchemeContractError("scheme " + rec.scheme + " has block length " + std::to_string(rec.n) +
                                ", requested " + std::to_string(*cfg.n));
    }

    ChannelRealization r =
        sampleRealization(deriveSeed(rec.seed, detail::kRealizationStream), scheme->links(), rec.n);
    if (cfg.adversarialLemma6) r = adversarialLemma6Realization(r);
    rec.realizationHash = realizationHash(r);

    PrecoderTrace trace;
    try {
      trace = runScheme(*scheme, r);
    } catch (const CausalityViolation&) {
      rec.causal = false;
      trace = unsafe::runSchemeFullCsit(*scheme, r);
    }
    if (cfg.checks.contains("causality")) {
      const CausalityAuditResult audit =
          causalityAuditDetail(*scheme, r, deriveSeed(rec.seed, detail::kAuditStream));
      rec.causal = rec.causal && audit.causal;
      rec.report.add(CheckResult{"causality", audit.causal, audit.slot, 0,
                                 audit.causal ? std::string()
                                              : "row " + std::to_string(audit.slot) + " of V" +
                                                    linkLabel(audit.link) + " depends on current or future slots",
                                 false});
    }

    if (trace.links == LinkSet::xChannel()) {
      detail::evaluateX(cfg, trace, r, rec, scheme->claimsDecodability());
    } else {
      detail::evaluateIc(cfg, trace, r, rec, scheme->claimsDecodability());
    }
  } catch (const ConsistencyError& e) {
    rec.error = e.what();
    rec.errorKind = "internal";
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.errorKind = "contract";
  }
  return rec;
}

namespace detail {

inline unsigned workerCount(const ExperimentConfig& cfg) {
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("DOFLAB_THREADS")) {
    const long v = std::strtol(cap, nullptr, 10);
    if (v >= 1) workers = std::min(workers, static_cast<unsigned>(v));
  }
  return std::max(1u, workers);
}

}  // namespace detail

inline TrialLog runExperiment(const ExperimentConfig& cfg) {
  cfg.validate();
  // Fixed schemes are resolved once so an unknown name fails before any trial.
  std::unique_ptr<LinearScheme> shared;
  if (!detail::isFamily(cfg.scheme)) shared = resolveScheme(cfg.scheme, cfg.n);

  TrialLog log;
  log.config = cfg;
  log.trials.resize(cfg.trials);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t i = next++; i < cfg.trials; i = next++) log.trials[i] = runTrial(cfg, i, shared.get());
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(detail::workerCount(cfg), cfg.trials));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  log.aggregate = aggregate(log.trials);
  return log;
}

inline TrialRecord replayTrial(const ExperimentConfig& cfg, std::uint64_t index) {
  cfg.validate();
  return runTrial(cfg, index);
}

inline TrialLog logFromJson(const nlohmann::json& doc) {
  if (doc.value("schema", std::string()) != "doflab/1") throw std::invalid_argument("not a doflab/1 log");
  TrialLog log;
  log.config = configFromJson(doc.at("config"));
  for (const auto& t : doc.at("trials")) log.trials.push_back(trialFromJson(t));
  log.aggregate = aggregate(log.trials);
  return log;
}

inline void writeLog(const TrialLog& log, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << toCsv(log.trials);
  } else if (format == "json") {
    out << toJson(log).dump() << '\n';
  } else {
    throw std::invalid_argument("unknown format '" + format + "'");
  }
}

}  // namespace doflab
