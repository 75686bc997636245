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

// doflab command-line front end.
//
// stdout carries one JSON document (or CSV with --format csv); --pretty adds
// a readable summary on stderr. Exit status: 0 when every check holds or
// fails only under a violated premise, 1 on a finding, 2 on usage or
// contract errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "doflab/harness.hpp"

namespace {

using doflab::ExperimentConfig;
using doflab::TrialLog;
using doflab::TrialRecord;

constexpr int kOk = 0;
constexpr int kFinding = 1;
constexpr int kUsage = 2;

struct OutputOptions {
  std::string format = "json";
  std::string out;
  bool pretty = false;
};

void emit(const std::string& text, const OutputOptions& opts) {
  if (opts.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(opts.out, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write '" + opts.out + "'");
  file << text;
}

void prettyRecord(const TrialRecord& t) {
  std::cerr << "trial " << t.index << "  scheme " << t.scheme << "  n=" << t.n << "  sizes";
  for (const auto& [l, m] : t.sizes) std::cerr << ' ' << doflab::linkLabel(l) << '=' << m;
  std::cerr << (t.causal ? "" : "  [non-causal]") << (t.expectedNegative ? "  [negative control]" : "") << '\n';
  if (!t.error.empty()) std::cerr << "  error: " << t.error << '\n';
  for (const auto& c : t.report.checks()) {
    std::cerr << "  " << (c.holds ? "PASS" : "FAIL") << "  " << c.name << "  " << c.lhs << " vs " << c.rhs;
    if (c.hypothesisViolated) std::cerr << "  (hypothesis-violated)";
    if (!c.witness.empty()) std::cerr << "  " << c.witness;
    std::cerr << '\n';
  }
}

void prettyAggregate(const TrialLog& log) {
  const auto& agg = log.aggregate;
  std::cerr << log.trials.size() << " trials, " << agg.decodable << " decodable, " << agg.causal << " causal, "
            << agg.errors << " errors, " << agg.findings.size() << " findings\n";
  for (const auto& [name, t] : agg.tallies) {
    std::cerr << "  " << name << ": " << t.pass << " pass, " << t.fail << " fail";
    if (t.hypothesisViolated) std::cerr << " (" << t.hypothesisViolated << " hypothesis-violated)";
    std::cerr << '\n';
  }
  if (agg.maxRatio) {
    std::cerr << "  max ratio " << agg.maxRatio->lhs << "/" << agg.maxRatio->rhs << " at trial "
              << agg.maxRatio->trial << " (" << agg.maxRatio->check << ", " << agg.maxRatio->scheme << ")\n";
  }
  for (const auto& f : agg.findings) std::cerr << "  finding: trial " << f.trial << " seed " << f.seed << " " << f.check << '\n';
}

int statusOf(const TrialLog& log) {
  if (log.aggregate.contractErrors > 0) {
    for (const auto& t : log.trials) {
      if (t.errorKind == "contract") {
        std::cerr << "doflab: trial " << t.index << ": " << t.error << '\n';
        break;
      }
    }
    return kUsage;
  }
  return log.hasFinding() ? kFinding : kOk;
}

/// demo and verify: one trial, reported in full.
int singleTrial(const ExperimentConfig& cfg, const OutputOptions& opts) {
  const TrialLog log = doflab::runExperiment(cfg);
  const TrialRecord& t = log.trials.front();
  if (opts.format == "csv") {
    emit(doflab::toCsv(log.trials), opts);
  } else {
    nlohmann::json doc{{"schema", "doflab/1"}, {"config", doflab::toJson(cfg)}, {"trial", doflab::toJson(t)}};
    if (t.error.empty()) {
      const auto [num, den] = doflab::sumDof(t.sizes, t.n);
      doc["sum_dof"] = std::to_string(num) + "/" + std::to_string(den);
    }
    emit(doc.dump() + "\n", opts);
  }
  if (opts.pretty) prettyRecord(t);
  return statusOf(log);
}

int experiment(const ExperimentConfig& cfg, const OutputOptions& opts) {
  const TrialLog log = doflab::runExperiment(cfg);
  std::ostringstream text;
  doflab::writeLog(log, opts.format, text);
  emit(text.str(), opts);
  if (opts.pretty) prettyAggregate(log);
  return statusOf(log);
}

int replay(const std::string& path, std::uint64_t index, std::optional<std::uint64_t> base_seed,
           const OutputOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read log '" + path + "'");
  const nlohmann::json doc = nlohmann::json::parse(in);
  ExperimentConfig cfg = doflab::configFromJson(doc.at("config"));
  if (index >= cfg.trials) throw std::invalid_argument("trial index out of range");

  std::optional<TrialRecord> stored;
  for (const auto& t : doc.at("trials")) {
    if (t.at("trial").get<std::uint64_t>() == index) stored = doflab::trialFromJson(t);
  }
  if (base_seed) cfg.baseSeed = *base_seed;
  const TrialRecord fresh = doflab::replayTrial(cfg, index);
  const bool hash_match = stored && stored->realizationHash == fresh.realizationHash;
  const bool match = stored && doflab::toJson(*stored) == doflab::toJson(fresh);

  if (opts.format == "csv") {
    emit(doflab::toCsv({fresh}), opts);
  } else {
    nlohmann::json out{{"schema", "doflab/1"},
                       {"trial", doflab::toJson(fresh)},
                       {"realization_match", hash_match},
                       {"match", match}};
    emit(out.dump() + "\n", opts);
  }
  if (opts.pretty) {
    prettyRecord(fresh);
    std::cerr << (match ? "replay matches the log\n" : "replay differs from the log\n");
  }
  if (fresh.errorKind == "contract") {
    std::cerr << "doflab: " << fresh.error << '\n';
    return kUsage;
  }
  return (!match || fresh.hasFinding()) ? kFinding : kOk;
}

void addOutputOptions(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opts.out, "write the report to PATH instead of stdout");
  cmd->add_flag("--pretty", opts.pretty, "human-readable summary on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank audits of linear schemes on the X-channel and the three-user IC with delayed CSIT"};
  app.require_subcommand(1);

  OutputOptions opts;
  ExperimentConfig cfg;
  std::optional<int> n;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<int> complexity;
  std::optional<int> m;
  std::string scheme;
  std::string log_path;
  std::uint64_t trial_index = 0;
  std::optional<std::uint64_t> replay_seed;
  bool adversarial = false;

  auto* demo = app.add_subcommand("demo", "run a built-in scheme on one realization and print the full report");
  std::string demo_name;
  demo->add_option("name", demo_name, "scheme to demonstrate")->required()->check(CLI::IsMember({"gmk"}));
  demo->add_option("--seed", seed, "base seed")->required();
  addOutputOptions(demo, opts);

  auto* verify = app.add_subcommand("verify", "decodability, rank ratio, Lemma 5, converse and causality on one trace");
  verify->add_option("--scheme", scheme, "built-in name or static-scheme JSON file")->required();
  verify->add_option("--seed", seed, "base seed")->required();
  verify->add_option("--n", n, "block length");
  verify->add_flag("--adversarial-lemma6", adversarial, "use the constructed degenerate realization");
  addOutputOptions(verify, opts);

  auto* ratio = app.add_subcommand("ratio", "maximum observed rank-ratio pair over many realizations");
  ratio->add_option("--scheme", scheme, "built-in name, family or file")->required();
  ratio->add_option("--trials", trials, "number of trials")->required()->check(CLI::PositiveNumber);
  ratio->add_option("--seed", seed, "base seed")->required();
  ratio->add_option("--n", n, "block length");
  addOutputOptions(ratio, opts);

  auto* search = app.add_subcommand("search", "stress the rank lemmas on random delayed-CSIT schemes");
  search->add_option("--trials", trials, "number of trials")->required()->check(CLI::PositiveNumber);
  search->add_option("--complexity", complexity, "monomial degree bound (default: drawn from 0..2)")
      ->check(CLI::NonNegativeNumber);
  search->add_option("--seed", seed, "base seed")->required();
  search->add_option("--n", n, "block length (default: drawn from 2..8)");
  addOutputOptions(search, opts);

  auto* ic3 = app.add_subcommand("ic3", "three-user interference channel audits");
  std::string ic_scheme = "ic-mix";
  ic3->add_option("--scheme", ic_scheme, "ic-mix, ic-tdma-variant, ic-random, ic-tdma or a file");
  ic3->add_option("--trials", trials, "number of trials")->required()->check(CLI::PositiveNumber);
  ic3->add_option("--seed", seed, "base seed")->required();
  ic3->add_option("--n", n, "block length (default: drawn from 3..8)");
  ic3->add_option("--m", m, "per-user message size (default: drawn)")->check(CLI::NonNegativeNumber);
  ic3->add_option("--complexity", complexity, "monomial degree bound for random schemes")
      ->check(CLI::NonNegativeNumber);
  addOutputOptions(ic3, opts);

  auto* rep = app.add_subcommand("replay", "rerun one trial of a JSON log");
  rep->add_option("--log", log_path, "log written with --format json")->required()->check(CLI::ExistingFile);
  rep->add_option("--trial", trial_index, "trial index")->required();
  rep->add_option("--base-seed", replay_seed, "override the logged base seed");
  addOutputOptions(rep, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "doflab: " << e.what() << '\n' << "run 'doflab --help' for usage\n";
    return kUsage;
  }

  try {
    cfg.baseSeed = seed;
    cfg.trials = trials;
    cfg.n = n;
    cfg.complexity = complexity;
    cfg.m = m;
    if (*demo) {
      cfg.scheme = demo_name;
      cfg.trials = 1;
      return singleTrial(cfg, opts);
    }
    if (*verify) {
      cfg.scheme = scheme;
      cfg.trials = 1;
      cfg.adversarialLemma6 = adversarial;
      return singleTrial(cfg, opts);
    }
    if (*ratio) {
      cfg.scheme = scheme;
      cfg.checks = {"lemma1", "causality"};
      return experiment(cfg, opts);
    }
    if (*search) {
      cfg.scheme = "random:*";
      return experiment(cfg, opts);
    }
    if (*ic3) {
      cfg.scheme = ic_scheme;
      cfg.nMin = 3;
      cfg.checks = {"ic3", "causality"};
      return experiment(cfg, opts);
    }
    if (*rep) return replay(log_path, trial_index, replay_seed, opts);
  } catch (const std::exception& e) {
    std::cerr << "doflab: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
