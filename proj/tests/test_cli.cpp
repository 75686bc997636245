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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr discarded and returns its exit status and stdout.
CliRun cli(const std::string& args) {
  const std::string command = std::string(DOFLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun run;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return run;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) run.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return run;
}

std::filesystem::path tempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("doflab_cli_" + std::to_string(::getpid()) + "_" + name);
}

TEST(Cli, DemoGmk) {
  const CliRun run = cli("demo gmk --seed 7");
  ASSERT_EQ(run.status, 0);
  const auto doc = nlohmann::json::parse(run.out);
  EXPECT_EQ(doc["sum_dof"], "6/5");
  EXPECT_EQ(doc["trial"]["n"], 5);
  EXPECT_EQ(doc["trial"]["sizes"], nlohmann::json({{"11", 2}, {"12", 1}, {"21", 1}, {"22", 2}}));
  for (const auto& c : doc["trial"]["checks"]) EXPECT_TRUE(c["holds"].get<bool>()) << c["name"];
}

TEST(Cli, PrimaryStreamIsDeterministic) {
  EXPECT_EQ(cli("demo gmk --seed 7").out, cli("demo gmk --seed 7").out);
  EXPECT_EQ(cli("search --trials 5 --seed 3").out, cli("search --trials 5 --seed 3").out);
}

TEST(Cli, PrettyGoesToTheDiagnosticStream) {
  EXPECT_EQ(cli("demo gmk --seed 7 --pretty").out, cli("demo gmk --seed 7").out);
}

TEST(Cli, VerifyRatioWitnessIsTight) {
  const CliRun run = cli("verify --scheme ratio-witness --seed 1");
  ASSERT_EQ(run.status, 0);
  const auto doc = nlohmann::json::parse(run.out);
  bool seen = false;
  for (const auto& c : doc["trial"]["checks"]) {
    if (c["name"] != "lemma1.pair12") continue;
    seen = true;
    EXPECT_EQ(c["lhs"], 3);
    EXPECT_EQ(c["rhs"], 2);
    EXPECT_TRUE(c["holds"].get<bool>());
  }
  EXPECT_TRUE(seen);
}

TEST(Cli, NegativeControlExitsZero) {
  const CliRun run = cli("verify --scheme icsit-repeat --seed 1");
  ASSERT_EQ(run.status, 0);
  const auto doc = nlohmann::json::parse(run.out);
  EXPECT_TRUE(doc["trial"]["expected_negative"].get<bool>());
  for (const auto& c : doc["trial"]["checks"]) {
    if (c["name"] == "causality") {
      EXPECT_FALSE(c["holds"].get<bool>());
    }
    if (c["name"] == "lemma1.pair12") {
      EXPECT_EQ(c["lhs"], 2);
      EXPECT_EQ(c["rhs"], 1);
      EXPECT_FALSE(c["holds"].get<bool>());
      EXPECT_TRUE(c["hypothesis_violated"].get<bool>());
    }
  }
}

TEST(Cli, FindingExitsOne) {
  // Time sharing with rows overlapping at Rx1: sizes claim two symbols but
  // both use slot 1, so decoding fails.
  const auto path = tempPath("collide.json");
  std::ofstream(path) << R"({"n":2,"sizes":{"11":1,"12":1},"rows":{"11":[["1"],["0"]],"12":[["1"],["0"]]}})";
  const CliRun run = cli("verify --scheme " + path.string() + " --seed 1");
  EXPECT_EQ(run.status, 1);
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("").status, 2);
  EXPECT_EQ(cli("verify --seed 1").status, 2);
  EXPECT_EQ(cli("verify --scheme nope --seed 1").status, 2);
  EXPECT_EQ(cli("verify --scheme gmk --seed 1 --n 4").status, 2);
  EXPECT_EQ(cli("demo gmk --seed 1 --bogus").status, 2);
  EXPECT_EQ(cli("demo gmk --seed 1 --format xml").status, 2);
  EXPECT_EQ(cli("replay --log /nonexistent --trial 0").status, 2);
}

TEST(Cli, CsvFormat) {
  const CliRun run = cli("verify --scheme tdma --seed 2 --format csv");
  ASSERT_EQ(run.status, 0);
  EXPECT_TRUE(run.out.starts_with("trial,seed,check,holds,lhs,rhs\n"));
  EXPECT_NE(run.out.find(",condi1,true,"), std::string::npos);
}

TEST(Cli, RatioReportsTheMaximumPair) {
  const CliRun run = cli("ratio --scheme ratio-witness --trials 20 --seed 4");
  ASSERT_EQ(run.status, 0);
  const auto doc = nlohmann::json::parse(run.out);
  EXPECT_EQ(doc["aggregate"]["max_ratio"]["lhs"], 3);
  EXPECT_EQ(doc["aggregate"]["max_ratio"]["rhs"], 2);
}

TEST(Cli, Ic3Audit) {
  const CliRun run = cli("ic3 --trials 20 --seed 5 --n 6 --m 2");
  ASSERT_EQ(run.status, 0);
  const auto doc = nlohmann::json::parse(run.out);
  EXPECT_EQ(doc["aggregate"]["checks"]["ic.bound97"]["fail"], 0);
}

TEST(Cli, OutFileAndReplay) {
  const auto path = tempPath("log.json");
  const CliRun run = cli("search --trials 6 --seed 12 --out " + path.string());
  ASSERT_EQ(run.status, 0);
  EXPECT_TRUE(run.out.empty());
  const CliRun rep = cli("replay --log " + path.string() + " --trial 4");
  ASSERT_EQ(rep.status, 0);
  const auto doc = nlohmann::json::parse(rep.out);
  EXPECT_TRUE(doc["match"].get<bool>());
  EXPECT_TRUE(doc["realization_match"].get<bool>());

  const CliRun wrong = cli("replay --log " + path.string() + " --trial 4 --base-seed 13");
  EXPECT_EQ(wrong.status, 1);
  EXPECT_FALSE(nlohmann::json::parse(wrong.out)["realization_match"].get<bool>());
  std::filesystem::remove(path);
}

TEST(Cli, AdversarialLemmaSix) {
  const CliRun run = cli("verify --scheme repeat --seed 3 --adversarial-lemma6");
  ASSERT_EQ(run.status, 0);
  const auto doc = nlohmann::json::parse(run.out);
  for (const auto& c : doc["trial"]["checks"]) {
    if (c["name"] == "lemma6.count") {
      EXPECT_EQ(c["lhs"], 1);
    }
  }
}

TEST(Cli, StaticSchemeSample) {
  const CliRun run = cli(std::string("verify --scheme ") + DOFLAB_SOURCE_DIR + "/tools/schemes/time_sharing.json --seed 1");
  EXPECT_EQ(run.status, 0);
}

}  // namespace
