// Copyright 2026 The Infoplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace infoplan::cli {
namespace {

namespace fs = std::filesystem;

const std::string kScenario = std::string(INFOPLAN_SCENARIO_DIR) + "/test1_info.cfg";
const std::string kScenarioB = std::string(INFOPLAN_SCENARIO_DIR) + "/test1_no_info.cfg";

RunManifest parse(std::vector<std::string> args) {
  args.insert(args.begin(), "infoplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

int exit_code_of(std::vector<std::string> args) {
  try {
    parse(std::move(args));
  } catch (const CliExit& e) {
    return e.exit_code();
  }
  return -1;
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured run_main(std::vector<std::string> args) {
  args.insert(args.begin(), "infoplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(CliParse, Run) {
  const RunManifest m = parse({"run", kScenario, "-o", "out/x", "--seed", "5", "--set",
                               "horizon=4", "--dump-plans"});
  EXPECT_EQ(m.mode, Mode::kRun);
  ASSERT_EQ(m.scenarios.size(), 1u);
  EXPECT_EQ(m.scenarios[0], kScenario);
  EXPECT_EQ(m.output_dir, "out/x");
  EXPECT_EQ(m.seed, 5u);
  EXPECT_EQ(m.overrides, std::vector<std::string>{"horizon=4"});
  EXPECT_TRUE(m.dump_plans);
}

TEST(CliParse, Compare) {
  const RunManifest m = parse({"compare", kScenario, kScenarioB});
  EXPECT_EQ(m.mode, Mode::kCompare);
  EXPECT_EQ(m.scenarios.size(), 2u);
  EXPECT_FALSE(m.seed.has_value());
}

TEST(CliParse, Sweep) {
  const RunManifest m =
      parse({"sweep", kScenario, "--grid", "seed=1,2,3", "--grid", "horizon=5,10", "--jobs", "2"});
  EXPECT_EQ(m.mode, Mode::kSweep);
  ASSERT_EQ(m.grid.size(), 2u);
  EXPECT_EQ(m.grid[0].key, "seed");
  EXPECT_EQ(m.grid[0].values, (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(m.jobs, 2u);
}

TEST(CliParse, UsageErrors) {
  EXPECT_EQ(exit_code_of({"run", "/nonexistent/missing.cfg"}), kExitUsage);
  EXPECT_EQ(exit_code_of({"run", kScenario, "--frobnicate"}), kExitUsage);
  EXPECT_EQ(exit_code_of({"run", kScenario, "--set", "no_such_key=1"}), kExitUsage);
  EXPECT_EQ(exit_code_of({"sweep", kScenario}), kExitUsage);
  EXPECT_EQ(exit_code_of({"sweep", kScenario, "--grid", "seed="}), kExitUsage);
  EXPECT_EQ(exit_code_of({"compare", kScenario}), kExitUsage);
  EXPECT_EQ(exit_code_of({}), kExitUsage);
  EXPECT_EQ(exit_code_of({"--help"}), kExitOk);
  EXPECT_EQ(exit_code_of({"run", "--help"}), kExitOk);
}

TEST(CliMain, MissingFileMessage) {
  const Captured c = run_main({"run", "/nonexistent/missing.cfg"});
  EXPECT_EQ(c.code, kExitUsage);
  EXPECT_NE(c.err.find("error"), std::string::npos);
  EXPECT_EQ(c.err.back(), '\n');
}

TEST(CliMain, RunWritesArtifacts) {
  const fs::path dir = fs::temp_directory_path() / "infoplan_cli_run";
  fs::remove_all(dir);
  const Captured c = run_main({"run", kScenario, "-o", dir.string(), "--seed", "3", "--dump-plans",
                               "--set", "duration_max_s=3", "--set", "horizon=3", "--set",
                               "planner_substeps=2", "--set", "ukf_substeps=10"});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "plans.csv"));
  const fs::path& ep = dir;
  for (const char* f : {"scenario.cfg", "episode.csv", "timing.csv", "belief.csv",
                        "trajectory.svg", "parameters.svg", "error_norm.svg", "gamma.svg"}) {
    EXPECT_TRUE(fs::exists(ep / f)) << f;
  }
  EXPECT_NE(c.out.find("test1_info"), std::string::npos);
  fs::remove_all(dir);
}

TEST(CliMain, InvalidOverrideValueIsUsageError) {
  const Captured c = run_main({"run", kScenario, "-o", "/tmp/infoplan_never", "--set",
                               "duration_max_s=-4"});
  EXPECT_EQ(c.code, kExitUsage) << c.err;
}

}  // namespace
}  // namespace infoplan::cli
