/* Copyright 2026 The terra-active Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "terra_cli/cli.h"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr const char* kSmallConfig = R"(num_missions = 2
budget_seconds = 60.0
start_poses = [[24.0, 24.0]]
seeds = [3, 4]
n_seed = 30

[world]
width_cells = 48
height_cells = 48
num_classes = 3
blob_scale = 16

[planner]
footprint_cells = 10
mcts_iterations = 30
es_generations = 8
)";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("terra_cli_" +
             std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    config_ = root_ / "small.toml";
    std::ofstream(config_) << kSmallConfig;
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(std::vector<std::string> args) { return terra::cli::run(args); }

  fs::path root_;
  fs::path config_;
};

TEST_F(CliTest, SimulateIsReproducible) {
  const fs::path a = root_ / "a", b = root_ / "b";
  ASSERT_EQ(run({"simulate", "--config", config_.string(), "--out", a.string()}), 0);
  ASSERT_EQ(run({"simulate", "--config", config_.string(), "--out", b.string(), "--jobs", "2"}),
            0);
  for (const char* rel : {"summary.json", "config.resolved.toml",
                          "metrics/arm00_start0_seed3.csv", "metrics/arm01_start0_seed4.csv",
                          "ledger/arm00_start0_seed3.csv", "maps/arm01_start0_seed4.tmap"}) {
    ASSERT_TRUE(fs::exists(a / rel)) << rel;
    EXPECT_EQ(slurp(a / rel), slurp(b / rel)) << rel;
  }
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest["status"], "complete");
  EXPECT_TRUE(manifest["wall_clock_seconds"].is_number());
  EXPECT_EQ(manifest["resolved_config"], slurp(a / "config.resolved.toml"));
  EXPECT_EQ(slurp(config_), kSmallConfig);
}

TEST_F(CliTest, ResolvedConfigReproducesTheRun) {
  const fs::path a = root_ / "a", b = root_ / "b";
  ASSERT_EQ(run({"simulate", "--config", config_.string(), "--out", a.string(), "--seed", "9",
                 "--planner", "local", "--mode", "full"}),
            0);
  ASSERT_EQ(run({"simulate", "--config", (a / "config.resolved.toml").string(), "--out",
                 b.string()}),
            0);
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  EXPECT_EQ(slurp(a / "config.resolved.toml"), slurp(b / "config.resolved.toml"));
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  EXPECT_EQ(summary["num_arms"], 1);
  EXPECT_EQ(summary["arms"][0]["planner"], "local");
  EXPECT_EQ(summary["arms"][0]["mode"], "full");
  EXPECT_EQ(summary["arms"][0]["seed"], 9);
}

TEST_F(CliTest, ComparePlannersWritesOneRunPerPlanner) {
  const fs::path out = root_ / "cmp";
  ASSERT_EQ(run({"compare-planners", "--config", config_.string(), "--out", out.string(),
                 "--seed", "3"}),
            0);
  for (const char* planner : {"coverage", "local", "frontier", "optimization", "sampling"}) {
    EXPECT_TRUE(fs::exists(out / planner / "manifest.json")) << planner;
    EXPECT_TRUE(fs::exists(out / planner / "metrics" / "arm00_start0_seed3.csv")) << planner;
  }
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  EXPECT_TRUE(fs::exists(out / "curves.csv"));
  EXPECT_TRUE(fs::exists(out / "comparison.json"));
}

TEST_F(CliTest, CompareSupervisionWritesOneRunPerMode) {
  const fs::path out = root_ / "sup";
  ASSERT_EQ(run({"compare-supervision", "--config", config_.string(), "--out", out.string(),
                 "--seed", "4"}),
            0);
  for (const char* mode : {"full", "semi", "self"}) {
    EXPECT_TRUE(fs::exists(out / mode / "summary.json")) << mode;
  }
  const std::string curves = slurp(out / "curves.csv");
  EXPECT_NE(curves.find("\nself,2,"), std::string::npos) << curves;
}

TEST_F(CliTest, DumpMapWritesRasters) {
  const fs::path run_dir = root_ / "run";
  ASSERT_EQ(run({"simulate", "--config", config_.string(), "--out", run_dir.string(), "--seed",
                 "3"}),
            0);
  ASSERT_EQ(run({"dump-map", "--run", run_dir.string()}), 0);
  const fs::path dump = run_dir / "map_dump" / "arm00_start0_seed3";
  EXPECT_TRUE(fs::exists(dump / "explored.pgm"));
  EXPECT_TRUE(fs::exists(dump / "semantic_2.csv"));
}

TEST_F(CliTest, ErrorsReturnNonZero) {
  EXPECT_NE(run({"simulate", "--config", (root_ / "missing.toml").string(), "--out",
                 (root_ / "x").string()}),
            0);
  EXPECT_NE(run({"simulate", "--config", config_.string()}), 0);
  EXPECT_NE(run({"simulate", "--config", config_.string(), "--out", (root_ / "y").string(),
                 "--planner", "teleport"}),
            0);
  EXPECT_NE(run({"simulate", "--config", config_.string(), "--out", (root_ / "z").string(),
                 "--jobs", "0"}),
            0);
  std::ofstream(root_ / "bad.toml") << "num_missions = 0\n";
  EXPECT_NE(run({"simulate", "--config", (root_ / "bad.toml").string(), "--out",
                 (root_ / "w").string()}),
            0);
  EXPECT_NE(run({"dump-map", "--run", (root_ / "nothing").string()}), 0);
  EXPECT_NE(run({"no-such-command"}), 0);
  EXPECT_NE(run({}), 0);
}

TEST_F(CliTest, VersionStartsWithTheProjectVersion) {
  EXPECT_EQ(terra::cli::version().rfind("0.1.0", 0), 0u);
  EXPECT_EQ(run({"--version"}), 0);
}

}  // namespace
