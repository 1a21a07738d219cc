// Copyright 2026 The pathvol Authors.
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

#include "pathvol/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "small_configs.hpp"

namespace pathvol::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class RunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pathvol_run_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const json& j) {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << j.dump();
    return p.string();
  }

  fs::path dir_;
};

TEST(ParseConfigTest, SeedIsMandatory) {
  EXPECT_THROW(parse_config({{"experiment", "qv"}}), ConfigError);
}

TEST(ParseConfigTest, RejectsUnknownKeysAndExperiments) {
  EXPECT_THROW(parse_config({{"experiment", "qv"}, {"seed", 1}, {"pahts", 3}}),
               ConfigError);
  EXPECT_THROW(parse_config({{"experiment", "nope"}, {"seed", 1}}), ConfigError);
  EXPECT_THROW(parse_config({{"experiment", "qv"}, {"seed", -1}}), ConfigError);
  EXPECT_THROW(
      parse_config({{"experiment", "qv"}, {"seed", 1}, {"params", {{"sigma", 1}}}}),
      ConfigError);
  EXPECT_THROW(parse_config({{"experiment", "qv"}, {"seed", 1}, {"scheme", "midpoint"}}),
               ConfigError);
}

TEST(ParseConfigTest, ReadsEveryField) {
  const ExperimentConfig c = parse_config({{"experiment", "hedge"},
                                           {"seed", 9},
                                           {"scheme", "euler"},
                                           {"paths", 10},
                                           {"ladder", {8, 16}},
                                           {"hedge_vol", 0.3},
                                           {"params", {{"nu", 0.5}}}});
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.scheme, YScheme::kEuler);
  EXPECT_EQ(c.paths, 10u);
  EXPECT_EQ(c.ladder, (std::vector<std::size_t>{8, 16}));
  EXPECT_EQ(c.hedge_vol, 0.3);
  EXPECT_EQ(c.params.nu, 0.5);
  EXPECT_EQ(c.params.sigma_bar, 0.2);
  EXPECT_EQ(parse_config(to_json(c)).params.nu, 0.5);
}

TEST(ApplyOverrideTest, RoutesParamsAndParsesValues) {
  json j = {{"experiment", "qv"}, {"seed", 1}};
  apply_override(j, "nu=0.3");
  apply_override(j, "params.mu=0.05");
  apply_override(j, "paths=12");
  apply_override(j, "scheme=euler");
  EXPECT_EQ(j["params"]["nu"], 0.3);
  EXPECT_EQ(j["params"]["mu"], 0.05);
  EXPECT_EQ(j["paths"], 12);
  EXPECT_EQ(j["scheme"], "euler");
  EXPECT_THROW(apply_override(j, "novalue"), ConfigError);
  EXPECT_THROW(apply_override(j, "=3"), ConfigError);
}

TEST_F(RunTest, PassingExperimentExitsZeroAndWritesArtifacts) {
  RunOptions o;
  o.config_path = write_config({{"experiment", "price-range"}, {"seed", 3}});
  o.output_dir = (dir_ / "out").string();
  std::ostringstream log;
  EXPECT_EQ(run(o, log), kExitOk) << log.str();
  EXPECT_TRUE(fs::exists(dir_ / "out" / "price-range.summary.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "price-range.data.csv"));
  const json manifest = json::parse(slurp(dir_ / "out" / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_EQ(manifest["passed"], true);
  EXPECT_EQ(manifest["inputs"]["experiment"], "price-range");
}

TEST_F(RunTest, FailedAssertionExitsOne) {
  RunOptions o;
  // No extreme vols in the ladder, so the range is not spanned.
  o.config_path = write_config({{"experiment", "price-range"}, {"seed", 3}});
  o.overrides = {"vols=[0.2,0.4]"};
  o.output_dir = (dir_ / "out").string();
  std::ostringstream log;
  EXPECT_EQ(run(o, log), kExitAssertion) << log.str();
}

TEST_F(RunTest, ConfigErrorsExitTwo) {
  std::ostringstream log;
  RunOptions missing_seed;
  missing_seed.config_path = write_config({{"experiment", "price-range"}});
  EXPECT_EQ(run(missing_seed, log), kExitConfig);

  RunOptions bad_override;
  bad_override.config_path = write_config({{"experiment", "price-range"}, {"seed", 1}});
  bad_override.overrides = {"nu=-1"};
  EXPECT_EQ(run(bad_override, log), kExitConfig);

  RunOptions no_file;
  no_file.config_path = (dir_ / "absent.json").string();
  EXPECT_EQ(run(no_file, log), kExitConfig);

  RunOptions unwritable;
  unwritable.config_path = bad_override.config_path;
  std::ofstream(dir_ / "blocker") << "x";
  unwritable.output_dir = (dir_ / "blocker" / "out").string();
  EXPECT_EQ(run(unwritable, log), kExitConfig);

  RunOptions bad_ladder;
  bad_ladder.config_path = write_config(
      {{"experiment", "hedge"}, {"seed", 1}, {"sub_steps", 4}, {"ladder", {7}}});
  bad_ladder.output_dir = (dir_ / "out").string();
  EXPECT_EQ(run(bad_ladder, log), kExitConfig);
}

TEST_F(RunTest, SeedFlagOverridesConfig) {
  RunOptions o;
  o.config_path = write_config({{"experiment", "price-range"}, {"seed", 3}});
  o.seed = 44;
  o.output_dir = (dir_ / "out").string();
  std::ostringstream log;
  ASSERT_EQ(run(o, log), kExitOk);
  EXPECT_EQ(json::parse(slurp(dir_ / "out" / "manifest.json"))["seed"], 44);
}

class ThreadInvarianceTest : public ::testing::TestWithParam<std::string> {};

TEST_P(ThreadInvarianceTest, DataBytesDoNotDependOnThreads) {
  const ExperimentConfig cfg = parse_config(testing_support::small_config(GetParam(), 17));
  const ExperimentResult one = run_experiment(cfg, 1);
  const ExperimentResult three = run_experiment(cfg, 3);
  EXPECT_FALSE(one.data_csv.empty());
  EXPECT_EQ(one.data_csv, three.data_csv);
  EXPECT_EQ(one.summary.dump(), three.summary.dump());
}

INSTANTIATE_TEST_SUITE_P(AllExperiments, ThreadInvarianceTest,
                         ::testing::ValuesIn(experiment_names()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& c : s) {
                             if (c == '-') c = '_';
                           }
                           return s;
                         });

}  // namespace
}  // namespace pathvol::cli
