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

// Named experiments driven by JSON configs. Each run writes
// <experiment>.summary.json, <experiment>.data.csv and manifest.json.

#ifndef PATHVOL_EXPERIMENTS_HPP_
#define PATHVOL_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathvol/core.hpp"
#include "pathvol/yprocess.hpp"

namespace pathvol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;

/// Anything wrong with the inputs: bad JSON, unknown keys, invalid
/// parameters, unwritable output directory.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  ModelParams params;
  YScheme scheme = YScheme::kExact;
  // Zero means "experiment default" for the size fields below.
  std::size_t paths = 0;
  std::size_t sub_steps = 0;
  std::size_t grid_paths = 0;
  std::size_t mismatch_paths = 0;
  std::size_t density_paths = 0;
  double strike = 100.0;
  std::size_t n = 0;
  double hedge_vol = 0.0;  // 0 picks sigma_bar
  std::vector<std::size_t> ladder;
  std::vector<double> vols;
  double level = 0.01;
  std::string output_dir = "pathvol-out";
};

const std::vector<std::string>& experiment_names();

/// Strict parse: every key must be known and "seed" is mandatory.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

nlohmann::json load_config_file(const std::string& path);

/// Applies "key=value". Model parameter names (or "params.<name>") go into
/// the params object; the value is read as JSON and falls back to a string.
void apply_override(nlohmann::json& config, std::string_view assignment);

struct ExperimentResult {
  nlohmann::json summary;
  std::string data_csv;
  bool passed = true;
};

/// Runs one experiment. Output bytes do not depend on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

struct RunOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  unsigned threads = 1;
};

/// Loads, runs and writes artifacts. Returns kExitOk, kExitAssertion or
/// kExitConfig; diagnostics go to `log`.
int run(const RunOptions& options, std::ostream& log);

}  // namespace pathvol::cli

#endif  // PATHVOL_EXPERIMENTS_HPP_
