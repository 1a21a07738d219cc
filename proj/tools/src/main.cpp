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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pathvol/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pathvol: experiments on path-dependent volatility"};
  app.set_version_flag("--version", std::string("pathvol ") + PATHVOL_VERSION);
  app.require_subcommand(1);

  pathvol::cli::RunOptions options;
  std::string positional;
  std::uint64_t seed = 0;
  std::string out;
  CLI::App* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  std::string names;
  for (const auto& name : pathvol::cli::experiment_names()) names += " " + name;
  run->footer("Experiments:" + names);
  run->add_option("config_file", positional, "Config file");
  run->add_option("--config,-c", options.config_path, "Config file");
  run->add_option("--override,-o", options.overrides,
                  "key=value applied on top of the config (repeatable)");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  CLI::Option* out_opt = run->add_option("--out", out, "Output directory");
  run->add_option("--threads,-j", options.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pathvol::cli::kExitConfig;
  }

  if (!positional.empty()) {
    if (!options.config_path.empty() && options.config_path != positional) {
      std::cerr << "config error: two different config files given\n";
      return pathvol::cli::kExitConfig;
    }
    options.config_path = positional;
  }
  if (*seed_opt) options.seed = seed;
  if (*out_opt) options.output_dir = out;

  return pathvol::cli::run(options, std::cerr);
}
