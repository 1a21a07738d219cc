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

#include "pathvol/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

namespace pathvol {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_path_csv(std::ostream& out, const Path& path) {
  out << "t,S\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_double(path.time(i)) << ',' << format_double(path.value(i))
        << '\n';
  }
}

void write_lift_csv(std::ostream& out, const LiftedPath& lp) {
  const Bracket bracket = rough_bracket(lp);
  const auto t = lp.coarse_times();
  out << "u,t,S_ut,lift,bracket\n";
  for (std::size_t k = 0; k < lp.intervals(); ++k) {
    out << format_double(t[k]) << ',' << format_double(t[k + 1]) << ','
        << format_double(lp.increment(k)) << ',' << format_double(lp.lift()[k])
        << ',' << format_double(bracket.values[k]) << '\n';
  }
}

void write_hedge_csv(std::ostream& out, const HedgeReport& report) {
  out << "path_index,residual\n";
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    out << i << ',' << format_double(report.residuals[i]) << '\n';
  }
}

Path read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,S") {
    throw Error("path CSV must start with the header 't,S'");
  }
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("malformed path CSV row: " + line);
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error("malformed path CSV row: " + line);
    }
  }
  return Path(std::move(times), std::move(values));
}

nlohmann::json to_json(const HedgeReport& report, std::uint64_t seed) {
  return {
      {"residual_convention", "portfolio minus payoff (positive = hedger surplus)"},
      {"units", {{"mean", "currency"}, {"se", "currency"}, {"rms", "currency"},
                 {"h", "1/sqrt(year)"}}},
      {"mean", report.mean},
      {"se", report.standard_error},
      {"rms", report.rms},
      {"n", report.rebalance_count},
      {"h", report.hedge_vol},
      {"paths", report.path_count()},
      {"seed", seed},
  };
}

nlohmann::json to_json(const GridLawReport& report) {
  nlohmann::json incs = nlohmann::json::array();
  for (const auto& inc : report.increments) {
    incs.push_back({
        {"index", inc.index},
        {"ks_statistic", inc.ks.statistic},
        {"ks_threshold", inc.ks.threshold},
        {"ks_pass", inc.ks.passed()},
        {"mean", inc.mean},
        {"expected_mean", inc.expected_mean},
        {"mean_z", inc.mean_z},
        {"variance", inc.variance},
        {"expected_variance", inc.expected_variance},
        {"variance_rel_error", inc.variance_rel_error},
        {"moments_pass", inc.moments_ok},
    });
  }
  return {
      {"units", {{"returns", "log-return over one grid step"}}},
      {"paths", report.paths},
      {"level", report.level},
      {"flake_budget", report.flake_budget},
      {"increments", incs},
      {"ks_failures", report.ks_failures()},
      {"two_sample", {{"statistic", report.two_sample.statistic},
                      {"threshold", report.two_sample.threshold},
                      {"pass", report.two_sample_pass()}}},
      {"lag1_autocorr", report.lag1_autocorr},
      {"autocorr_bound", report.autocorr_bound},
      {"autocorr_pass", report.autocorr_pass()},
      {"passed", report.passed()},
  };
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"mu", p.mu}, {"sigma_bar", p.sigma_bar}, {"nu", p.nu},
          {"r", p.r},   {"s0", p.s0},               {"T", p.T},
          {"delta", p.delta}, {"steps", p.steps()}, {"epsilon", p.epsilon}};
}

ModelParams params_from_json(const nlohmann::json& j,
                             const ModelParams& defaults) {
  if (!j.is_object()) throw Error("params must be a JSON object");
  ModelParams p = defaults;
  bool has_epsilon = false;
  bool has_steps = false;
  std::size_t steps = 0;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw Error("param '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "mu") {
      p.mu = v;
    } else if (key == "sigma_bar") {
      p.sigma_bar = v;
    } else if (key == "nu") {
      p.nu = v;
    } else if (key == "r") {
      p.r = v;
    } else if (key == "s0") {
      p.s0 = v;
    } else if (key == "T") {
      p.T = v;
    } else if (key == "delta") {
      p.delta = v;
    } else if (key == "steps") {
      if (!value.is_number_integer() || value.get<long long>() < 1) {
        throw Error("param 'steps' must be a positive integer");
      }
      has_steps = true;
      steps = value.get<std::size_t>();
    } else if (key == "epsilon") {
      p.epsilon = v;
      has_epsilon = true;
    } else {
      throw Error("unknown param '" + key + "'");
    }
  }
  if (has_steps) p.delta = p.T / static_cast<double>(steps);
  if (!has_epsilon) return with_default_epsilon(p);
  return validate(p);
}

void print_table(std::ostream& out, const GridLawReport& report) {
  char line[160];
  out << "increment  ks_stat   threshold  pass  mean_z   var_rel_err\n";
  for (const auto& inc : report.increments) {
    std::snprintf(line, sizeof(line), "%9zu  %.6f  %.6f   %-4s  %+7.3f  %+.5f\n",
                  inc.index, inc.ks.statistic, inc.ks.threshold,
                  inc.ks.passed() ? "yes" : "NO", inc.mean_z,
                  inc.variance_rel_error);
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "two-sample Y vs S: %.6f (threshold %.6f) %s\n"
                "lag-1 autocorr:    %+.6f (bound %.6f) %s\n"
                "ks failures: %zu of %zu (budget %zu) -> %s\n",
                report.two_sample.statistic, report.two_sample.threshold,
                report.two_sample_pass() ? "pass" : "FAIL",
                report.lag1_autocorr, report.autocorr_bound,
                report.autocorr_pass() ? "pass" : "FAIL", report.ks_failures(),
                report.increments.size(), report.flake_budget,
                report.passed() ? "PASS" : "FAIL");
  out << line;
}

}  // namespace pathvol
