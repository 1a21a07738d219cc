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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "pathvol/gbm.hpp"
#include "pathvol/grid_law.hpp"
#include "pathvol/hedging.hpp"
#include "pathvol/io.hpp"
#include "pathvol/parallel.hpp"
#include "pathvol/pathwise.hpp"
#include "pathvol/random.hpp"
#include "pathvol/stats.hpp"

#ifndef PATHVOL_VERSION
#define PATHVOL_VERSION "unknown"
#endif

namespace pathvol::cli {
namespace {

using nlohmann::json;

const std::vector<std::string> kParamKeys = {"mu", "sigma_bar", "nu", "r", "s0",
                                             "T",  "delta",     "steps", "epsilon"};

std::size_t or_default(std::size_t value, std::size_t fallback) {
  return value == 0 ? fallback : value;
}

std::size_t get_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("'" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::string scheme_name(YScheme s) { return s == YScheme::kExact ? "exact" : "euler"; }

std::size_t fine_steps(const ModelParams& p, std::size_t sub) { return p.steps() * sub; }

void require_divides(const ModelParams& p, std::size_t sub, std::size_t n) {
  if (n == 0 || fine_steps(p, sub) % n != 0) {
    throw ConfigError("rebalance count " + std::to_string(n) +
                      " does not divide the path grid of " +
                      std::to_string(fine_steps(p, sub)) + " steps");
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::string header) { out_ << header << '\n'; }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ostringstream out_;
};

YPathSource y_source(const YSimulator& sim) {
  return [&sim](RandomStream& s) { return sim(s); };
}

// --- indist -----------------------------------------------------------------

ExperimentResult run_indist(const ExperimentConfig& cfg, unsigned threads) {
  const ModelParams& p = cfg.params;
  const std::size_t paths = or_default(cfg.paths, 50000);
  const std::size_t sub =
      or_default(cfg.sub_steps, cfg.scheme == YScheme::kExact ? 1 : 200);
  const YSimulator sim(p, cfg.scheme, sub);
  const GridReturns returns =
      simulate_grid_returns(p, y_source(sim), paths, cfg.seed, threads);
  GridLawOptions opt;
  opt.level = cfg.level;
  const GridLawReport report = analyze_grid_returns(p, returns, opt);

  ExperimentResult out;
  out.summary = to_json(report);
  out.summary["scheme"] = scheme_name(cfg.scheme);
  out.summary["sub_steps"] = sub;
  out.passed = report.passed();
  CsvWriter csv("path_index,increment,y_log_return,s_log_return");
  for (std::size_t i = 0; i < returns.paths; ++i) {
    for (std::size_t k = 0; k < returns.increments; ++k) {
      csv.row(i, k, returns.y_at(i, k), returns.s_at(i, k));
    }
  }
  out.data_csv = csv.str();
  return out;
}

// --- qv ---------------------------------------------------------------------

ExperimentResult run_qv(const ExperimentConfig& cfg, unsigned threads) {
  const ModelParams& p = cfg.params;
  const std::size_t paths = or_default(cfg.paths, 100);
  const std::size_t sub = or_default(cfg.sub_steps, 10000);
  const std::size_t grid_paths = or_default(cfg.grid_paths, 50000);

  const YSimulator sim(p, cfg.scheme, sub);
  std::vector<double> y_qv(paths), s_qv(paths);
  parallel_for(paths, threads, [&](std::size_t i) {
    RandomStream ys(cfg.seed, stream_id(i, StreamPurpose::kPrimary));
    RandomStream ss(cfg.seed, stream_id(i, StreamPurpose::kReference));
    y_qv[i] = realized_qv(sim(ys), {}, QvScale::kLog);
    s_qv[i] = realized_qv(simulate_gbm(p, p.mu, p.sigma_bar, sub, ss), {}, QvScale::kLog);
  });
  double y_mean = 0.0, s_mean = 0.0;
  for (std::size_t i = 0; i < paths; ++i) {
    y_mean += y_qv[i];
    s_mean += s_qv[i];
  }
  y_mean /= static_cast<double>(paths);
  s_mean /= static_cast<double>(paths);

  // The grid-step law of Y does not depend on the sub-grid, so the large
  // grid sample uses the cheapest sub-grid of the scheme.
  const YSimulator grid_sim(p, cfg.scheme, cfg.scheme == YScheme::kExact ? 1 : 200);
  const GridReturns returns =
      simulate_grid_returns(p, y_source(grid_sim), grid_paths, cfg.seed, threads);
  const double grid_var = moments(returns.y).variance;

  const double qv_target = p.nu * p.nu * p.T;
  const double var_target = p.sigma_bar * p.sigma_bar * p.delta;
  const double qv_err = y_mean / qv_target - 1.0;
  const double var_err = grid_var / var_target - 1.0;

  ExperimentResult out;
  out.summary = {
      {"units", {{"log_qv", "1 (log-price squared, over [0,T])"},
                 {"grid_step_variance", "1 (log-return variance per grid step)"}}},
      {"scheme", scheme_name(cfg.scheme)},
      {"sub_steps", sub},
      {"paths", paths},
      {"y_log_qv_mean", y_mean},
      {"y_log_qv_target", qv_target},
      {"y_log_qv_rel_error", qv_err},
      {"s_log_qv_mean", s_mean},
      {"s_log_qv_target", p.sigma_bar * p.sigma_bar * p.T},
      {"grid_paths", grid_paths},
      {"grid_step_variance", grid_var},
      {"grid_step_variance_target", var_target},
      {"grid_step_variance_rel_error", var_err},
      {"tolerance", 0.02},
  };
  out.passed = std::abs(qv_err) <= 0.02 && std::abs(var_err) <= 0.02;
  CsvWriter csv("path_index,y_log_qv,s_log_qv");
  for (std::size_t i = 0; i < paths; ++i) csv.row(i, y_qv[i], s_qv[i]);
  out.data_csv = csv.str();
  return out;
}

// --- price-range ------------------------------------------------------------

ExperimentResult run_price_range(const ExperimentConfig& cfg, unsigned) {
  const ModelParams& p = cfg.params;
  std::vector<double> vols = cfg.vols;
  if (vols.empty()) {
    vols = {1e-8, 0.01, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4, 12.8, 25.6, 51.2, 100.0};
  }
  std::sort(vols.begin(), vols.end());
  const OptionSpec opt{cfg.strike, p.T, OptionKind::kCall};
  const PriceRange range = price_range(p.s0, opt, p.r);
  CsvWriter csv("nu,price,lower,upper");
  std::vector<double> prices;
  bool monotone = true;
  bool inside = true;
  for (double v : vols) {
    const double price = bs_price(p.s0, opt, p.r, v);
    if (!prices.empty() && price < prices.back()) monotone = false;
    if (price < range.lower - 1e-12 * p.s0 || price > range.upper + 1e-12 * p.s0) {
      inside = false;
    }
    prices.push_back(price);
    csv.row(v, price, range.lower, range.upper);
  }
  const double lower_gap = std::abs(prices.front() - range.lower);
  const double upper_gap = std::abs(prices.back() - range.upper);
  ExperimentResult out;
  out.summary = {
      {"units", {{"price", "currency"}, {"nu", "1/sqrt(year)"}}},
      {"lower_bound", range.lower},
      {"upper_bound", range.upper},
      {"min_vol", vols.front()},
      {"price_at_min_vol", prices.front()},
      {"lower_gap", lower_gap},
      {"max_vol", vols.back()},
      {"price_at_max_vol", prices.back()},
      {"upper_gap", upper_gap},
      {"monotone", monotone},
      {"inside_bounds", inside},
  };
  out.passed = lower_gap <= 1e-6 && upper_gap <= 1e-4 * p.s0 && monotone && inside;
  out.data_csv = csv.str();
  return out;
}

// --- price-mc ---------------------------------------------------------------

struct McEstimate {
  double price = 0.0;
  double standard_error = 0.0;
};

McEstimate mc_call(const ModelParams& p, const OptionSpec& opt, const GbmDynamics& q,
                   StreamPurpose purpose, std::uint64_t seed, std::size_t paths,
                   unsigned threads) {
  std::vector<double> payoff(paths);
  const double discount = std::exp(-p.r * opt.expiry);
  parallel_for(paths, threads, [&](std::size_t i) {
    RandomStream s(seed, stream_id(i, purpose));
    const double st = sample_gbm_terminal(p.s0, q.drift, q.vol, opt.expiry, s);
    payoff[i] = discount * std::max(st - opt.strike, 0.0);
  });
  const Moments m = moments(payoff);
  return {m.mean, std::sqrt(m.variance / static_cast<double>(paths))};
}

ExperimentResult run_price_mc(const ExperimentConfig& cfg, unsigned threads) {
  const ModelParams& p = cfg.params;
  const std::size_t paths = or_default(cfg.paths, 1000000);
  const OptionSpec opt{cfg.strike, p.T, OptionKind::kCall};
  CsvWriter csv("measure,drift,vol,mc_price,standard_error,bs_price,z_score");
  ExperimentResult out;
  out.summary = {{"units", {{"price", "currency"}}}, {"paths", paths}};
  struct Case {
    const char* name;
    GbmDynamics q;
    StreamPurpose purpose;
  };
  for (const Case& c : {Case{"Y", qmeasure_dynamics_y(p), StreamPurpose::kPrimary},
                        Case{"S", qmeasure_dynamics_s(p), StreamPurpose::kReference}}) {
    const McEstimate mc = mc_call(p, opt, c.q, c.purpose, cfg.seed, paths, threads);
    const double bs = bs_price(p.s0, opt, p.r, c.q.vol);
    const double z = (mc.price - bs) / mc.standard_error;
    csv.row(std::string(c.name), c.q.drift, c.q.vol, mc.price, mc.standard_error, bs, z);
    out.summary[c.name] = {{"drift", c.q.drift}, {"vol", c.q.vol},
                           {"mc_price", mc.price}, {"standard_error", mc.standard_error},
                           {"bs_price", bs},       {"z_score", z}};
    out.passed = out.passed && std::abs(z) <= 3.0;
  }
  out.data_csv = csv.str();
  return out;
}

// --- hedge ------------------------------------------------------------------

ExperimentResult run_hedge(const ExperimentConfig& cfg, unsigned threads) {
  const ModelParams& p = cfg.params;
  const std::size_t paths = or_default(cfg.paths, 500);
  const std::size_t mismatch_paths = or_default(cfg.mismatch_paths, 2000);
  const std::size_t sub = or_default(cfg.sub_steps, 256);
  const std::size_t mismatch_n = or_default(cfg.n, 1024);
  constexpr std::size_t kPlateauN = 64;
  std::vector<std::size_t> ladder = cfg.ladder;
  if (ladder.empty()) ladder = {8, 16, 32, 64, 128, 256, 512, 1024};
  for (std::size_t n : ladder) require_divides(p, sub, n);
  require_divides(p, sub, mismatch_n);
  require_divides(p, sub, kPlateauN);
  const double h_mismatch = cfg.hedge_vol > 0.0 ? cfg.hedge_vol : p.sigma_bar;

  HedgeConfig base;
  base.option = {cfg.strike, p.T, OptionKind::kCall};
  base.rate = p.r;
  auto with = [&](double h, std::size_t n) {
    HedgeConfig c = base;
    c.hedge_vol = h;
    c.rebalance_count = n;
    return c;
  };

  const std::size_t rungs = ladder.size();
  std::vector<std::vector<double>> gbm_res(rungs, std::vector<double>(paths));
  std::vector<std::vector<double>> y_res(rungs, std::vector<double>(paths));
  std::vector<double> mis_res(mismatch_paths), plateau_res(mismatch_paths);
  const YSimulator sim(p, cfg.scheme, sub);
  const std::size_t total = std::max(paths, mismatch_paths);
  parallel_for(total, threads, [&](std::size_t i) {
    RandomStream ys(cfg.seed, stream_id(i, StreamPurpose::kPrimary));
    const Path y = sim(ys);
    if (i < paths) {
      RandomStream gs(cfg.seed, stream_id(i, StreamPurpose::kReference));
      const Path g = simulate_gbm(p, p.mu, p.nu, sub, gs);
      for (std::size_t k = 0; k < rungs; ++k) {
        gbm_res[k][i] = hedge_residual(g, with(p.nu, ladder[k]));
        y_res[k][i] = hedge_residual(y, with(p.nu, ladder[k]));
      }
    }
    if (i < mismatch_paths) {
      mis_res[i] = hedge_residual(y, with(h_mismatch, mismatch_n));
      plateau_res[i] = hedge_residual(y, with(h_mismatch, kPlateauN));
    }
  });

  CsvWriter csv("family,hedge_vol,n,path_index,residual");
  json matched = json::array();
  std::vector<double> ns, gbm_rms, y_rms;
  double worst_ratio = 1.0;
  for (std::size_t k = 0; k < rungs; ++k) {
    const HedgeReport g = summarize(gbm_res[k], with(p.nu, ladder[k]));
    const HedgeReport y = summarize(y_res[k], with(p.nu, ladder[k]));
    ns.push_back(static_cast<double>(ladder[k]));
    gbm_rms.push_back(g.rms);
    y_rms.push_back(y.rms);
    worst_ratio = std::max({worst_ratio, g.rms / y.rms, y.rms / g.rms});
    matched.push_back({{"n", ladder[k]},
                       {"gbm", to_json(g, cfg.seed)},
                       {"y", to_json(y, cfg.seed)}});
    for (std::size_t i = 0; i < paths; ++i) csv.row("gbm", p.nu, ladder[k], i, gbm_res[k][i]);
    for (std::size_t i = 0; i < paths; ++i) csv.row("y", p.nu, ladder[k], i, y_res[k][i]);
  }
  const HedgeReport mis = summarize(mis_res, with(h_mismatch, mismatch_n));
  const HedgeReport plateau = summarize(plateau_res, with(h_mismatch, kPlateauN));
  for (std::size_t i = 0; i < mismatch_paths; ++i) {
    csv.row("y", h_mismatch, mismatch_n, i, mis_res[i]);
  }
  for (std::size_t i = 0; i < mismatch_paths; ++i) {
    csv.row("y", h_mismatch, kPlateauN, i, plateau_res[i]);
  }

  const double slope_gbm = loglog_slope(ns, gbm_rms);
  const double slope_y = loglog_slope(ns, y_rms);
  const bool slopes_ok = slope_gbm >= -0.65 && slope_gbm <= -0.35 &&
                         slope_y >= -0.65 && slope_y <= -0.35;
  const bool families_ok = worst_ratio <= 2.0;
  const bool loses = mis.mean < 0.0 && std::abs(mis.mean) > 3.0 * mis.standard_error;
  const bool plateaus = mis.rms > 0.5 * plateau.rms;

  ExperimentResult out;
  out.summary = {
      {"scheme", scheme_name(cfg.scheme)},
      {"sub_steps", sub},
      {"matched",
       {{"hedge_vol", p.nu}, {"paths", paths}, {"ladder", matched},
        {"slope_gbm", slope_gbm}, {"slope_y", slope_y},
        {"slope_range", {-0.65, -0.35}}, {"worst_rms_ratio", worst_ratio},
        {"passed", slopes_ok && families_ok}}},
      {"mismatched",
       {{"hedge_vol", h_mismatch}, {"report", to_json(mis, cfg.seed)},
        {"plateau_reference", to_json(plateau, cfg.seed)},
        {"loses_money", loses}, {"plateaus", plateaus}, {"passed", loses && plateaus}}},
  };
  out.passed = slopes_ok && families_ok && loses && plateaus;
  out.data_csv = csv.str();
  return out;
}

// --- rough ------------------------------------------------------------------

// |S_{u,t}|^2 + [S]_{u,t} bounds the size of the lift on each interval.
double lift_scale(const LiftedPath& lp, const Bracket& b, std::size_t k) {
  const double inc = lp.increment(k);
  return inc * inc + std::abs(b.values[k]);
}

ExperimentResult run_rough(const ExperimentConfig& cfg, unsigned threads) {
  const ModelParams& p = cfg.params;
  const std::size_t paths = or_default(cfg.paths, 200);
  const std::size_t sub = or_default(cfg.sub_steps, 256);
  const std::size_t density_paths = or_default(cfg.density_paths, 50);
  const std::size_t headline = or_default(cfg.n, 64);
  std::vector<std::size_t> ladder = cfg.ladder;
  if (ladder.empty()) ladder = {8, 16, 32, 64, 128, 256};
  std::sort(ladder.begin(), ladder.end());
  if (std::find(ladder.begin(), ladder.end(), headline) == ladder.end()) {
    throw ConfigError("rough: n must be one of the ladder rungs");
  }
  for (std::size_t n : ladder) require_divides(p, sub, n);

  const OptionSpec opt{cfg.strike, p.T, OptionKind::kCall};
  const double vol = p.nu;
  auto delta = [&](double t, double s) {
    return bs_delta(s, opt.with_expiry(opt.expiry - t), p.r, vol);
  };
  auto gamma = [&](double t, double s) {
    return bs_gamma(s, opt.with_expiry(opt.expiry - t), p.r, vol);
  };

  const std::size_t rungs = ladder.size();
  std::vector<std::vector<double>> comp(rungs, std::vector<double>(paths));
  std::vector<std::vector<double>> left(rungs, std::vector<double>(paths));
  std::vector<std::vector<double>> chen(rungs, std::vector<double>(paths, 0.0));
  std::vector<std::vector<double>> additivity(rungs, std::vector<double>(paths, 0.0));
  std::vector<double> telescoping(paths, 0.0);
  parallel_for(paths, threads, [&](std::size_t i) {
    RandomStream s(cfg.seed, stream_id(i, StreamPurpose::kReference));
    const Path path = simulate_gbm(p, p.mu, vol, sub, s);
    double reference = 0.0;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      reference += delta(path.time(j), path.value(j)) * (path.value(j + 1) - path.value(j));
    }
    std::vector<LiftedPath> lifts;
    for (std::size_t k = 0; k < rungs; ++k) {
      lifts.push_back(ito_lift(path, uniform_partition(p.T, ladder[k])));
      comp[k][i] = std::abs(compensated_integral(delta, gamma, lifts[k]) - reference);
      left[k][i] = std::abs(uncompensated_integral(delta, lifts[k]) - reference);
    }
    const Bracket finest = rough_bracket(lifts.back());
    double fine_sq = 0.0;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      const double d = path.value(j + 1) - path.value(j);
      fine_sq += d * d;
    }
    telescoping[i] = std::abs(finest.total() - fine_sq) / fine_sq;
    // Each rung against the finest rung merged down by Chen.
    for (std::size_t k = 0; k + 1 < rungs; ++k) {
      if (ladder.back() % ladder[k] != 0) continue;
      const std::size_t factor = ladder.back() / ladder[k];
      const LiftedPath merged = coarsen(lifts.back(), factor);
      const Bracket direct_b = rough_bracket(lifts[k]);
      const Bracket merged_b = rough_bracket(merged);
      for (std::size_t m = 0; m < lifts[k].intervals(); ++m) {
        const double scale = lift_scale(lifts[k], direct_b, m);
        chen[k][i] = std::max(chen[k][i],
                              std::abs(merged.lift()[m] - lifts[k].lift()[m]) / scale);
        double parts = 0.0, abs_parts = 0.0;
        for (std::size_t j = m * factor; j < (m + 1) * factor; ++j) {
          parts += finest.values[j];
          abs_parts += std::abs(finest.values[j]);
        }
        additivity[k][i] = std::max(
            additivity[k][i],
            std::max(std::abs(direct_b.values[m] - parts),
                     std::abs(merged_b.values[m] - parts)) / abs_parts);
      }
    }
  });

  const YSimulator sim(p, cfg.scheme, sub);
  std::vector<LiftedPath> density_lifts;
  density_lifts.reserve(density_paths);
  {
    std::vector<std::optional<LiftedPath>> slots(density_paths);
    parallel_for(density_paths, threads, [&](std::size_t i) {
      RandomStream ys(cfg.seed, stream_id(i, StreamPurpose::kPrimary));
      slots[i].emplace(ito_lift(sim(ys), uniform_partition(p.T, headline)));
    });
    for (auto& s : slots) density_lifts.push_back(std::move(*s));
  }
  const double density = bracket_density(density_lifts);
  const double density_target = p.nu * p.nu;
  const double density_err = density / density_target - 1.0;

  CsvWriter csv(
      "n,median_abs_error_compensated,median_abs_error_uncompensated,"
      "chen_max_rel_error,additivity_max_rel_error");
  double chen_max = 0.0, add_max = 0.0, tele_max = 0.0;
  for (double t : telescoping) tele_max = std::max(tele_max, t);
  double headline_comp = 0.0, headline_left = 0.0;
  json rows = json::array();
  for (std::size_t k = 0; k < rungs; ++k) {
    const double mc = median(comp[k]);
    const double ml = median(left[k]);
    double ck = 0.0, ak = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
      ck = std::max(ck, chen[k][i]);
      ak = std::max(ak, additivity[k][i]);
    }
    chen_max = std::max(chen_max, ck);
    add_max = std::max(add_max, ak);
    if (ladder[k] == headline) {
      headline_comp = mc;
      headline_left = ml;
    }
    csv.row(ladder[k], mc, ml, ck, ak);
    rows.push_back({{"n", ladder[k]}, {"median_abs_error_compensated", mc},
                    {"median_abs_error_uncompensated", ml}});
  }
  const bool algebra_ok = chen_max <= 1e-10 && add_max <= 1e-10 && tele_max <= 1e-10;
  const bool density_ok = std::abs(density_err) <= 0.05;
  const bool compensated_wins = headline_comp < headline_left;

  ExperimentResult out;
  out.summary = {
      {"units", {{"errors", "currency (delta-integral against fine Ito sum)"}}},
      {"paths", paths},
      {"sub_steps", sub},
      {"ladder", rows},
      {"chen_max_rel_error", chen_max},
      {"additivity_max_rel_error", add_max},
      {"telescoping_max_rel_error", tele_max},
      {"algebra_tolerance", 1e-10},
      {"bracket_density", density},
      {"bracket_density_target", density_target},
      {"bracket_density_rel_error", density_err},
      {"density_paths", density_paths},
      {"headline_n", headline},
      {"median_abs_error_compensated", headline_comp},
      {"median_abs_error_uncompensated", headline_left},
      {"compensated_wins", compensated_wins},
  };
  out.passed = algebra_ok && density_ok && compensated_wins;
  out.data_csv = csv.str();
  return out;
}

// --- schemes ----------------------------------------------------------------

ExperimentResult run_schemes(const ExperimentConfig& cfg, unsigned threads) {
  const ModelParams& p = cfg.params;
  const std::size_t paths = or_default(cfg.paths, 50000);
  const std::size_t sub = or_default(cfg.sub_steps, 200);
  const std::size_t degeneration_paths = 100;
  // Independent draws for the two schemes.
  const std::uint64_t euler_seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL;

  const YSimulator exact(p, YScheme::kExact, 1);
  const YSimulator euler(p, YScheme::kEuler, sub);
  const GridReturns a = simulate_grid_returns(p, y_source(exact), paths, cfg.seed, threads);
  const GridReturns b = simulate_grid_returns(p, y_source(euler), paths, euler_seed, threads);
  const KsResult ks = ks_two_sample(a.y, b.y, cfg.level);

  ModelParams matched = p;
  matched.nu = p.sigma_bar;
  std::vector<double> rel(degeneration_paths, 0.0);
  parallel_for(degeneration_paths, threads, [&](std::size_t i) {
    const Path y = simulate_y_exact(matched, 8, cfg.seed, i);
    const Path s = simulate_gbm(matched, matched.mu, matched.sigma_bar, 8, cfg.seed, i);
    for (std::size_t k = 0; k < y.size(); ++k) {
      rel[i] = std::max(rel[i], std::abs(y.value(k) - s.value(k)) / s.value(k));
    }
  });
  const double max_rel = *std::max_element(rel.begin(), rel.end());

  ExperimentResult out;
  out.summary = {
      {"units", {{"returns", "log-return over one grid step"}}},
      {"paths", paths},
      {"euler_sub_steps", sub},
      {"euler_seed", euler_seed},
      {"two_sample", {{"statistic", ks.statistic}, {"threshold", ks.threshold},
                      {"level", ks.level}, {"pass", ks.passed()}}},
      {"degeneration", {{"paths", degeneration_paths}, {"max_rel_diff", max_rel},
                        {"tolerance", 1e-10}, {"pass", max_rel <= 1e-10}}},
  };
  out.passed = ks.passed() && max_rel <= 1e-10;
  CsvWriter csv("path_index,increment,exact_log_return,euler_log_return");
  for (std::size_t i = 0; i < paths; ++i) {
    for (std::size_t k = 0; k < a.increments; ++k) csv.row(i, k, a.y_at(i, k), b.y_at(i, k));
  }
  out.data_csv = csv.str();
  return out;
}

using Runner = std::function<ExperimentResult(const ExperimentConfig&, unsigned)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"indist", run_indist},   {"qv", run_qv},     {"price-range", run_price_range},
      {"price-mc", run_price_mc}, {"hedge", run_hedge}, {"rough", run_rough},
      {"schemes", run_schemes},
  };
  return table;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw ConfigError("cannot write " + path.string());
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : runners()) out.push_back(name);
    return out;
  }();
  return names;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  bool has_experiment = false;
  bool has_seed = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "experiment") {
      if (!v.is_string()) throw ConfigError("'experiment' must be a string");
      cfg.experiment = v.get<std::string>();
      has_experiment = true;
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ConfigError("'seed' must be a non-negative integer");
      }
      cfg.seed = v.get<std::uint64_t>();
      has_seed = true;
    } else if (key == "params") {
      try {
        cfg.params = params_from_json(v);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(std::string("params: ") + e.what());
      }
    } else if (key == "scheme") {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "exact") {
        cfg.scheme = YScheme::kExact;
      } else if (s == "euler") {
        cfg.scheme = YScheme::kEuler;
      } else {
        throw ConfigError("'scheme' must be \"exact\" or \"euler\"");
      }
    } else if (key == "paths") {
      cfg.paths = get_count(v, key);
    } else if (key == "sub_steps") {
      cfg.sub_steps = get_count(v, key);
    } else if (key == "grid_paths") {
      cfg.grid_paths = get_count(v, key);
    } else if (key == "mismatch_paths") {
      cfg.mismatch_paths = get_count(v, key);
    } else if (key == "density_paths") {
      cfg.density_paths = get_count(v, key);
    } else if (key == "n") {
      cfg.n = get_count(v, key);
    } else if (key == "strike") {
      cfg.strike = get_number(v, key);
      if (!(cfg.strike >= 0.0)) throw ConfigError("'strike' must be >= 0");
    } else if (key == "hedge_vol") {
      cfg.hedge_vol = get_number(v, key);
      if (cfg.hedge_vol < 0.0) throw ConfigError("'hedge_vol' must be >= 0");
    } else if (key == "level") {
      cfg.level = get_number(v, key);
      if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ConfigError("'level' must be in (0, 1)");
    } else if (key == "ladder") {
      if (!v.is_array()) throw ConfigError("'ladder' must be an array");
      cfg.ladder.clear();
      for (const auto& x : v) {
        const std::size_t n = get_count(x, "ladder");
        if (n == 0) throw ConfigError("'ladder' entries must be >= 1");
        cfg.ladder.push_back(n);
      }
    } else if (key == "vols") {
      if (!v.is_array()) throw ConfigError("'vols' must be an array");
      cfg.vols.clear();
      for (const auto& x : v) {
        const double vol = get_number(x, "vols");
        if (!(vol > 0.0)) throw ConfigError("'vols' entries must be > 0");
        cfg.vols.push_back(vol);
      }
    } else if (key == "output_dir") {
      if (!v.is_string()) throw ConfigError("'output_dir' must be a string");
      cfg.output_dir = v.get<std::string>();
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (!has_experiment) throw ConfigError("config needs an 'experiment'");
  if (!has_seed) throw ConfigError("config needs a 'seed'");
  if (runners().count(cfg.experiment) == 0) {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }
  if (!j.contains("params")) cfg.params = validate(cfg.params);
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  return {
      {"experiment", cfg.experiment},
      {"seed", cfg.seed},
      {"params", pathvol::to_json(cfg.params)},
      {"scheme", scheme_name(cfg.scheme)},
      {"paths", cfg.paths},
      {"sub_steps", cfg.sub_steps},
      {"grid_paths", cfg.grid_paths},
      {"mismatch_paths", cfg.mismatch_paths},
      {"density_paths", cfg.density_paths},
      {"strike", cfg.strike},
      {"n", cfg.n},
      {"hedge_vol", cfg.hedge_vol},
      {"ladder", cfg.ladder},
      {"vols", cfg.vols},
      {"level", cfg.level},
      {"output_dir", cfg.output_dir},
  };
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
  }
  std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  constexpr std::string_view kPrefix = "params.";
  const bool prefixed = key.rfind(kPrefix, 0) == 0;
  if (prefixed) key = key.substr(kPrefix.size());
  if (prefixed || std::find(kParamKeys.begin(), kParamKeys.end(), key) != kParamKeys.end()) {
    json& params = config["params"];
    if (params.is_null()) params = json::object();
    params[key] = value;
    return;
  }
  config[key] = value;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  const auto it = runners().find(cfg.experiment);
  if (it == runners().end()) {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }
  return it->second(cfg, threads);
}

int run(const RunOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  try {
    if (options.config_path.empty()) throw ConfigError("no config file given");
    json raw = load_config_file(options.config_path);
    for (const auto& o : options.overrides) apply_override(raw, o);
    if (options.seed) raw["seed"] = *options.seed;
    if (options.output_dir) raw["output_dir"] = *options.output_dir;
    cfg = parse_config(raw);
    if (options.threads < 1) throw ConfigError("--threads must be >= 1");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::filesystem::path dir(cfg.output_dir);
  ExperimentResult result;
  try {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
      throw ConfigError("cannot create output directory '" + dir.string() + "'");
    }
    result = run_experiment(cfg, options.threads);
    const std::string stem = cfg.experiment;
    write_file(dir / (stem + ".summary.json"), result.summary.dump(2) + "\n");
    write_file(dir / (stem + ".data.csv"), result.data_csv);
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start).count();
    const json manifest = {
        {"tool", "pathvol"},
        {"version", PATHVOL_VERSION},
        {"experiment", cfg.experiment},
        {"seed", cfg.seed},
        {"config_path", options.config_path},
        {"overrides", options.overrides},
        {"inputs", to_json(cfg)},
        {"threads", options.threads},
        {"outputs", {stem + ".summary.json", stem + ".data.csv"}},
        {"passed", result.passed},
        {"wall_time_seconds", wall},
        {"timestamp", utc_timestamp()},
    };
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  log << cfg.experiment << ": " << (result.passed ? "PASS" : "FAIL") << " (outputs in "
      << dir.string() << ")\n";
  return result.passed ? kExitOk : kExitAssertion;
}

}  // namespace pathvol::cli
