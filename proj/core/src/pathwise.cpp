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

#include "pathvol/pathwise.hpp"

#include <cmath>
#include <string>

namespace pathvol {
namespace {

double checked(double v, const char* what, double t) {
  if (!std::isfinite(v)) {
    throw Error(std::string(what) + " is not finite at t = " +
                std::to_string(t));
  }
  return v;
}

}  // namespace

LiftedPath::LiftedPath(std::vector<double> coarse_times,
                       std::vector<double> values, std::vector<double> lift)
    : times_(std::move(coarse_times)),
      values_(std::move(values)),
      lift_(std::move(lift)) {
  if (times_.size() < 2) throw Error("lifted path needs at least one interval");
  if (values_.size() != times_.size() || lift_.size() + 1 != times_.size()) {
    throw Error("lifted path sizes are inconsistent");
  }
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) {
      throw Error("coarse times must be strictly increasing");
    }
  }
}

double Bracket::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

LiftedPath ito_lift(const Path& fine, std::span<const double> coarse) {
  if (coarse.size() < 2) throw Error("coarse partition needs two points");
  std::vector<std::size_t> idx;
  idx.reserve(coarse.size());
  for (double t : coarse) idx.push_back(fine.index_of(t));
  const auto s = fine.values();
  std::vector<double> times(coarse.begin(), coarse.end());
  std::vector<double> values;
  std::vector<double> lift;
  values.reserve(idx.size());
  lift.reserve(idx.size() - 1);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    values.push_back(s[idx[k]]);
    if (k == 0) continue;
    if (idx[k] <= idx[k - 1]) throw Error("coarse times must be increasing");
    const double base = s[idx[k - 1]];
    double sum = 0.0;
    for (std::size_t j = idx[k - 1]; j < idx[k]; ++j) {
      sum += (s[j] - base) * (s[j + 1] - s[j]);
    }
    lift.push_back(sum);
  }
  return LiftedPath(std::move(times), std::move(values), std::move(lift));
}

LiftedPath lift_from_bracket(std::vector<double> coarse_times,
                             std::vector<double> values,
                             std::span<const double> bracket) {
  if (bracket.size() + 1 != values.size()) {
    throw Error("bracket needs one value per interval");
  }
  std::vector<double> lift(bracket.size());
  for (std::size_t k = 0; k < bracket.size(); ++k) {
    const double inc = values[k + 1] - values[k];
    lift[k] = 0.5 * (inc * inc - bracket[k]);
  }
  return LiftedPath(std::move(coarse_times), std::move(values),
                    std::move(lift));
}

LiftedPath coarsen(const LiftedPath& lp, std::size_t factor) {
  if (factor == 0 || lp.intervals() % factor != 0) {
    throw Error("coarsening factor must divide the interval count");
  }
  const auto t = lp.coarse_times();
  const auto v = lp.values();
  const auto l = lp.lift();
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> lift;
  for (std::size_t k = 0; k < lp.intervals(); k += factor) {
    times.push_back(t[k]);
    values.push_back(v[k]);
    double merged = 0.0;
    for (std::size_t j = k; j < k + factor; ++j) {
      // Chen: SS_{s,t} = SS_{s,u} + SS_{u,t} + S_{s,u} S_{u,t}.
      merged += l[j] + (v[j] - v[k]) * (v[j + 1] - v[j]);
    }
    lift.push_back(merged);
  }
  times.push_back(t.back());
  values.push_back(v.back());
  return LiftedPath(std::move(times), std::move(values), std::move(lift));
}

Bracket rough_bracket(const LiftedPath& lp) {
  Bracket out;
  out.values.resize(lp.intervals());
  for (std::size_t k = 0; k < lp.intervals(); ++k) {
    const double inc = lp.increment(k);
    out.values[k] = inc * inc - 2.0 * lp.lift()[k];
  }
  return out;
}

double compensated_integral(const Integrand& f, const Integrand& df,
                            const LiftedPath& lp) {
  const auto t = lp.coarse_times();
  const auto v = lp.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < lp.intervals(); ++k) {
    const double fu = checked(f(t[k], v[k]), "F", t[k]);
    const double dfu = checked(df(t[k], v[k]), "DF", t[k]);
    sum += fu * lp.increment(k) + dfu * lp.lift()[k];
  }
  return sum;
}

double uncompensated_integral(const Integrand& f, const LiftedPath& lp) {
  const auto t = lp.coarse_times();
  const auto v = lp.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < lp.intervals(); ++k) {
    sum += checked(f(t[k], v[k]), "F", t[k]) * lp.increment(k);
  }
  return sum;
}

double realized_qv(const Path& path, std::span<const double> partition,
                   QvScale scale) {
  auto value = [&](std::size_t i) {
    const double s = path.value(i);
    return scale == QvScale::kLog ? std::log(s) : s;
  };
  double sum = 0.0;
  if (partition.empty()) {
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double d = value(i) - value(i - 1);
      sum += d * d;
    }
    return sum;
  }
  std::size_t prev = path.index_of(partition[0]);
  for (std::size_t k = 1; k < partition.size(); ++k) {
    const std::size_t cur = path.index_of(partition[k]);
    if (cur <= prev) throw Error("partition must be increasing");
    const double d = value(cur) - value(prev);
    sum += d * d;
    prev = cur;
  }
  return sum;
}

double bracket_density(std::span<const LiftedPath> lifts) {
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& lp : lifts) {
    const Bracket b = rough_bracket(lp);
    const auto t = lp.coarse_times();
    const auto v = lp.values();
    for (std::size_t k = 0; k < lp.intervals(); ++k) {
      const double x = (t[k + 1] - t[k]) * v[k] * v[k];
      sxy += x * b.values[k];
      sxx += x * x;
    }
  }
  if (!(sxx > 0.0)) throw Error("bracket regression needs at least one interval");
  return sxy / sxx;
}

}  // namespace pathvol
