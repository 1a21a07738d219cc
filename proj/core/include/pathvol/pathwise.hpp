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

// Probability-free integration against a one-dimensional path.
//
// A path S alone does not determine int F(S) dS once S is rougher than
// Young regularity allows. The second-order input SS_{u,t} = int_u^t S_{u,r}
// dS_r has to be supplied alongside S; with it, the compensated sums
//
//   sum_{[u,t]} F(S_u) S_{u,t} + DF(S_u) SS_{u,t}
//
// converge. Only the symmetric (reduced) part matters in 1-D, which is
// carried by the rough bracket [S]_{u,t} = S_{u,t}^2 - 2 SS_{u,t}.
// Increments use X_{s,t} = X_t - X_s throughout.

#ifndef PATHVOL_PATHWISE_HPP_
#define PATHVOL_PATHWISE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pathvol/core.hpp"

namespace pathvol {

/// Path values on a coarse partition plus one lift value per interval.
class LiftedPath {
 public:
  LiftedPath(std::vector<double> coarse_times, std::vector<double> values,
             std::vector<double> lift);

  std::size_t intervals() const { return lift_.size(); }
  std::span<const double> coarse_times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> lift() const { return lift_; }

  /// S_{u,t} over interval k.
  double increment(std::size_t k) const { return values_[k + 1] - values_[k]; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> lift_;
};

/// Per-interval rough bracket values.
struct Bracket {
  std::vector<double> values;

  double total() const;
};

/// Left-point fine sums: SS_{u,t} = sum_k S_{u,r_k} (S_{r_{k+1}} - S_{r_k})
/// over the fine samples r_k in [u, t]. Every coarse time must be a sample
/// time of `fine`.
LiftedPath ito_lift(const Path& fine, std::span<const double> coarse);

/// A lift specified through its bracket: SS_{u,t} = (S_{u,t}^2 - [S]_{u,t})/2.
LiftedPath lift_from_bracket(std::vector<double> coarse_times,
                             std::vector<double> values,
                             std::span<const double> bracket);

/// Merges `factor` consecutive intervals using Chen's relation
/// SS_{s,t} = SS_{s,u} + SS_{u,t} + S_{s,u} S_{u,t}.
LiftedPath coarsen(const LiftedPath& lp, std::size_t factor);

/// [S]_{u,t} = S_{u,t} S_{u,t} - 2 SS_{u,t}.
Bracket rough_bracket(const LiftedPath& lp);

/// Integrand F(t, s) and its s-derivative.
using Integrand = std::function<double(double t, double s)>;

/// sum F(u, S_u) S_{u,t} + DF(u, S_u) SS_{u,t}.
double compensated_integral(const Integrand& f, const Integrand& df,
                            const LiftedPath& lp);

/// Left Riemann sum sum F(u, S_u) S_{u,t}; ignores the lift.
double uncompensated_integral(const Integrand& f, const LiftedPath& lp);

enum class QvScale { kLevel, kLog };

/// Sum of squared increments over `partition` (all samples when empty),
/// of S itself or of ln S.
double realized_qv(const Path& path, std::span<const double> partition = {},
                   QvScale scale = QvScale::kLevel);

/// Least-squares slope through the origin of [S]_{u,t} against
/// (t - u) S_u^2, pooled over every interval of every lifted path. For a
/// path with bracket density a(S) = v^2 S^2 this estimates v^2.
double bracket_density(std::span<const LiftedPath> lifts);

}  // namespace pathvol

#endif  // PATHVOL_PATHWISE_HPP_
