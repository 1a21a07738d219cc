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

// CSV and JSON serialization. CSV files carry a header row and print doubles
// with 17 significant digits so they round-trip exactly.

#ifndef PATHVOL_IO_HPP_
#define PATHVOL_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "pathvol/core.hpp"
#include "pathvol/grid_law.hpp"
#include "pathvol/hedging.hpp"
#include "pathvol/pathwise.hpp"

namespace pathvol {

/// "%.17g".
std::string format_double(double x);

/// Columns: t,S
void write_path_csv(std::ostream& out, const Path& path);
/// Columns: u,t,S_ut,lift,bracket
void write_lift_csv(std::ostream& out, const LiftedPath& lp);
/// Columns: path_index,residual
void write_hedge_csv(std::ostream& out, const HedgeReport& report);

/// Reads back the output of write_path_csv.
Path read_path_csv(std::istream& in);

/// {mean, se, rms, n, h, seed, paths, ...} with units.
nlohmann::json to_json(const HedgeReport& report, std::uint64_t seed);
nlohmann::json to_json(const GridLawReport& report);
nlohmann::json to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j,
                             const ModelParams& defaults = {});

/// Human-readable summary table.
void print_table(std::ostream& out, const GridLawReport& report);

}  // namespace pathvol

#endif  // PATHVOL_IO_HPP_
