// Copyright 2026 the nmipe authors
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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nmipe/ipe.hpp"
#include "nmipe/solutions.hpp"
#include "nmipe/turbulence.hpp"

namespace nmipe::scenario {

using EvalPoint = std::variant<PhasePoint, TwoPhotonPoint>;

struct Scenario {
  TurbulenceParams params;
  std::vector<double> z_grid;
  std::vector<EvalPoint> points;
  std::vector<Method> methods;
  std::string output_path;
  double oracle_tol = 1e-12;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses a scenario document. Throws ConfigError with the line number for
/// malformed JSON and the field path for schema violations.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

struct ResultRow {
  std::size_t point = 0;
  std::string kind;          ///< "single" or "two_photon"
  std::vector<double> coords;  ///< x, a_d (single) or x1, a_d, x2, b_d (two_photon), flattened
  double z = 0.0;
  double t = 0.0;
  double g = 0.0;
  Method method = Method::perturbative;
  double value = 0.0;        ///< NaN when status is not "ok"
  bool valid = false;
  std::string status;        ///< "ok" or "<error kind>: <message>"
  std::optional<double> abs_delta_oracle;
};

struct ResultTable {
  std::string header_json;   ///< scenario echo and normalized parameters
  std::vector<ResultRow> rows;
};

struct RunOptions {
  unsigned threads = 1;
};

struct RunOutcome {
  ResultTable table;
  /// True when any row of a selected method failed numerically
  /// (non-convergence or step underflow). Domain errors do not count.
  bool numerical_failure = false;
};

/// Evaluates every (point, z, method) triple. Rows are ordered by point,
/// then z, then method, as listed in the scenario, whatever the thread count.
RunOutcome run_scenario(const Scenario& sc, const RunOptions& opt = {});

void write_results_csv(const ResultTable& table, std::ostream& os);
/// Throws ConfigError naming the offending line.
ResultTable read_results_csv(std::istream& is);

struct PairDeviation {
  Method a;
  Method b;
  struct PerPoint {
    std::size_t point;
    std::size_t samples;
    double max_rel;
    double mean_rel;
  };
  std::vector<PerPoint> points;
  double max_rel = 0.0;
  double mean_rel = 0.0;
  std::size_t samples = 0;
};

struct CompareSummary {
  std::vector<PairDeviation> pairs;
  std::size_t skipped_rows = 0;
  /// Machine-readable JSON rendering.
  std::string to_json() const;
};

/// Relative deviations |v_a - v_b| / max(|v_b|, 1e-300) between every pair of
/// methods present, over (point, z) cells where both rows are ok. Throws
/// ConfigError when fewer than two methods are present.
CompareSummary compare_report(const ResultTable& table);

}  // namespace nmipe::scenario
