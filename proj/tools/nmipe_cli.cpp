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

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "nmipe/errors.hpp"
#include "nmipe/ipe.hpp"
#include "nmipe/oracle.hpp"
#include "nmipe/propagate.hpp"
#include "nmipe/scenario.hpp"
#include "nmipe/simd/kernels.hpp"
#include "nmipe/solutions.hpp"
#include "nmipe/specfun.hpp"
#include "nmipe/turbulence.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitThreshold = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

using namespace nmipe;

int cmd_run(const std::string& scenario_path, unsigned threads, const std::string& out_override) {
  const auto sc = scenario::load_scenario(scenario_path);
  const auto outcome = scenario::run_scenario(sc, {threads});
  const std::string out = out_override.empty() ? sc.output_path : out_override;
  if (out.empty() || out == "-") {
    scenario::write_results_csv(outcome.table, std::cout);
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file", out);
    scenario::write_results_csv(outcome.table, os);
  }
  if (outcome.numerical_failure) {
    std::cerr << "nmipe: numerical failure in at least one row (see status column)\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_compare(const std::string& csv_path, double threshold) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open results file", csv_path);
  const auto table = scenario::read_results_csv(in);
  const auto summary = scenario::compare_report(table);
  for (const auto& p : summary.pairs) {
    std::printf("%s vs %s: samples=%zu max_rel=%.3e mean_rel=%.3e\n", std::string(to_string(p.a)).c_str(),
                std::string(to_string(p.b)).c_str(), p.samples, p.max_rel, p.mean_rel);
    for (const auto& pp : p.points) {
      std::printf("  point %zu: samples=%zu max_rel=%.3e mean_rel=%.3e\n", pp.point, pp.samples, pp.max_rel,
                  pp.mean_rel);
    }
  }
  std::printf("skipped rows: %zu\n", summary.skipped_rows);
  std::printf("# %s\n", summary.to_json().c_str());
  if (threshold > 0.0) {
    for (const auto& p : summary.pairs) {
      if (p.max_rel > threshold) return kExitThreshold;
    }
  }
  return kExitOk;
}

struct Check {
  const char* name;
  std::function<bool()> run;
};

int cmd_selftest() {
  const TurbulenceParams params{1e-15, 1e-6, 0.02};
  std::vector<Check> checks = {
      {"bessel wronskian",
       [] {
         for (double x : {0.5, 3.0, 11.0, 16.9, 17.1, 40.0}) {
           const specfun::BesselOrder nu(3, 8);
           const double w = specfun::bessel_j(nu + 1, x) * specfun::bessel_y(nu, x) -
                            specfun::bessel_j(nu, x) * specfun::bessel_y(nu + 1, x);
           if (std::abs(w - 2.0 / (std::numbers::pi * x)) > 1e-12 * (2.0 / (std::numbers::pi * x))) return false;
         }
         return true;
       }},
      {"s_integral branches agree",
       [] {
         const PhasePoint near{{0.01, 0.0}, {1.0, 0.5}};
         const double z = 0.0999 * 0.01 / (1e-6 * std::hypot(1.0, 0.5));
         const double z2 = 0.1001 * 0.01 / (1e-6 * std::hypot(1.0, 0.5));
         const double a = solutions::s_integral(z, near, 1e-6) / (z * z);
         const double b = solutions::s_integral(z2, near, 1e-6) / (z2 * z2);
         return std::abs(a - b) < 1e-3 * std::abs(b);
       }},
      {"kernels equal 1 at z = 0",
       [&] {
         const PhasePoint p{{0.01, 0.0}, {3.0, 1.0}};
         return solutions::perturbative_kernel(0.0, p, params).value == 1.0 &&
                solutions::modified_solution(0.0, p, params).value == 1.0;
       }},
      {"modified solution matches oracle",
       [&] {
         const PhasePoint p{{0.02, 0.01}, {4.0, 2.0}};  // collinear: no dropped cross term
         oracle::OdeOptions oo;
         oo.tol = 1e-12;
         oo.report_at = {2000.0};
         const auto sol = oracle::integrate_pointwise([&](double z) { return ipe::k_single(z, p, params); },
                                                      2000.0, oo);
         const double ref = sol.values.back();
         const double m = solutions::modified_solution(2000.0, p, params).value;
         return std::abs(m - ref) < 1e-6 * std::abs(ref);
       }},
      {"free-space coherence is hermitian",
       [&] {
         const GaussianInput in{0.02, 1.0};
         const auto k = propagate::free_space_kernel();
         propagate::AssemblyOptions ao;
         ao.rel_tol = 1e-8;
         const auto a = propagate::observable_coherence({0.01, 0.0}, {-0.005, 0.002}, 1000.0, k, in, params, ao);
         const auto b = propagate::observable_coherence({-0.005, 0.002}, {0.01, 0.0}, 1000.0, k, in, params, ao);
         return std::abs(a.value - std::conj(b.value)) < 1e-8 * std::abs(a.value);
       }},
      {"simd kernels match scalar",
       [] {
         const auto& s = simd::scalar_kernels();
         const auto& a = simd::active();
         std::vector<double> r1(37), r2(37);
         s.shifted_radius_squared(-0.3, 0.017, 0.05, 0.2, r1.data(), r1.size());
         a.shifted_radius_squared(-0.3, 0.017, 0.05, 0.2, r2.data(), r2.size());
         for (std::size_t i = 0; i < r1.size(); ++i) {
           if (std::abs(r1[i] - r2[i]) > 1e-15) return false;
         }
         return true;
       }},
  };
  int failed = 0;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::printf("  error: %s\n", e.what());
    }
    std::printf("%s  %s\n", ok ? "PASS" : "FAIL", c.name);
    failed += ok ? 0 : 1;
  }
  std::printf("simd variant: %s\n", std::string(simd::active().name).c_str());
  return failed ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nmipe: turbulence kernels for paraxial propagation of light"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;
  unsigned threads = 1;
  auto* run = app.add_subcommand("run", "Evaluate a scenario and write a results CSV");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "Output CSV path ('-' for stdout); overrides the scenario");

  std::string csv_path;
  double threshold = 0.0;
  auto* compare = app.add_subcommand("compare", "Summarize deviations between methods in a results CSV");
  compare->add_option("results", csv_path, "Results CSV")->required();
  compare->add_option("--threshold", threshold, "Exit 1 when any pair's max relative deviation exceeds this");

  auto* selftest = app.add_subcommand("selftest", "Run a quick set of invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(scenario_path, threads, out_path);
    if (*compare) return cmd_compare(csv_path, threshold);
    if (*selftest) return cmd_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "nmipe: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NonConvergenceError& e) {
    std::cerr << "nmipe: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const StepSizeUnderflow& e) {
    std::cerr << "nmipe: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "nmipe: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
