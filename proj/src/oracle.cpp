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

#include "nmipe/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nmipe::oracle {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
  double r, v;
};

struct Rhs {
  const std::function<double(double)>& k;
  State operator()(double z, State y) const { return {y.v, k(z) * y.r}; }
};

State axpy(State y, double h, std::initializer_list<std::pair<double, State>> terms) {
  State out = y;
  for (const auto& [c, s] : terms) {
    out.r += h * c * s.r;
    out.v += h * c * s.v;
  }
  return out;
}

}  // namespace

double OdeSolution::interpolate(double z) const {
  if (z_samples.empty()) throw DomainError("OdeSolution::interpolate: empty solution");
  if (z < z_samples.front() || z > z_samples.back()) throw DomainError("OdeSolution::interpolate: z out of range");
  auto it = std::lower_bound(z_samples.begin(), z_samples.end(), z);
  std::size_t i = static_cast<std::size_t>(it - z_samples.begin());
  if (i < z_samples.size() && z_samples[i] == z) return values[i];
  const std::size_t i0 = i - 1;
  const double h = z_samples[i] - z_samples[i0];
  const double s = (z - z_samples[i0]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * values[i0] + h10 * h * derivative_values[i0] + h01 * values[i] + h11 * h * derivative_values[i];
}

OdeSolution integrate_pointwise(const std::function<double(double)>& k_of_z, double z_end, const OdeOptions& opt) {
  if (!(z_end > 0.0) || !std::isfinite(z_end)) throw DomainError("integrate_pointwise: z_end must be > 0");
  if (!(opt.tol > 0.0)) throw DomainError("integrate_pointwise: tol must be > 0");

  std::vector<double> targets;
  for (double z : opt.report_at) {
    if (z > 0.0 && z < z_end) targets.push_back(z);
  }
  targets.push_back(z_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  OdeSolution sol;
  sol.z_samples.push_back(0.0);
  sol.values.push_back(1.0);
  sol.derivative_values.push_back(0.0);

  const double tol = opt.tol;
  const double vscale = 1.0 / z_end;
  Rhs f{k_of_z};

  // Bootstrap: rho ~ 1 + int_0^h (h - s) K(s) ds, rho' ~ int_0^h K(s) ds.
  // The neglected terms are O(K^2 h^4) and O(K^2 h^3).
  double kscale = 0.0;
  for (double frac : {0.0, 0.25, 0.5, 1.0}) kscale = std::max(kscale, std::abs(k_of_z(frac * 1e-2 * z_end)));
  double h0 = std::min(1e-3 * z_end, targets.front());
  if (kscale > 0.0) {
    h0 = std::min(h0, std::pow(0.24 * tol, 0.25) / std::sqrt(kscale));
    h0 = std::min(h0, std::cbrt(0.6 * tol * vscale / (kscale * kscale)));
  }
  QuadOptions qo{1e-3 * tol, 0.0, 200};
  const double i1 = quad_adaptive_1d([&](double s) { return k_of_z(s); }, 0.0, h0, {qo.abs_tol * vscale, 0.0, 200}).value;
  const double i2 = quad_adaptive_1d([&](double s) { return (h0 - s) * k_of_z(s); }, 0.0, h0, qo).value;

  double z = h0;
  State y{1.0 + i2, i1};
  std::size_t next = 0;
  auto record = [&](double zz, State yy) {
    sol.z_samples.push_back(zz);
    sol.values.push_back(yy.r);
    sol.derivative_values.push_back(yy.v);
  };
  if (z == targets[next]) {
    record(z, y);
    ++next;
  } else if (opt.keep_steps) {
    record(z, y);
  }

  double h = h0;
  State k1 = f(z, y);
  int steps = 0;
  while (next < targets.size()) {
    if (++steps > opt.max_steps) throw StepSizeUnderflow("integrate_pointwise: step budget exhausted", z);
    const double target = targets[next];
    bool hits = false;
    if (z + h >= target) {
      h = target - z;
      hits = true;
    }
    if (h <= 1e-14 * std::max(z, z_end)) throw StepSizeUnderflow("integrate_pointwise: step size underflow", z);

    const State k2 = f(z + c2 * h, axpy(y, h, {{a21, k1}}));
    const State k3 = f(z + c3 * h, axpy(y, h, {{a31, k1}, {a32, k2}}));
    const State k4 = f(z + c4 * h, axpy(y, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
    const State k5 = f(z + c5 * h, axpy(y, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
    const State k6 = f(z + h, axpy(y, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
    const State yn = axpy(y, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
    const double znew = hits ? target : z + h;
    const State k7 = f(znew, yn);
    const State err = axpy(State{0.0, 0.0}, h, {{e1, k1}, {e3, k3}, {e4, k4}, {e5, k5}, {e6, k6}, {e7, k7}});

    const double sr = tol * (1.0 + std::max(std::abs(y.r), std::abs(yn.r)));
    const double sv = tol * (vscale + std::max(std::abs(y.v), std::abs(yn.v)));
    const double en = std::max(std::abs(err.r) / sr, std::abs(err.v) / sv);
    if (!std::isfinite(en)) {
      h *= 0.2;
      continue;
    }
    const double factor = std::clamp(0.9 * std::pow(std::max(en, 1e-12), -0.2), 0.2, 5.0);
    if (en <= 1.0) {
      z = znew;
      y = yn;
      k1 = k7;
      if (hits) {
        record(z, y);
        ++next;
      } else if (opt.keep_steps) {
        record(z, y);
      }
      h *= factor;
    } else {
      h *= std::min(factor, 0.9);
    }
  }
  return sol;
}

}  // namespace nmipe::oracle
