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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "nmipe/errors.hpp"
#include "nmipe/oracle.hpp"

using namespace nmipe;
using std::numbers::pi;

TEST_CASE("1-D quadrature") {
  oracle::QuadOptions q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-13;
  CHECK(oracle::quad_adaptive_1d([](double x) { return std::cbrt(x * x); }, 0.0, 1.0, q).value ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK(oracle::quad_adaptive_1d([](double x) { return std::cbrt(1 + x * x); }, 0.0, 1.0, q).value ==
        doctest::Approx(1.0948078325781160379).epsilon(1e-12));
  // reversed bounds and infinite ranges
  CHECK(oracle::quad_adaptive_1d([](double x) { return x; }, 1.0, 0.0, q).value == doctest::Approx(-0.5));
  CHECK(oracle::quad_adaptive_1d([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY, q).value ==
        doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  CHECK(oracle::quad_adaptive_1d([](double x) { return std::exp(-x); }, 2.0, INFINITY, q).value ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(oracle::quad_adaptive_1d([](double x) { return std::exp(x); }, -INFINITY, 0.0, q).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto c = oracle::quad_adaptive_1d<std::complex<double>>(
      [](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0, pi, q);
  CHECK(std::abs(c.value - std::complex<double>(0.0, 2.0)) < 1e-12);
}

TEST_CASE("quadrature reports non-convergence with its best estimate") {
  oracle::QuadOptions q;
  q.abs_tol = 0.0;
  q.rel_tol = 1e-15;
  q.max_subdivisions = 5;
  try {
    (void)oracle::quad_adaptive_1d([](double x) { return std::sin(50 * x) / std::sqrt(x); }, 0.0, 1.0, q);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("2-D quadrature") {
  oracle::QuadOptions q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  const oracle::Region2d tri{0.0, 1.0, [](double) { return 0.0; }, [](double x) { return x; }};
  CHECK(oracle::quad_adaptive_2d([](double, double) { return 1.0; }, tri, q).value ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(oracle::quad_adaptive_2d([](double x, double y) { return x * y * y; },
                                 oracle::Region2d::rectangle(0, 2, -1, 1), q)
            .value == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("ode: trivial and oscillator") {
  const auto flat = oracle::integrate_pointwise([](double) { return 0.0; }, 10.0);
  CHECK(flat.values.front() == 1.0);
  CHECK(flat.derivative_values.front() == 0.0);
  for (double v : flat.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  const double w = 3.0;
  oracle::OdeOptions o;
  o.tol = 1e-11;
  o.report_at = {0.25 * pi / w, 0.5 * pi / w};
  const auto s = oracle::integrate_pointwise([&](double) { return -w * w; }, pi / w, o);
  CHECK(s.z_samples.size() == 4);
  CHECK(s.z_samples[2] == 0.5 * pi / w);
  CHECK(std::abs(s.values[2]) < 1e-9);
  CHECK(s.values[1] == doctest::Approx(std::cos(0.25 * pi)).epsilon(1e-9));
  CHECK(s.values[3] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(s.derivative_values[2] == doctest::Approx(-w).epsilon(1e-9));
}

TEST_CASE("ode: error falls with tolerance") {
  double prev = 1.0;
  for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
    oracle::OdeOptions o;
    o.tol = tol;
    const auto s = oracle::integrate_pointwise([](double) { return -4.0; }, 10.0, o);
    const double err = std::abs(s.values.back() - std::cos(20.0));
    CAPTURE(tol);
    CHECK(err < 100 * tol);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("ode: dense output") {
  oracle::OdeOptions o;
  o.tol = 1e-12;
  o.keep_steps = true;
  const auto s = oracle::integrate_pointwise([](double) { return -1.0; }, 6.0, o);
  CHECK(s.z_samples.size() > 3);
  for (double z : {0.1, 1.3, 2.71, 5.9}) CHECK(s.interpolate(z) == doctest::Approx(std::cos(z)).epsilon(1e-6));
}

TEST_CASE("ode: errors") {
  CHECK_THROWS_AS(oracle::integrate_pointwise([](double) { return 0.0; }, 0.0), DomainError);
  oracle::OdeOptions o;
  o.max_steps = 5;
  CHECK_THROWS_AS(oracle::integrate_pointwise([](double) { return -1e4; }, 100.0, o), StepSizeUnderflow);
  CHECK_THROWS_AS(oracle::integrate_pointwise([](double z) { return -1.0 / std::pow(1.0 - z, 4); }, 2.0),
                  StepSizeUnderflow);
}

TEST_CASE("ode: first-order response equals the double z-integral") {
  // rho(z; g) = 1 + g rho1(z) + O(g^2) with rho1 = int_0^z int_0^z2 k0.
  auto k0 = [](double z) { return -std::cbrt(std::pow(z - 0.4, 2) + 0.01); };
  const double z_end = 1.5;
  oracle::QuadOptions q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  const oracle::Region2d tri{0.0, z_end, [](double) { return 0.0; }, [](double x) { return x; }};
  const double rho1 = oracle::quad_adaptive_2d([&](double, double z1) { return k0(z1); }, tri, q).value;
  auto r = [&](double g) {
    oracle::OdeOptions o;
    o.tol = 1e-13;
    return (oracle::integrate_pointwise([&](double z) { return g * k0(z); }, z_end, o).values.back() - 1.0) / g;
  };
  const double g = 1e-3;
  const double extrapolated = 2.0 * r(0.5 * g) - r(g);
  CHECK(std::abs(extrapolated - rho1) < 1e-4 * std::abs(rho1));
}
