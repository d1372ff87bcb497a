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
#include <random>

#include "nmipe/errors.hpp"
#include "nmipe/propagate.hpp"
#include "nmipe/solutions.hpp"

using namespace nmipe;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {
const TurbulenceParams kParams{1e-19, 1e-6, 0.02};
const GaussianInput kInput{0.02, 1.0};
}  // namespace

TEST_CASE("gaussian input") {
  CHECK_THROWS_AS((GaussianInput{0.0, 1.0}.validate()), DomainError);
  // unit trace at z = 0: int |psi|^2 = normalization
  double trace = 0.0;
  const double h = 0.002;
  for (int i = -60; i <= 60; ++i)
    for (int j = -60; j <= 60; ++j) trace += std::norm(kInput.field({i * h, j * h}, 0.0, 1e-6)) * h * h;
  CHECK(trace == doctest::Approx(1.0).epsilon(1e-10));
  const Vec2 xs{0.003, -0.001}, xd{0.01, 0.004};
  const cplx c = kInput.coherence(xs, xd, 700.0, 1e-6);
  CHECK(std::abs(c - kInput.field(xs + 0.5 * xd, 700.0, 1e-6) * std::conj(kInput.field(xs - 0.5 * xd, 700.0, 1e-6))) <
        1e-14 * std::abs(c));
}

TEST_CASE("rotating frame phase") {
  auto g = GridState::centered(16, 2.0, DomainTag::frequency);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  for (auto& v : g.samples) v = {d(rng), d(rng)};
  const auto same = propagate::rotating_frame_phase(g, 0.0, 1e-6, FrameDirection::add);
  for (std::size_t k = 0; k < g.samples.size(); ++k) CHECK(same.samples[k] == g.samples[k]);
  const auto added = propagate::rotating_frame_phase(g, 800.0, 1e-6, FrameDirection::add);
  const auto back = propagate::rotating_frame_phase(added, 800.0, 1e-6, FrameDirection::remove);
  for (std::size_t k = 0; k < g.samples.size(); ++k) CHECK(std::abs(back.samples[k] - g.samples[k]) < 1e-14 * (1 + std::abs(g.samples[k])));
  for (std::size_t i = 0; i < 16; i += 5) {
    const double a2 = norm2(g.coord(i, i));
    const cplx ratio = added.at(i, i) / g.at(i, i);
    CHECK(std::abs(ratio - std::polar(1.0, pi * 1e-6 * 800.0 * a2)) < 1e-12);
  }
  CHECK_THROWS_AS(propagate::rotating_frame_phase(GridState::centered(4, 1.0, DomainTag::position), 1.0, 1e-6,
                                                  FrameDirection::add),
                  GridMismatch);
}

TEST_CASE("free space assembly matches fresnel propagation") {
  const auto k = propagate::free_space_kernel();
  const Vec2 xs{0.004, -0.002}, xd{0.006, 0.003};
  for (double z : {100.0, 500.0, 1000.0, 3000.0, 10000.0}) {
    const auto g = propagate::to_position_domain(k, kInput, xs, xd, z, kParams);
    const cplx want = kInput.coherence(xs, xd, z, kParams.lambda);
    CAPTURE(z);
    CHECK(std::abs(g.value - want) < 1e-6 * std::abs(want));
    CHECK(g.excluded_fraction == 0.0);
  }
  CHECK_THROWS_AS(propagate::to_position_domain(k, kInput, xs, xd, 0.0, kParams), DomainError);
}

TEST_CASE("on-axis intensity follows beam spreading") {
  const auto k = propagate::free_space_kernel();
  const double w0 = kInput.w0;
  const double i0 = 2.0 / (pi * w0 * w0);
  for (double z : {300.0, 1256.0, 4000.0}) {
    const double t = kParams.lambda * z / (pi * w0 * w0);
    const auto g = propagate::to_position_domain(k, kInput, {}, {}, z, kParams);
    CHECK(std::abs(g.value.imag()) < 1e-9 * i0);
    CHECK(g.value.real() == doctest::Approx(i0 / (1 + t * t)).epsilon(1e-7));
  }
}

TEST_CASE("zero turbulence reduces to free space") {
  const TurbulenceParams calm{0.0, 1e-6, 0.02};
  const auto a = propagate::to_position_domain(propagate::perturbative_position_kernel(calm), kInput, {0.001, 0.0},
                                               {0.004, 0.001}, 900.0, calm);
  const auto b = propagate::to_position_domain(propagate::free_space_kernel(), kInput, {0.001, 0.0}, {0.004, 0.001},
                                               900.0, calm);
  CHECK(std::abs(a.value - b.value) < 1e-12 * std::abs(b.value));
}

TEST_CASE("observable coherence is hermitian with a real diagonal") {
  propagate::AssemblyOptions opt;
  opt.rel_tol = 1e-9;
  const auto pk = propagate::perturbative_position_kernel(kParams);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (int i = 0; i < 3; ++i) {
    const Vec2 x1{u(rng), u(rng)}, x2{u(rng), u(rng)};
    const auto a = propagate::observable_coherence(x1, x2, 1000.0, pk, kInput, kParams, opt);
    const auto b = propagate::observable_coherence(x2, x1, 1000.0, pk, kInput, kParams, opt);
    CHECK(std::abs(a.value - std::conj(b.value)) < 1e-8 * std::abs(a.value));
  }
  const auto d = propagate::observable_coherence({0.005, 0.002}, {0.005, 0.002}, 1000.0, pk, kInput, kParams, opt);
  CHECK(std::abs(d.value.imag()) < 1e-9 * std::abs(d.value));
  CHECK(d.value.real() > 0.0);
}

TEST_CASE("modified kernel zero-weights its inadmissible region") {
  const auto mk = propagate::modified_position_kernel(kParams);
  CHECK(mk.disk_support);
  propagate::AssemblyOptions opt;
  opt.rel_tol = 1e-7;
  const auto g = propagate::to_position_domain(mk, kInput, {0.002, 0.0}, {0.01, 0.004}, 1000.0, kParams, opt);
  CHECK(g.excluded_fraction > 0.0);
  CHECK(g.excluded_fraction < 1.0);
  CHECK(std::isfinite(g.value.real()));
  // inside the disk the adapter agrees with the kernel itself
  const Vec2 xd{0.01, 0.004}, u{0.004, 0.001};
  CHECK(mk.admissible(u, xd));
  CHECK(mk.value(u, xd, 1000.0) ==
        doctest::Approx(solutions::modified_kernel_position(xd - u, xd, 1000.0, kParams).value).epsilon(1e-15));
  CHECK_FALSE(mk.admissible({-0.004, 0.0}, xd));
}

TEST_CASE("grid route matches the gaussian assembly in free space") {
  const std::size_t n = 32;
  const double h = kInput.w0 / 4.0;
  auto field = GridState::centered(n, h, DomainTag::position);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) field.at(i, j) = kInput.field(field.coord(i, j), 0.0, kParams.lambda);
  const Vec2 xd{0.01, -0.005};
  const double z = 5000.0;
  const auto g = propagate::propagate_grid(field, xd, z, propagate::free_space_kernel(), kParams, 5, 0.02);
  double peak = 0.0, err = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const cplx want = kInput.coherence(g.coord(i, j), xd, z, kParams.lambda);
      peak = std::max(peak, std::abs(want));
      err = std::max(err, std::abs(g.at(i, j) - want));
    }
  }
  MESSAGE("max abs error " << err << " peak " << peak);
  CHECK(err < 1e-6 * peak);
  CHECK_THROWS_AS(propagate::propagate_grid(field, xd, 0.0, propagate::free_space_kernel(), kParams, 5, 0.02),
                  DomainError);
}
