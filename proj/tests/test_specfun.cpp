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
#include <numbers>

#include "nmipe/errors.hpp"
#include "nmipe/oracle.hpp"
#include "nmipe/specfun.hpp"

using namespace nmipe;
using specfun::BesselOrder;

namespace {

bool rel_close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(std::abs(want), 1e-300);
}

struct BesselRef {
  BesselOrder nu;
  double x;
  double j;
  double y;
};

// 40-digit reference values.
const BesselRef kBesselRefs[] = {
    {{3, 8}, 0.01, 0.15425751101555431057, -5.4384425324694159403},
    {{3, 8}, 1.0, 0.7178468538879861629, -0.31893170407431464309},
    {{3, 8}, 5.0, -0.31728218660978140903, -0.16245747383348261909},
    {{3, 8}, 12.0, -0.084253753914818513009, -0.21431989882724010052},
    {{3, 8}, 16.5, -0.16366809477492355693, 0.10857285675194589965},
    {{3, 8}, 17.5, -0.17456616787816994926, -0.076801449446410923963},
    {{3, 8}, 30.0, -0.13686728003092180941, -0.049867018559597983675},
    {{3, 8}, 50.0, -0.0079176073418986210961, -0.11255855629882152929},
    {{-3, 8}, 0.01, 5.0834975382708704125, -1.9386864978822822862},
    {{-3, 8}, 1.0, 0.56936257162154149449, 0.54115413657952481222},
    {{-3, 8}, 17.5, 0.0041517069123007910183, -0.19066875185633691156},
    {{5, 8}, 1.0, 0.61713288969983925166, -0.5315694627156045233},
    {{5, 8}, 16.5, -0.11091491809788706384, 0.16214441684462099548},
    {{5, 8}, 30.0, -0.1455672498095493546, 0.005700014977843205849},
    {{-5, 8}, 0.01, 11.568752385468584119, 4.8359539260525925149},
    {{-5, 8}, 1.0, 0.25493961425524774183, 0.7735792721657011343},
    {{-5, 8}, 5.0, 0.17060134367163509475, -0.31394290430345209504},
    {{-5, 8}, 12.0, 0.2152754891963185575, -0.08205956781164657331},
    {{-5, 8}, 50.0, 0.11258080757476851933, -0.0076364332265247836538},
    {{11, 8}, 0.01, 0.00056094069798917372446, -412.71914386125878804},
    {{11, 8}, 1.0, 0.28344552616074188035, -1.0127780502214371166},
    {{11, 8}, 17.5, -0.085541641465587428886, 0.17075789092729614725},
    {{11, 8}, 50.0, -0.11269957168489699864, 0.0059480548820424607144},
};

}  // namespace

TEST_CASE("bessel order arithmetic is exact") {
  constexpr BesselOrder a(6, 16);
  static_assert(a.num() == 3 && a.den() == 8);
  static_assert((a + 1) == BesselOrder(11, 8));
  static_assert((-a) - 1 == BesselOrder(-11, 8));
  static_assert(BesselOrder(4, 2).is_integer());
  CHECK_THROWS_AS(BesselOrder(1, 0), std::invalid_argument);
}

TEST_CASE("gamma") {
  CHECK(specfun::gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rel_close(specfun::gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-13));
  CHECK(rel_close(specfun::gamma_fn(4.0 / 3.0), 0.89297951156924921122, 1e-13));
  CHECK(rel_close(specfun::gamma_fn(-2.5), -0.94530872048294188123, 1e-12));
  CHECK(rel_close(specfun::gamma_fn(25.3), 1.6227771176708728726e+24, 1e-12));
  for (double x : {0.0, -1.0, -7.0}) CHECK_THROWS_AS(specfun::gamma_fn(x), DomainError);
}

TEST_CASE("bessel functions against reference values") {
  for (const auto& r : kBesselRefs) {
    CAPTURE(r.nu.value());
    CAPTURE(r.x);
    CHECK(rel_close(specfun::bessel_j(r.nu, r.x), r.j, 1e-10));
    CHECK(rel_close(specfun::bessel_y(r.nu, r.x), r.y, 1e-10));
  }
  CHECK(specfun::bessel_j({3, 8}, 0.0) == 0.0);
  CHECK_THROWS_AS(specfun::bessel_j({3, 8}, -1.0), DomainError);
  CHECK_THROWS_AS(specfun::bessel_y({3, 8}, 0.0), DomainError);
}

TEST_CASE("wronskian") {
  const BesselOrder nu(-5, 8);
  for (double x : {0.1, 1.0, 5.0, 11.9, 12.1, 16.99, 17.01, 20.0, 45.0}) {
    const double w = specfun::bessel_j(nu + 1, x) * specfun::bessel_y(nu, x) -
                     specfun::bessel_y(nu + 1, x) * specfun::bessel_j(nu, x);
    CAPTURE(x);
    CHECK(std::abs(w - 2.0 / (std::numbers::pi * x)) < 1e-10);
  }
}

TEST_CASE("bessel ODE residual") {
  for (BesselOrder nu : {BesselOrder(3, 8), BesselOrder(-5, 8), BesselOrder(11, 8)}) {
    const double v = nu.value();
    for (double x : {0.7, 3.0, 9.0, 16.8, 17.3, 33.0}) {
      const double h = 1e-3 * std::min(1.0, x / 5.0);
      for (auto f : {&specfun::bessel_j, &specfun::bessel_y}) {
        const double w0 = f(nu, x), wp = f(nu, x + h), wm = f(nu, x - h);
        const double d2 = (wp - 2 * w0 + wm) / (h * h);
        const double d1 = (wp - wm) / (2 * h);
        const double res = d2 + d1 / x + (1 - v * v / (x * x)) * w0;
        CAPTURE(x);
        CHECK(std::abs(res) < 1e-6);
      }
    }
  }
}

TEST_CASE("hyp2f1 kernel") {
  CHECK(specfun::hyp2f1_kernel(0.0) == 1.0);
  const std::pair<double, double> refs[] = {{-0.5, 1.0508812914694743846}, {-1.0, 1.0948078325781160379},
                                            {-3.0, 1.2328770522460105371}, {-100.0, 2.8842784876891922563},
                                            {-1e6, 60.001357190393494452}, {-1e8, 278.4954710942167754}};
  for (auto [x, want] : refs) {
    CAPTURE(x);
    CHECK(rel_close(specfun::hyp2f1_kernel(x), want, 1e-12));
  }
}

TEST_CASE("aux integral") {
  CHECK(specfun::aux_integral(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(specfun::aux_integral(0.0, 1.0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(specfun::aux_integral(0.0, 0.0) == 0.0);
  CHECK(rel_close(specfun::aux_integral(1.0, 1.0), 1.0948078325781160379, 1e-12));
  CHECK(rel_close(specfun::aux_integral(2.0, 0.5), 1.5982901859308356538, 1e-12));
  CHECK(rel_close(specfun::aux_integral(1e-4, 1e4), 278.49533001679808134, 1e-12));
  CHECK(rel_close(specfun::aux_integral(1e4, 1e-4), 464.1588833612778944, 1e-12));
  CHECK(rel_close(specfun::aux_integral(0.3, 7.0), 2.2168496680444431105, 1e-12));
}

TEST_CASE("aux integral against quadrature on a log grid") {
  oracle::QuadOptions q;
  q.abs_tol = 0.0;
  q.rel_tol = 1e-12;
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      const double A = std::pow(10.0, i), B = std::pow(10.0, j);
      const auto ref = oracle::quad_adaptive_1d(
          [&](double s) { return std::cbrt(A * A + B * B * s * s); }, 0.0, 1.0, q);
      CAPTURE(A);
      CAPTURE(B);
      CHECK(rel_close(specfun::aux_integral(A, B), ref.value, 1e-8));
      // hypergeometric identity
      CHECK(rel_close(specfun::hyp2f1_kernel(-(B * B) / (A * A)) * std::cbrt(A * A), ref.value, 1e-8));
    }
  }
}
