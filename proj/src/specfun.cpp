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

#include "nmipe/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "nmipe/errors.hpp"

namespace nmipe::specfun {
namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  // valid for x >= 0.5
  const double xm1 = x - 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (xm1 + static_cast<double>(i));
  const double t = xm1 + 7.5;
  // split the power to keep t^(x-0.5) finite for x up to ~170
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * acc;
}

// sin(pi x) with exact reduction of x modulo 2.
double sin_pi(double x) {
  const double r = x - 2.0 * std::nearbyint(0.5 * x);
  return std::sin(std::numbers::pi * r);
}

long double j_ascending(long double nu, long double x) {
  const long double q = -0.25L * x * x;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 0; k < 500; ++k) {
    term *= q / (static_cast<long double>(k + 1) * (static_cast<long double>(k + 1) + nu));
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum) && static_cast<long double>(k) > 0.5L * x) break;
  }
  const long double pref = std::pow(0.5L * x, nu) / static_cast<long double>(gamma_fn(static_cast<double>(nu + 1.0L)));
  return pref * sum;
}

// Hankel expansion: J = sqrt(2/(pi x)) (P cos w - Q sin w), w = x - (nu/2 + 1/4) pi.
long double j_asymptotic(long double nu, long double x) {
  const long double mu = 4.0L * nu * nu;
  long double p = 0.0L, q = 0.0L;
  long double a = 1.0L;
  long double prev = INFINITY;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const long double odd = static_cast<long double>(2 * k - 1);
      a *= (mu - odd * odd) / (static_cast<long double>(k) * 8.0L * x);
    }
    const long double mag = std::fabs(a);
    if (mag > prev) break;  // asymptotic series started to diverge
    const long double sgn = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) p += sgn * a; else q += sgn * a;
    if (mag < 1e-21L) break;
    prev = mag;
  }
  const long double w = x - (0.5L * nu + 0.25L) * kPiL;
  return std::sqrt(2.0L / (kPiL * x)) * (p * std::cos(w) - q * std::sin(w));
}

long double j_unchecked(long double nu, long double x) {
  return x < static_cast<long double>(kBesselAsymptoticCrossover) ? j_ascending(nu, x) : j_asymptotic(nu, x);
}

long double gauss_series(long double a, long double b, long double c, long double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int n = 0; n < 4000; ++n) {
    const long double nn = static_cast<long double>(n);
    term *= (a + nn) * (b + nn) / ((c + nn) * (nn + 1.0L)) * x;
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return sum;
}

// Gamma(3/2)Gamma(-5/6) / (Gamma(-1/3)Gamma(1)) = sqrt(pi) Gamma(1/6) / (5 Gamma(2/3))
constexpr long double kConnectionB = 1.457190388732548967092L;

// 2F1(-1/3,1/2;3/2;x) for x < -2 via the 1/x connection formula; the second
// series terminates since one of its upper parameters is zero.
long double hyp_large(long double mx /* = -x > 2 */) {
  const long double inv = -1.0L / mx;
  return 0.6L * std::cbrt(mx) * gauss_series(-1.0L / 3.0L, -5.0L / 6.0L, 1.0L / 6.0L, inv) +
         kConnectionB / std::sqrt(mx);
}

}  // namespace

double gamma_fn(double x) {
  if (std::isnan(x)) return x;
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma_fn: pole at non-positive integer");
  if (x < 0.5) return std::numbers::pi / (sin_pi(x) * lanczos_gamma(1.0 - x));
  return lanczos_gamma(x);
}

double bessel_j(BesselOrder nu, double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be >= 0");
  if (nu.is_integer() && nu.num() < 0) {
    const double v = bessel_j(-nu, x);
    return (nu.num() % 2 == 0) ? v : -v;
  }
  if (x == 0.0) {
    if (nu.num() == 0) return 1.0;
    if (nu.num() > 0) return 0.0;
    throw DomainError("bessel_j: J_nu(0) diverges for negative non-integer order");
  }
  return static_cast<double>(j_unchecked(nu.value_ld(), static_cast<long double>(x)));
}

double bessel_y(BesselOrder nu, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_y: argument must be > 0");
  if (nu.is_integer()) throw DomainError("bessel_y: integer orders are not supported");
  const long double v = nu.value_ld();
  const long double xl = static_cast<long double>(x);
  const long double jp = j_unchecked(v, xl);
  const long double jm = j_unchecked(-v, xl);
  return static_cast<double>((jp * std::cos(v * kPiL) - jm) / std::sin(v * kPiL));
}

double hyp2f1_kernel(double x) {
  if (!(x <= 0.0)) throw DomainError("hyp2f1_kernel: argument must be <= 0");
  const long double xl = x;
  if (xl >= -0.5L) return static_cast<double>(gauss_series(-1.0L / 3.0L, 0.5L, 1.5L, xl));
  if (xl >= -2.0L) {
    // Pfaff: (1-x)^(1/3) 2F1(-1/3, 1; 3/2; x/(x-1)), argument in (1/3, 2/3]
    return static_cast<double>(std::cbrt(1.0L - xl) * gauss_series(-1.0L / 3.0L, 1.0L, 1.5L, xl / (xl - 1.0L)));
  }
  return static_cast<double>(hyp_large(-xl));
}

double aux_integral(double a, double b) {
  const long double A = std::fabs(static_cast<long double>(a));
  const long double B = std::fabs(static_cast<long double>(b));
  if (B == 0.0L) return static_cast<double>(std::cbrt(A * A));
  if (A == 0.0L) return static_cast<double>(0.6L * std::cbrt(B * B));
  const long double r = B / A;
  if (r <= std::sqrt(2.0L)) return static_cast<double>(std::cbrt(A * A)) * hyp2f1_kernel(static_cast<double>(-r * r));
  // B-dominant: (3/5) B^(2/3) 2F1(-1/3,-5/6;1/6;-A^2/B^2) + C A^(5/3)/B
  const long double s = A / B;
  return static_cast<double>(0.6L * std::cbrt(B * B) * gauss_series(-1.0L / 3.0L, -5.0L / 6.0L, 1.0L / 6.0L, -s * s) +
                             kConnectionB * std::cbrt(A * A) * s);
}

}  // namespace nmipe::specfun
