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

#include <cstdint>
#include <stdexcept>

/// Special functions needed by the closed-form turbulence kernels.
///
/// Coverage is deliberately narrow: real arguments, the fractional Bessel
/// orders that occur in the modified solution, and the single Gauss
/// hypergeometric 2F1(-1/3, 1/2; 3/2; x) that appears in the structure
/// function integral. Everything here is pure and thread-safe.
namespace nmipe::specfun {

/// Exact rational Bessel order. Kept rational so that nu -> nu + 1 and
/// nu -> -nu are exact.
class BesselOrder {
 public:
  constexpr BesselOrder(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) { normalize(); }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }
  constexpr bool is_integer() const noexcept { return den_ == 1; }
  constexpr double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  constexpr long double value_ld() const noexcept {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  constexpr BesselOrder operator-() const noexcept { return {-num_, den_}; }
  constexpr BesselOrder operator+(std::int64_t k) const noexcept { return {num_ + k * den_, den_}; }
  constexpr BesselOrder operator-(std::int64_t k) const noexcept { return {num_ - k * den_, den_}; }
  friend constexpr bool operator==(const BesselOrder&, const BesselOrder&) = default;

 private:
  constexpr void normalize() {
    if (den_ == 0) throw std::invalid_argument("BesselOrder: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    std::int64_t a = num_ < 0 ? -num_ : num_, b = den_;
    while (b != 0) { const std::int64_t t = a % b; a = b; b = t; }
    if (a > 1) { num_ /= a; den_ /= a; }
  }

  std::int64_t num_;
  std::int64_t den_;
};

/// Gamma function. Throws DomainError at the poles (non-positive integers).
double gamma_fn(double x);

/// Bessel function of the first kind J_nu(x), x >= 0.
///
/// Ascending series (evaluated in extended precision) below the crossover
/// argument, Hankel asymptotic expansion above it. Throws DomainError for
/// x < 0, and at x == 0 when nu is a negative non-integer (J diverges there).
double bessel_j(BesselOrder nu, double x);

/// Bessel function of the second kind Y_nu(x), x > 0, non-integer nu only.
/// Computed from J_nu and J_{-nu} via the reflection relation.
double bessel_y(BesselOrder nu, double x);

/// Argument above which the Hankel expansion replaces the ascending series.
inline constexpr double kBesselAsymptoticCrossover = 17.0;

/// 2F1(-1/3, 1/2; 3/2; x) for x <= 0. Throws DomainError for x > 0.
double hyp2f1_kernel(double x);

/// Integral of (A^2 + B^2 xi^2)^(1/3) over xi in [0, 1].
///
/// Equals (A^2)^(1/3) * hyp2f1_kernel(-B^2/A^2) when A > 0. The B-dominant
/// branch uses the 1/x connection formula, so A == 0 is exact (3/5 B^(2/3)).
/// Only A^2 and B^2 enter, so the signs of A and B are irrelevant.
double aux_integral(double a, double b);

}  // namespace nmipe::specfun
