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

#include "nmipe/vec2.hpp"

namespace nmipe {

/// Physical scenario, SI units.
struct TurbulenceParams {
  double cn2 = 0.0;     ///< refractive-index structure constant, m^(-2/3)
  double lambda = 0.0;  ///< wavelength, m
  double w0 = 0.0;      ///< beam waist radius, m

  /// Throws DomainError unless cn2 >= 0, lambda > 0, w0 > 0 (all finite).
  void validate() const;
};

/// Dimensionless scenario quantities at a propagation distance z.
struct NormalizedParams {
  double t = 0.0;       ///< lambda z / (pi w0^2)
  double turb_T = 0.0;  ///< cn2 w0^(2/3)
  double theta = 0.0;   ///< lambda / (pi w0)
  double g = 0.0;       ///< 4 turb_T / theta^4
  double beta = 0.0;    ///< 3 pi sqrt(cn2) / (2 lambda^2), m^(-7/3)
  double k = 0.0;       ///< 2 pi / lambda, m^-1
};

namespace turbulence {

/// Kolmogorov spectrum prefactor.
inline constexpr double kKolmogorov = 0.033;

/// sqrt(pi) Gamma(4/3) / Gamma(11/6).
inline constexpr double kPhi1Ratio = 1.68261852639054511341;

/// Kolmogorov refractive-index spectrum 0.033 (2 pi)^3 cn2 |K|^(-11/3).
double phi_n(double k_mag, double cn2);

/// Marginal spectrum: integral of phi_n(2 pi (a, c)) over c.
double phi_1(double a_mag, double cn2);

/// Structure function cn2 |dx|^(2/3).
double d_n(double delta_mag, double cn2);

/// Q(x) = cn2 |x|^(2/3) / 2.
double q_fn(Vec2 x, double cn2);

/// Markov phase spectrum z k^2 phi_n(2 pi a).
double phase_psd_markov(double a_mag, double z, const TurbulenceParams& params);

NormalizedParams normalize(const TurbulenceParams& params, double z);

/// Second expression for beta, 3 sqrt(g) / (4 pi w0^(7/3)). Only used to
/// cross-check normalize(); z-independent.
double beta_from_g(const NormalizedParams& np, double w0);

}  // namespace turbulence
}  // namespace nmipe
