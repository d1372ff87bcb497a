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

#include "nmipe/grid.hpp"
#include "nmipe/turbulence.hpp"
#include "nmipe/vec2.hpp"

namespace nmipe {

/// Evaluation point (x, a_d) of the sum/difference-coordinate state H.
struct PhasePoint {
  Vec2 x;    ///< m
  Vec2 a_d;  ///< 1/m

  /// Throws DomainError on non-finite components.
  void validate() const;
  PhasePoint operator-() const { return {-x, -a_d}; }
};

/// Two-photon evaluation point: one (x, a_d) pair per photon.
struct TwoPhotonPoint {
  Vec2 x1;
  Vec2 a_d;
  Vec2 x2;
  Vec2 b_d;

  void validate() const;
};

namespace ipe {

/// |lambda z a_d + x|^2.
double p_poly(double z, const PhasePoint& pt, double lambda);

/// Single-photon coefficient K(z) = -k^2 cn2 p_poly^(1/3).
double k_single(double z, const PhasePoint& pt, const TurbulenceParams& params);

/// Two-photon coefficient: sum of the single-photon coefficients of both arms.
double k_two(double z, const TwoPhotonPoint& pt, const TurbulenceParams& params);

/// Local right-hand side -2 k^2 Q(lambda z a_d + x) H(x) on a position grid.
GridState ipe_rhs_local(const GridState& h_grid, Vec2 a_d, double z, const TurbulenceParams& params);

/// Convolution right-hand side on a frequency grid over a:
///   2 k^2 int [S(a - u) exp(-i 2 pi lambda z a_d.u) - S(a)] phi_1(u) d^2u.
///
/// u is discretised on the lattice of the input grid. Each lattice cell is
/// integrated exactly against phi_1 and the phase (product integration),
/// with S expanded to second order about the cell centre using fourth-order
/// finite differences. The cell containing u = 0 is handled by its analytic
/// moments; the part of the u-plane beyond the lattice contributes only
/// through the S(a) term, integrated analytically. S is taken to vanish
/// outside the grid.
///
/// Throws GridMismatch if the grid is not a valid frequency-domain grid.
GridState ipe_rhs_fourier(const GridState& s_grid, Vec2 a_d, double z, const TurbulenceParams& params);

}  // namespace ipe
}  // namespace nmipe
