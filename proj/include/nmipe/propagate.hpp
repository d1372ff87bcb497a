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

#include <complex>
#include <functional>
#include <string>

#include "nmipe/grid.hpp"
#include "nmipe/solutions.hpp"
#include "nmipe/turbulence.hpp"
#include "nmipe/vec2.hpp"

namespace nmipe {

/// Pure Gaussian input exp(-|x|^2 / w0^2), scaled so that the trace of the
/// density function at z = 0 equals `normalization`.
struct GaussianInput {
  double w0 = 0.0;
  double normalization = 1.0;

  void validate() const;

  /// Free-space propagated field amplitude at x.
  std::complex<double> field(Vec2 x, double z, double lambda) const;

  /// Free-space mutual coherence psi(x_s + x_d/2) conj(psi(x_s - x_d/2)).
  std::complex<double> coherence(Vec2 x_s, Vec2 x_d, double z, double lambda) const;
};

enum class FrameDirection { add, remove };

namespace propagate {

/// Multiplies every sample by exp(+- i pi lambda z |a|^2) (+ for add).
/// Throws GridMismatch for a position-domain grid.
GridState rotating_frame_phase(const GridState& grid, double z, double lambda, FrameDirection direction);

/// A position-domain turbulence kernel T(u, x_d, z). `admissible` may be
/// empty (everywhere admissible). When `disk_support` is set the admissible
/// set is the open disk whose diameter is the segment from 0 to x_d, and the
/// integrator splits at its boundary.
struct PositionKernel {
  std::string name;
  std::function<double(Vec2 u, Vec2 x_d, double z)> value;
  std::function<bool(Vec2 u, Vec2 x_d)> admissible;
  bool disk_support = false;
};

PositionKernel free_space_kernel();
PositionKernel perturbative_position_kernel(const TurbulenceParams& params);
/// Modified kernel expressed in the same u variable as the perturbative one:
/// T(u, x_d) = modified_kernel_position(x_d - u, x_d). Admissible where
/// (x_d - u).u > 0.
PositionKernel modified_position_kernel(const TurbulenceParams& params);

struct CoherenceValue {
  std::complex<double> value;
  /// |A|-weighted fraction of the integration measure where the kernel was
  /// inadmissible and zero-weighted.
  double excluded_fraction = 0.0;
  double error_estimate = 0.0;
};

struct AssemblyOptions {
  double rel_tol = 1e-10;
  /// Truncation radius in units of the effective Gaussian width.
  double radius_sigmas = 6.0;
  int max_doublings = 3;
};

/// G(x_s, x_d, z) for a Gaussian input. The integral over a is done in closed
/// form, leaving int A(u) T(u, x_d, z) d^2u with
///   A(u) = norm / (lambda z)^2 exp(-|u|^2 / (2 w0^2)) exp(-|x_d - u|^2 / (2 sigma^2))
///          exp(-i 2 pi x_s.(x_d - u) / (lambda z)),  sigma = lambda z / (pi w0),
/// integrated adaptively over a square of radius_sigmas effective widths,
/// doubled until two radii agree. Throws DomainError for z <= 0 and
/// NonConvergenceError if the radius check never settles.
CoherenceValue to_position_domain(const PositionKernel& kernel, const GaussianInput& input, Vec2 x_s, Vec2 x_d,
                                  double z, const TurbulenceParams& params, const AssemblyOptions& opt = {});

/// G at x_s = (x1 + x2)/2, x_d = x1 - x2.
CoherenceValue observable_coherence(Vec2 x1, Vec2 x2, double z, const PositionKernel& kernel,
                                    const GaussianInput& input, const TurbulenceParams& params,
                                    const AssemblyOptions& opt = {});

/// Grid route for an arbitrary pure input field psi sampled on a position
/// grid: G(x_s, x_d, z) on an x_s grid for one x_d, by direct summation over
/// the lattice of differences u = x1 - x2. O(n^4) work; meant for n <= 64.
/// The kernel must be admissible everywhere or carry an admissible predicate.
GridState propagate_grid(const GridState& field, Vec2 x_d, double z, const PositionKernel& kernel,
                         const TurbulenceParams& params, std::size_t out_n, double out_spacing);

}  // namespace propagate
}  // namespace nmipe
