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

#include <string_view>

#include "nmipe/ipe.hpp"
#include "nmipe/turbulence.hpp"
#include "nmipe/vec2.hpp"

namespace nmipe {

enum class Method { perturbative, modified, oracle };

std::string_view to_string(Method m);
/// Throws ConfigError for unknown names.
Method method_from_string(std::string_view s);

/// Turbulence propagation kernel value at one point.
struct KernelValue {
  double value = 1.0;
  Method method = Method::perturbative;
  /// Inside the method's domain of validity. For the perturbative kernel
  /// this is cleared once the first-order term reaches magnitude 1.
  bool valid = true;
};

namespace solutions {

/// int_0^z int_0^z2 p_poly(z1)^(1/3) dz1 dz2.
///
/// Closed form in terms of aux_integral. When lambda z |a_d| <= 0.1 |x| the
/// closed form loses about (|x| / (lambda z |a_d|))^2 digits to cancellation,
/// so a binomial expansion in the small ratio is summed instead; it also
/// covers a_d = 0 exactly.
double s_integral(double z, const PhasePoint& pt, double lambda);

/// Ratio below which s_integral switches to its series branch.
inline constexpr double kSeriesBranchRatio = 0.1;

/// T = 1 - k^2 cn2 s_integral.
KernelValue perturbative_kernel(double z, const PhasePoint& pt, const TurbulenceParams& params);

/// Position-domain form: the same kernel under x = u, a_d = (x_d - u)/(lambda z),
/// written in terms of g, t and w0. Throws DomainError for z <= 0.
KernelValue perturbative_kernel_position(Vec2 u, Vec2 x_d, double z, const TurbulenceParams& params);

/// Two-photon Fourier-domain kernel 1 - k^2 cn2 (S_1 + S_2).
KernelValue perturbative_kernel_two(double z, const TwoPhotonPoint& pt, const TurbulenceParams& params);

/// Two-photon position-domain kernel 1 + g W_1 + g W_2. Throws DomainError for z <= 0.
KernelValue two_photon_kernel(Vec2 u1, Vec2 x1d, Vec2 u2, Vec2 x2d, double z, const TurbulenceParams& params);

/// Solution of rho'' = -alpha^2 (z + zeta)^(2/3) rho, rho(0) = 1, rho'(0) = 0,
/// from the Bessel functions of order 3/8 and -5/8. Requires zeta > 0,
/// alpha >= 0, z >= 0.
double modified_ratio(double alpha, double zeta, double z);

/// alpha = 2 pi |a_d|^(1/3) sqrt(cn2) / lambda^(2/3) and
/// zeta = (a_d.x) / (lambda |a_d|^2) for a phase point.
struct ModifiedParams {
  double alpha;
  double zeta;
};
ModifiedParams modified_params(const PhasePoint& pt, const TurbulenceParams& params);

/// Modified-equation kernel at (x, a_d), evaluated with beta from the
/// normalized parameters. Throws DomainError when a_d = 0 or zeta <= 0,
/// except at the trace point x = 0, a_d = 0 where the kernel is 1.
KernelValue modified_solution(double z, const PhasePoint& pt, const TurbulenceParams& params);

/// Admissible region of the position-domain modified kernel:
/// u.x_d > 0 and u.x_d - |u|^2 > 0.
bool modified_position_admissible(Vec2 u, Vec2 x_d);

/// Position-domain modified kernel under x = x_d - u, a_d = u/(lambda z).
/// Throws DomainError for z <= 0 or outside the admissible region.
KernelValue modified_kernel_position(Vec2 u, Vec2 x_d, double z, const TurbulenceParams& params);

}  // namespace solutions
}  // namespace nmipe
