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

#include "nmipe/solutions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nmipe/errors.hpp"
#include "nmipe/specfun.hpp"

namespace nmipe {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::perturbative: return "perturbative";
    case Method::modified: return "modified";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

Method method_from_string(std::string_view s) {
  if (s == "perturbative") return Method::perturbative;
  if (s == "modified") return Method::modified;
  if (s == "oracle") return Method::oracle;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

namespace solutions {
namespace {

using specfun::aux_integral;
using specfun::bessel_j;
using specfun::bessel_y;

constexpr specfun::BesselOrder kNu{3, 8};
constexpr specfun::BesselOrder kNuM1{-5, 8};

double pow43(double v) { return v * std::cbrt(v); }            // v^(4/3), v >= 0

// z^2 |x|^(2/3) sum_m binom(1/3, m) int_0^1 (1 - tau) (2 e1 tau + e2 tau^2)^m dtau
double s_series(double z, double x_norm2, double e1, double e2) {
  long double total = 0.0L;
  long double binom = 1.0L;  // binom(1/3, m)
  const long double a = 2.0L * e1, b = e2;
  for (int m = 0; m < 80; ++m) {
    if (m > 0) binom *= (1.0L / 3.0L - static_cast<long double>(m - 1)) / static_cast<long double>(m);
    // sum_j C(m, j) a^(m-j) b^j / ((m+j+1)(m+j+2))
    long double inner = 0.0L;
    long double cmj = 1.0L;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) cmj *= static_cast<long double>(m - j + 1) / static_cast<long double>(j);
      const long double n = static_cast<long double>(m + j);
      inner += cmj * std::pow(a, static_cast<long double>(m - j)) * std::pow(b, static_cast<long double>(j)) /
               ((n + 1.0L) * (n + 2.0L));
    }
    const long double term = binom * inner;
    total += term;
    if (m > 2 && std::fabs(term) < 1e-20L * std::fabs(total)) break;
  }
  return static_cast<double>(static_cast<long double>(z) * z * std::cbrt(static_cast<long double>(x_norm2)) * total);
}

KernelValue modified_from_bessel(double pref, double b0, double b1) {
  const double bracket = bessel_y(kNuM1, b0) * bessel_j(kNu, b1) - bessel_j(kNuM1, b0) * bessel_y(kNu, b1);
  return {pref * bracket, Method::modified, true};
}

}  // namespace

double s_integral(double z, const PhasePoint& pt, double lambda) {
  if (!(z >= 0.0)) throw DomainError("s_integral: z must be >= 0");
  if (z == 0.0) return 0.0;
  const double ad = norm(pt.a_d);
  const double xn2 = norm2(pt.x);
  const double big_l = lambda * z * ad;
  if (big_l == 0.0 && xn2 == 0.0) return 0.0;  // trace point
  if (big_l <= kSeriesBranchRatio * std::sqrt(xn2)) {
    const double e1 = lambda * z * dot(pt.a_d, pt.x) / xn2;
    const double e2 = big_l * big_l / xn2;
    return s_series(z, xn2, e1, e2);
  }
  const Vec2 ahat = (1.0 / ad) * pt.a_d;
  const double xpar = dot(pt.x, ahat);
  const double xperp = std::abs(cross(ahat, pt.x));
  const double w1 = big_l + xpar;
  const double p_end = ipe::p_poly(z, pt, lambda);
  const double bracket = w1 * (w1 * aux_integral(xperp, w1) - xpar * aux_integral(xperp, xpar)) -
                         0.375 * (pow43(p_end) - pow43(xn2));
  const double s = z * z / (big_l * big_l) * bracket;
  return s > 0.0 ? s : 0.0;
}

KernelValue perturbative_kernel(double z, const PhasePoint& pt, const TurbulenceParams& params) {
  const double k = 2.0 * std::numbers::pi / params.lambda;
  const double first = k * k * params.cn2 * s_integral(z, pt, params.lambda);
  return {1.0 - first, Method::perturbative, first <= 1.0};
}

KernelValue perturbative_kernel_position(Vec2 u, Vec2 x_d, double z, const TurbulenceParams& params) {
  if (!(z > 0.0)) throw DomainError("perturbative_kernel_position: z must be > 0");
  const NormalizedParams np = turbulence::normalize(params, z);
  const double coef = np.g * np.t * np.t / std::cbrt(params.w0 * params.w0);
  const Vec2 diff = x_d - u;
  const double d2 = norm2(diff);
  double s_scaled;  // s_integral / z^2
  if (d2 <= kSeriesBranchRatio * kSeriesBranchRatio * norm2(u)) {
    const PhasePoint pt{u, (1.0 / (params.lambda * z)) * diff};
    s_scaled = s_integral(z, pt, params.lambda) / (z * z);
  } else {
    const double xd_u = dot(x_d, u);
    const double big_x = xd_u - norm2(u);
    const double big_w = norm2(x_d) - xd_u;
    const double c = std::abs(cross(x_d, u));
    const double d23 = std::cbrt(d2);
    const double bracket = big_w * (big_w * aux_integral(c, big_w) - big_x * aux_integral(c, big_x)) -
                           0.375 * d2 * d23 * (pow43(norm2(x_d)) - pow43(norm2(u)));
    // D^(14/3) = d2^(7/3)
    s_scaled = bracket / (d2 * d2 * d23);
    if (s_scaled < 0.0) s_scaled = 0.0;
  }
  const double first = coef * s_scaled;
  return {1.0 - first, Method::perturbative, first <= 1.0};
}

KernelValue perturbative_kernel_two(double z, const TwoPhotonPoint& pt, const TurbulenceParams& params) {
  const double k = 2.0 * std::numbers::pi / params.lambda;
  const double first = k * k * params.cn2 *
                       (s_integral(z, {pt.x1, pt.a_d}, params.lambda) + s_integral(z, {pt.x2, pt.b_d}, params.lambda));
  return {1.0 - first, Method::perturbative, first <= 1.0};
}

KernelValue two_photon_kernel(Vec2 u1, Vec2 x1d, Vec2 u2, Vec2 x2d, double z, const TurbulenceParams& params) {
  const KernelValue t1 = perturbative_kernel_position(u1, x1d, z, params);
  const KernelValue t2 = perturbative_kernel_position(u2, x2d, z, params);
  const double first = (1.0 - t1.value) + (1.0 - t2.value);
  return {1.0 - first, Method::perturbative, first <= 1.0};
}

double modified_ratio(double alpha, double zeta, double z) {
  if (!(zeta > 0.0)) throw DomainError("modified_ratio: zeta must be > 0");
  if (!(alpha >= 0.0) || !(z >= 0.0)) throw DomainError("modified_ratio: alpha and z must be >= 0");
  if (z == 0.0 || alpha == 0.0) return 1.0;
  const double c = 0.75 * alpha;
  const double s = z + zeta;
  const double b0 = c * pow43(zeta);
  const double b1 = c * pow43(s);
  // (pi b0 / (2 sqrt(zeta))) sqrt(s) = (3 pi / 8) alpha zeta^(5/6) sqrt(s)
  const double pref = 0.375 * std::numbers::pi * alpha * std::pow(zeta, 5.0 / 6.0) * std::sqrt(s);
  return modified_from_bessel(pref, b0, b1).value;
}

ModifiedParams modified_params(const PhasePoint& pt, const TurbulenceParams& params) {
  const double p = norm(pt.a_d);
  const double alpha = 2.0 * std::numbers::pi * std::cbrt(p) * std::sqrt(params.cn2) /
                       std::cbrt(params.lambda * params.lambda);
  const double zeta = dot(pt.a_d, pt.x) / (params.lambda * p * p);
  return {alpha, zeta};
}

KernelValue modified_solution(double z, const PhasePoint& pt, const TurbulenceParams& params) {
  if (!(z >= 0.0)) throw DomainError("modified_solution: z must be >= 0");
  const double p = norm(pt.a_d);
  if (p == 0.0) {
    if (norm2(pt.x) == 0.0) return {1.0, Method::modified, true};
    throw DomainError("modified_solution: a_d = 0 is outside the domain");
  }
  const double d = dot(pt.a_d, pt.x);
  if (!(d > 0.0)) throw DomainError("modified_solution: requires a_d.x > 0");
  const NormalizedParams np = turbulence::normalize(params, z);
  if (z == 0.0 || np.beta == 0.0) return {1.0, Method::modified, true};
  const double w = params.lambda * z * p * p + d;
  const double q = np.beta / std::pow(p, 7.0 / 3.0);
  const double pref = 0.5 * std::numbers::pi * q * std::sqrt(w) * std::pow(d, 5.0 / 6.0);
  return modified_from_bessel(pref, q * pow43(d), q * pow43(w));
}

bool modified_position_admissible(Vec2 u, Vec2 x_d) {
  const double ud = dot(u, x_d);
  return ud > 0.0 && ud - norm2(u) > 0.0;
}

KernelValue modified_kernel_position(Vec2 u, Vec2 x_d, double z, const TurbulenceParams& params) {
  if (!(z > 0.0)) throw DomainError("modified_kernel_position: z must be > 0");
  if (!modified_position_admissible(u, x_d)) {
    throw DomainError("modified_kernel_position: requires u.x_d > |u|^2");
  }
  const NormalizedParams np = turbulence::normalize(params, z);
  if (np.beta == 0.0) return {1.0, Method::modified, true};
  const double ud = dot(u, x_d);
  const double big_x = ud - norm2(u);
  const double q = params.lambda * z * np.beta / std::pow(norm2(u), 7.0 / 6.0);
  const double pref = 0.5 * std::numbers::pi * q * std::sqrt(ud) * std::pow(big_x, 5.0 / 6.0);
  return modified_from_bessel(pref, q * pow43(big_x), q * pow43(ud));
}

}  // namespace solutions
}  // namespace nmipe
