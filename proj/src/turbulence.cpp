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

#include "nmipe/turbulence.hpp"

#include <cmath>
#include <numbers>

#include "nmipe/errors.hpp"

namespace nmipe {

void TurbulenceParams::validate() const {
  if (!(std::isfinite(cn2) && cn2 >= 0.0)) throw DomainError("cn2 must be finite and >= 0");
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw DomainError("lambda must be finite and > 0");
  if (!(std::isfinite(w0) && w0 > 0.0)) throw DomainError("w0 must be finite and > 0");
}

namespace turbulence {
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double phi_n(double k_mag, double cn2) {
  if (!(k_mag > 0.0)) throw DomainError("phi_n: |K| must be > 0");
  return kKolmogorov * kTwoPi * kTwoPi * kTwoPi * cn2 * std::pow(k_mag, -11.0 / 3.0);
}

double phi_1(double a_mag, double cn2) {
  if (!(a_mag > 0.0)) throw DomainError("phi_1: |a| must be > 0");
  return kKolmogorov * std::pow(kTwoPi, -2.0 / 3.0) * cn2 * std::pow(a_mag, -8.0 / 3.0) * kPhi1Ratio;
}

double d_n(double delta_mag, double cn2) { return cn2 * std::cbrt(delta_mag * delta_mag); }

double q_fn(Vec2 x, double cn2) { return 0.5 * cn2 * std::cbrt(norm2(x)); }

double phase_psd_markov(double a_mag, double z, const TurbulenceParams& params) {
  const double k = kTwoPi / params.lambda;
  return z * k * k * phi_n(kTwoPi * a_mag, params.cn2);
}

NormalizedParams normalize(const TurbulenceParams& params, double z) {
  params.validate();
  if (!(z >= 0.0)) throw DomainError("normalize: z must be >= 0");
  const double pi = std::numbers::pi;
  NormalizedParams np;
  np.t = params.lambda * z / (pi * params.w0 * params.w0);
  np.turb_T = params.cn2 * std::cbrt(params.w0 * params.w0);
  np.theta = params.lambda / (pi * params.w0);
  const double th2 = np.theta * np.theta;
  np.g = 4.0 * np.turb_T / (th2 * th2);
  np.beta = 3.0 * pi * std::sqrt(params.cn2) / (2.0 * params.lambda * params.lambda);
  np.k = kTwoPi / params.lambda;
  return np;
}

double beta_from_g(const NormalizedParams& np, double w0) {
  return 3.0 * std::sqrt(np.g) / (4.0 * std::numbers::pi * std::pow(w0, 7.0 / 3.0));
}

}  // namespace turbulence
}  // namespace nmipe
