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

#include <arm_neon.h>

#include "nmipe/simd/kernels.hpp"

namespace nmipe::simd {
namespace neon {

// One complex double per float64x2_t.
static inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
  const float64x2_t ar = vdupq_laneq_f64(a, 0);
  const float64x2_t ai = vdupq_laneq_f64(a, 1);
  const float64x2_t bswap = vextq_f64(b, b, 1);                        // [bi br]
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(ar, b), vmulq_f64(ai, bswap), sign);      // [ar br - ai bi, ar bi + ai br]
}

static void complex_multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < n; ++i) vst1q_f64(po + 2 * i, cmul(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i)));
}

static void complex_multiply_accumulate(const cplx* a, const cplx* b, cplx* acc, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* pc = reinterpret_cast<double*>(acc);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t p = cmul(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i));
    vst1q_f64(pc + 2 * i, vaddq_f64(vld1q_f64(pc + 2 * i), p));
  }
}

static void scale_by_real(cplx* data, const double* s, std::size_t n) {
  double* pd = reinterpret_cast<double*>(data);
  for (std::size_t i = 0; i < n; ++i) vst1q_f64(pd + 2 * i, vmulq_n_f64(vld1q_f64(pd + 2 * i), s[i]));
}

static void shifted_radius_squared(double x0, double dx, double sx, double c, double* out, std::size_t n) {
  const float64x2_t step = {0.0, 1.0};
  const float64x2_t vdx = vdupq_n_f64(dx);
  const float64x2_t base = vdupq_n_f64(x0 + sx);
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t idx = vaddq_f64(vdupq_n_f64(static_cast<double>(i)), step);
    const float64x2_t v = vfmaq_f64(base, idx, vdx);
    vst1q_f64(out + i, vfmaq_f64(vc, v, v));
  }
  for (; i < n; ++i) {
    const double v = x0 + static_cast<double>(i) * dx + sx;
    out[i] = v * v + c;
  }
}

}  // namespace neon

const KernelTable* neon_kernels() {
  static const KernelTable table{"neon", neon::complex_multiply, neon::complex_multiply_accumulate,
                                 neon::scale_by_real, neon::shifted_radius_squared};
  return &table;
}

}  // namespace nmipe::simd
