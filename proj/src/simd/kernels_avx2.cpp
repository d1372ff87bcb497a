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

#include <immintrin.h>

#include "nmipe/simd/kernels.hpp"

namespace nmipe::simd {
namespace avx2 {

// Two complex doubles per __m256d: [r0 i0 r1 i1].
static inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);         // [br0 br0 br1 br1]
  const __m256d bi = _mm256_permute_pd(b, 0xF);    // [bi0 bi0 bi1 bi1]
  const __m256d as = _mm256_permute_pd(a, 0x5);    // [ai0 ar0 ai1 ar1]
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

static void complex_multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(po + 2 * i, cmul(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i)));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

static void complex_multiply_accumulate(const cplx* a, const cplx* b, cplx* acc, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* pc = reinterpret_cast<double*>(acc);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d prod = cmul(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    _mm256_storeu_pd(pc + 2 * i, _mm256_add_pd(_mm256_loadu_pd(pc + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    acc[i] += cplx{ar * br - ai * bi, ar * bi + ai * br};
  }
}

static void scale_by_real(cplx* data, const double* s, std::size_t n) {
  double* pd = reinterpret_cast<double*>(data);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d s2 = _mm_loadu_pd(s + i);
    // [s0 s0 s1 s1]
    const __m256d sv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(s2), 0x50);
    _mm256_storeu_pd(pd + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(pd + 2 * i), sv));
  }
  for (; i < n; ++i) data[i] *= s[i];
}

static void shifted_radius_squared(double x0, double dx, double sx, double c, double* out, std::size_t n) {
  const __m256d step = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d vdx = _mm256_set1_pd(dx);
  const __m256d base = _mm256_set1_pd(x0 + sx);
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), step);
    const __m256d v = _mm256_fmadd_pd(idx, vdx, base);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(v, v, vc));
  }
  for (; i < n; ++i) {
    const double v = x0 + static_cast<double>(i) * dx + sx;
    out[i] = v * v + c;
  }
}

}  // namespace avx2

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", avx2::complex_multiply, avx2::complex_multiply_accumulate,
                                 avx2::scale_by_real, avx2::shifted_radius_squared};
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
  return &table;
}

}  // namespace nmipe::simd
