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
#include <cstddef>
#include <string_view>

/// Element-wise kernels used by the grid pipelines. Each has a scalar
/// reference plus optional AVX2 / NEON variants; the variant is picked once
/// at startup from CPU features and may be forced with NMIPE_SIMD=scalar.
namespace nmipe::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  /// out[i] = a[i] * b[i]
  void (*complex_multiply)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  /// acc[i] += a[i] * b[i]
  void (*complex_multiply_accumulate)(const cplx* a, const cplx* b, cplx* acc, std::size_t n);
  /// data[i] *= s[i]
  void (*scale_by_real)(cplx* data, const double* s, std::size_t n);
  /// out[i] = (x0 + i dx + sx)^2 + c ,  one grid row of |a + shift|^2 with c
  /// the precomputed squared y term
  void (*shifted_radius_squared)(double x0, double dx, double sx, double c, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// The table selected for this process.
const KernelTable& active();

}  // namespace nmipe::simd
