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

#include "nmipe/simd/kernels.hpp"

namespace nmipe::simd {
namespace {

void complex_multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void complex_multiply_accumulate(const cplx* a, const cplx* b, cplx* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    acc[i] += cplx{ar * br - ai * bi, ar * bi + ai * br};
  }
}

void scale_by_real(cplx* data, const double* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) data[i] *= s[i];
}

void shifted_radius_squared(double x0, double dx, double sx, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x0 + static_cast<double>(i) * dx + sx;
    out[i] = v * v + c;
  }
}

constexpr KernelTable kScalar{"scalar", complex_multiply, complex_multiply_accumulate, scale_by_real,
                              shifted_radius_squared};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace nmipe::simd
