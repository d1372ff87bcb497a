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

#include "nmipe/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "nmipe/errors.hpp"
#include "nmipe/simd/kernels.hpp"

namespace nmipe {
namespace {

using cplx = std::complex<double>;

// The FFTW planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void fft2d(std::vector<cplx>& data, std::size_t nx, std::size_t ny, int sign) {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(nx), static_cast<int>(ny), p, p,
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

cplx cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

}  // namespace

GridState::GridState(std::size_t nx_, std::size_t ny_, Vec2 origin_, Vec2 spacing_, DomainTag tag)
    : nx(nx_), ny(ny_), origin(origin_), spacing(spacing_), domain_tag(tag), samples(nx_ * ny_) {}

GridState GridState::centered(std::size_t n, double spacing, DomainTag tag) {
  const double o = -static_cast<double>(n / 2) * spacing;
  return GridState(n, n, {o, o}, {spacing, spacing}, tag);
}

void GridState::validate() const {
  if (!(spacing.x > 0.0 && spacing.y > 0.0)) throw GridMismatch("grid spacing must be positive");
  if (nx == 0 || ny == 0 || samples.size() != nx * ny) throw GridMismatch("grid sample count does not match shape");
  if (!is_finite(origin)) throw GridMismatch("grid origin must be finite");
  for (const auto& s : samples) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw GridMismatch("grid contains non-finite samples");
  }
}

bool GridState::same_geometry(const GridState& o) const {
  return nx == o.nx && ny == o.ny && origin == o.origin && spacing == o.spacing && domain_tag == o.domain_tag;
}

GridState fourier_transform(const GridState& in, Vec2 out_origin, int sign) {
  in.validate();
  if (sign != -1 && sign != 1) throw GridMismatch("fourier_transform: sign must be -1 or +1");
  const double s = static_cast<double>(sign) * 2.0 * std::numbers::pi;
  const Vec2 d_out{1.0 / (static_cast<double>(in.nx) * in.spacing.x), 1.0 / (static_cast<double>(in.ny) * in.spacing.y)};
  GridState out(in.nx, in.ny, out_origin, d_out,
                in.domain_tag == DomainTag::position ? DomainTag::frequency : DomainTag::position);

  // exp(s i (a0 + n da)(x0 + j dx)) = exp(s i a0 x_j) exp(s i n da x0) exp(s i n j / N)
  std::vector<cplx> pre_x(in.nx), pre_y(in.ny), post_x(in.nx), post_y(in.ny);
  for (std::size_t i = 0; i < in.nx; ++i) {
    pre_x[i] = cis(s * static_cast<double>(i) * in.spacing.x * out_origin.x);
    post_x[i] = cis(s * in.origin.x * (out_origin.x + static_cast<double>(i) * d_out.x));
  }
  for (std::size_t j = 0; j < in.ny; ++j) {
    pre_y[j] = cis(s * static_cast<double>(j) * in.spacing.y * out_origin.y);
    post_y[j] = cis(s * in.origin.y * (out_origin.y + static_cast<double>(j) * d_out.y));
  }
  std::vector<cplx> buf(in.samples);
  std::vector<cplx> row(in.ny);
  const auto& k = simd::active();
  for (std::size_t i = 0; i < in.nx; ++i) {
    for (std::size_t j = 0; j < in.ny; ++j) row[j] = pre_x[i] * pre_y[j];
    k.complex_multiply(&buf[i * in.ny], row.data(), &buf[i * in.ny], in.ny);
  }
  fft2d(buf, in.nx, in.ny, sign);
  const double cell = in.spacing.x * in.spacing.y;
  for (std::size_t i = 0; i < in.nx; ++i) {
    for (std::size_t j = 0; j < in.ny; ++j) row[j] = cell * post_x[i] * post_y[j];
    k.complex_multiply(&buf[i * in.ny], row.data(), &out.samples[i * in.ny], in.ny);
  }
  return out;
}

GridState fourier_transform(const GridState& in, int sign) {
  const Vec2 d_out{1.0 / (static_cast<double>(in.nx) * in.spacing.x), 1.0 / (static_cast<double>(in.ny) * in.spacing.y)};
  const Vec2 o{-static_cast<double>(in.nx / 2) * d_out.x, -static_cast<double>(in.ny / 2) * d_out.y};
  return fourier_transform(in, o, sign);
}

std::vector<cplx> convolve_centered(const std::vector<cplx>& a, std::size_t nx, std::size_t ny,
                                    const std::vector<cplx>& kernel) {
  return convolve_centered_sum({{&a, &kernel}}, nx, ny);
}

std::vector<cplx> convolve_centered_sum(const std::vector<ConvolutionTerm>& terms, std::size_t nx, std::size_t ny) {
  const std::size_t kx = 2 * nx - 1, ky = 2 * ny - 1;
  const std::size_t mx = 3 * nx, my = 3 * ny;
  std::vector<cplx> acc(mx * my), pa(mx * my), pk(mx * my);
  const auto& simd_k = simd::active();
  for (const auto& t : terms) {
    if (t.a->size() != nx * ny || t.kernel->size() != kx * ky) throw GridMismatch("convolve_centered: size mismatch");
    std::fill(pa.begin(), pa.end(), cplx{});
    std::fill(pk.begin(), pk.end(), cplx{});
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) pa[i * my + j] = (*t.a)[i * ny + j];
    for (std::size_t i = 0; i < kx; ++i)
      for (std::size_t j = 0; j < ky; ++j) pk[i * my + j] = (*t.kernel)[i * ky + j];
    fft2d(pa, mx, my, -1);
    fft2d(pk, mx, my, -1);
    simd_k.complex_multiply_accumulate(pa.data(), pk.data(), acc.data(), acc.size());
  }
  fft2d(acc, mx, my, +1);
  const double inv = 1.0 / static_cast<double>(mx * my);
  std::vector<cplx> out(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) out[i * ny + j] = acc[(i + nx - 1) * my + (j + ny - 1)] * inv;
  return out;
}

}  // namespace nmipe
