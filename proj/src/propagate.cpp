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

#include "nmipe/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "internal/parallel.hpp"
#include "nmipe/errors.hpp"
#include "nmipe/oracle.hpp"
#include "nmipe/simd/kernels.hpp"

namespace nmipe {

using cplx = std::complex<double>;

void GaussianInput::validate() const {
  if (!(std::isfinite(w0) && w0 > 0.0)) throw DomainError("GaussianInput: w0 must be > 0");
  if (!(std::isfinite(normalization) && normalization >= 0.0)) {
    throw DomainError("GaussianInput: normalization must be >= 0");
  }
}

cplx GaussianInput::field(Vec2 x, double z, double lambda) const {
  const double t = lambda * z / (std::numbers::pi * w0 * w0);
  const cplx q{1.0, -t};
  const double amp = std::sqrt(2.0 * normalization / (std::numbers::pi * w0 * w0));
  return amp * std::exp(-norm2(x) / (w0 * w0 * q)) / q;
}

cplx GaussianInput::coherence(Vec2 x_s, Vec2 x_d, double z, double lambda) const {
  return field(x_s + 0.5 * x_d, z, lambda) * std::conj(field(x_s - 0.5 * x_d, z, lambda));
}

namespace propagate {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sorted breakpoints of [lo, hi] including the ends.
std::vector<double> pieces(double lo, double hi, std::initializer_list<double> cuts) {
  std::vector<double> p{lo};
  for (double c : cuts) {
    if (c > lo && c < hi) p.push_back(c);
  }
  p.push_back(hi);
  std::sort(p.begin(), p.end());
  return p;
}

template <class T, class F>
oracle::QuadResult<T> integrate_pieces(F&& f, const std::vector<double>& p, double abs_tol) {
  oracle::QuadResult<T> total;
  const double per = abs_tol / static_cast<double>(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    auto r = oracle::quad_adaptive_1d<T>(f, p[i], p[i + 1], {per, 0.0, 2000});
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  return total;
}

// Nested integral over the square [c - r, c + r]^2, split at the support disk.
template <class T, class F>
oracle::QuadResult<T> integrate_square(F&& f, Vec2 c, double r, bool disk, Vec2 x_d, double abs_tol) {
  const Vec2 dc = 0.5 * x_d;
  const double rad = 0.5 * norm(x_d);
  const double width = 2.0 * r;
  auto inner = [&](double ux) -> T {
    std::vector<double> p;
    if (disk && std::abs(ux - dc.x) < rad) {
      const double h = std::sqrt(rad * rad - (ux - dc.x) * (ux - dc.x));
      p = pieces(c.y - r, c.y + r, {dc.y - h, dc.y + h});
    } else {
      p = pieces(c.y - r, c.y + r, {});
    }
    return integrate_pieces<T>([&](double uy) { return f(Vec2{ux, uy}); }, p, 0.5 * abs_tol / width).value;
  };
  const auto outer = disk ? pieces(c.x - r, c.x + r, {dc.x - rad, dc.x + rad}) : pieces(c.x - r, c.x + r, {});
  auto res = integrate_pieces<T>(inner, outer, 0.5 * abs_tol);
  res.error += 0.5 * abs_tol;
  return res;
}

}  // namespace

GridState rotating_frame_phase(const GridState& grid, double z, double lambda, FrameDirection direction) {
  grid.validate();
  if (grid.domain_tag != DomainTag::frequency) throw GridMismatch("rotating_frame_phase: expected a frequency grid");
  GridState out = grid;
  if (z == 0.0) return out;
  const double sign = direction == FrameDirection::add ? 1.0 : -1.0;
  const double c = sign * std::numbers::pi * lambda * z;
  std::vector<double> r2(grid.ny);
  std::vector<cplx> ph(grid.ny);
  const auto& k = simd::active();
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double ax = grid.origin.x + static_cast<double>(i) * grid.spacing.x;
    k.shifted_radius_squared(grid.origin.y, grid.spacing.y, 0.0, ax * ax, r2.data(), grid.ny);
    for (std::size_t j = 0; j < grid.ny; ++j) ph[j] = std::polar(1.0, c * r2[j]);
    k.complex_multiply(&out.samples[i * grid.ny], ph.data(), &out.samples[i * grid.ny], grid.ny);
  }
  return out;
}

PositionKernel free_space_kernel() {
  return {"free_space", [](Vec2, Vec2, double) { return 1.0; }, {}, false};
}

PositionKernel perturbative_position_kernel(const TurbulenceParams& params) {
  return {"perturbative",
          [params](Vec2 u, Vec2 x_d, double z) {
            return solutions::perturbative_kernel_position(u, x_d, z, params).value;
          },
          {},
          false};
}

PositionKernel modified_position_kernel(const TurbulenceParams& params) {
  return {"modified",
          [params](Vec2 u, Vec2 x_d, double z) {
            return solutions::modified_kernel_position(x_d - u, x_d, z, params).value;
          },
          [](Vec2 u, Vec2 x_d) { return solutions::modified_position_admissible(x_d - u, x_d); },
          true};
}

CoherenceValue to_position_domain(const PositionKernel& kernel, const GaussianInput& input, Vec2 x_s, Vec2 x_d,
                                  double z, const TurbulenceParams& params, const AssemblyOptions& opt) {
  input.validate();
  params.validate();
  if (!(z > 0.0)) throw DomainError("to_position_domain: z must be > 0");
  if (!is_finite(x_s) || !is_finite(x_d)) throw DomainError("to_position_domain: non-finite coordinates");

  const double lz = params.lambda * z;
  const double w0 = input.w0;
  const double sigma = lz / (std::numbers::pi * w0);
  const double prec = 1.0 / (w0 * w0) + 1.0 / (sigma * sigma);
  const double s_eff = 1.0 / std::sqrt(prec);
  const Vec2 centre = (1.0 / (sigma * sigma * prec)) * x_d;
  const double pref = input.normalization / (lz * lz);
  // int |A| d^2u over the plane
  const double scale = pref * 2.0 * std::numbers::pi * s_eff * s_eff *
                       std::exp(-norm2(x_d) / (2.0 * (w0 * w0 + sigma * sigma)));
  CoherenceValue out;
  if (scale == 0.0) return out;
  // Kernel magnitude over the bulk of the weight, so the tolerance tracks |A T|.
  double t_scale = 0.0;
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      const Vec2 u = centre + s_eff * Vec2{static_cast<double>(i), static_cast<double>(j)};
      if (kernel.admissible && !kernel.admissible(u, x_d)) continue;
      t_scale = std::max(t_scale, std::abs(kernel.value(u, x_d, z)));
    }
  }
  const double abs_tol = opt.rel_tol * scale * std::max(1.0, t_scale);

  auto weight = [&](Vec2 u) {
    return pref * std::exp(-norm2(u) / (2.0 * w0 * w0) - norm2(x_d - u) / (2.0 * sigma * sigma));
  };
  auto integrand = [&](Vec2 u) -> cplx {
    if (kernel.admissible && !kernel.admissible(u, x_d)) return {};
    const double phase = -kTwoPi * dot(x_s, x_d - u) / lz;
    return weight(u) * kernel.value(u, x_d, z) * std::polar(1.0, phase);
  };

  double r = opt.radius_sigmas * s_eff;
  auto prev = integrate_square<cplx>(integrand, centre, r, kernel.disk_support, x_d, abs_tol);
  bool settled = false;
  for (int k = 0; k < opt.max_doublings; ++k) {
    r *= 2.0;
    auto next = integrate_square<cplx>(integrand, centre, r, kernel.disk_support, x_d, abs_tol);
    const double change = std::abs(next.value - prev.value);
    prev = next;
    if (change <= 4.0 * abs_tol) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    throw NonConvergenceError("to_position_domain: truncation radius did not settle", std::abs(prev.value),
                              prev.error);
  }
  out.value = prev.value;
  out.error_estimate = prev.error;

  if (kernel.admissible) {
    auto excluded = [&](Vec2 u) { return kernel.admissible(u, x_d) ? 0.0 : weight(u); };
    const auto ex = integrate_square<double>(excluded, centre, r, kernel.disk_support, x_d, 1e-8 * scale);
    const auto all = integrate_square<double>(weight, centre, r, false, x_d, 1e-10 * scale);
    out.excluded_fraction = std::clamp(ex.value / all.value, 0.0, 1.0);
  }
  return out;
}

CoherenceValue observable_coherence(Vec2 x1, Vec2 x2, double z, const PositionKernel& kernel,
                                    const GaussianInput& input, const TurbulenceParams& params,
                                    const AssemblyOptions& opt) {
  return to_position_domain(kernel, input, 0.5 * (x1 + x2), x1 - x2, z, params, opt);
}

GridState propagate_grid(const GridState& field, Vec2 x_d, double z, const PositionKernel& kernel,
                         const TurbulenceParams& params, std::size_t out_n, double out_spacing) {
  field.validate();
  params.validate();
  if (field.domain_tag != DomainTag::position) throw GridMismatch("propagate_grid: expected a position-domain field");
  if (!(z > 0.0)) throw DomainError("propagate_grid: z must be > 0");
  if (out_n == 0 || !(out_spacing > 0.0)) throw GridMismatch("propagate_grid: invalid output grid");

  const std::size_t nx = field.nx, ny = field.ny;
  const double dx = field.spacing.x, dy = field.spacing.y;
  const double lz = params.lambda * z;
  const std::size_t mx = 2 * nx - 1, my = 2 * ny - 1;

  // For every lattice difference u = m spacing:
  //   w(u) = dA T(u) Gt((x_d - u)/(lambda z), u),
  //   Gt(q, u) = sum_n psi(x_n + u) conj(psi(x_n)) exp(i 2 pi (x_n + u/2).q) dA
  std::vector<cplx> w(mx * my);
  const double da = dx * dy;
  internal::parallel_for(mx, [&](std::size_t a) {
    const long mxi = static_cast<long>(a) - static_cast<long>(nx - 1);
    std::vector<cplx> px(nx), py(ny);
    for (std::size_t b = 0; b < my; ++b) {
      const long myi = static_cast<long>(b) - static_cast<long>(ny - 1);
      const Vec2 u{static_cast<double>(mxi) * dx, static_cast<double>(myi) * dy};
      if (kernel.admissible && !kernel.admissible(u, x_d)) continue;
      const Vec2 q = (1.0 / lz) * (x_d - u);
      for (std::size_t i = 0; i < nx; ++i) {
        px[i] = std::polar(1.0, kTwoPi * (field.origin.x + static_cast<double>(i) * dx + 0.5 * u.x) * q.x);
      }
      for (std::size_t j = 0; j < ny; ++j) {
        py[j] = std::polar(1.0, kTwoPi * (field.origin.y + static_cast<double>(j) * dy + 0.5 * u.y) * q.y);
      }
      cplx gt{};
      for (std::size_t i = 0; i < nx; ++i) {
        const long i1 = static_cast<long>(i) + mxi;
        if (i1 < 0 || i1 >= static_cast<long>(nx)) continue;
        cplx row{};
        for (std::size_t j = 0; j < ny; ++j) {
          const long j1 = static_cast<long>(j) + myi;
          if (j1 < 0 || j1 >= static_cast<long>(ny)) continue;
          row += field.at(static_cast<std::size_t>(i1), static_cast<std::size_t>(j1)) * std::conj(field.at(i, j)) * py[j];
        }
        gt += row * px[i];
      }
      w[a * my + b] = da * da * kernel.value(u, x_d, z) * gt;
    }
  });

  //   G(x_s) = (lambda z)^-2 sum_u w(u) exp(-i 2 pi x_s.(x_d - u) / (lambda z))
  GridState out = GridState::centered(out_n, out_spacing, DomainTag::position);
  internal::parallel_for(out_n, [&](std::size_t i) {
    for (std::size_t j = 0; j < out_n; ++j) {
      const Vec2 xs = out.coord(i, j);
      cplx acc{};
      for (std::size_t a = 0; a < mx; ++a) {
        const double ux = (static_cast<double>(a) - static_cast<double>(nx - 1)) * dx;
        for (std::size_t b = 0; b < my; ++b) {
          const cplx wv = w[a * my + b];
          if (wv == cplx{}) continue;
          const double uy = (static_cast<double>(b) - static_cast<double>(ny - 1)) * dy;
          acc += wv * std::polar(1.0, -kTwoPi * dot(xs, x_d - Vec2{ux, uy}) / lz);
        }
      }
      out.at(i, j) = acc / (lz * lz);
    }
  });
  return out;
}

}  // namespace propagate
}  // namespace nmipe
