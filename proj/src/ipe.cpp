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

#include "nmipe/ipe.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "internal/gauss_legendre.hpp"
#include "internal/parallel.hpp"
#include "nmipe/errors.hpp"
#include "nmipe/oracle.hpp"
#include "nmipe/simd/kernels.hpp"

namespace nmipe {

void PhasePoint::validate() const {
  if (!is_finite(x) || !is_finite(a_d)) throw DomainError("PhasePoint: non-finite component");
}

void TwoPhotonPoint::validate() const {
  if (!is_finite(x1) || !is_finite(a_d) || !is_finite(x2) || !is_finite(b_d)) {
    throw DomainError("TwoPhotonPoint: non-finite component");
  }
}

namespace ipe {
namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCellOrder = 12;

// exp(-i theta) - 1 without cancellation for small theta.
cplx expm1_i(double theta) {
  const double s = std::sin(0.5 * theta);
  return {-2.0 * s * s, -std::sin(theta)};
}

struct ZeroCellMoments {
  cplx m0;           // int phi_1 (e - 1)
  cplx mx, my;       // int phi_1 e v
  cplx mxx, mxy, myy;
};

// Moments of c |v|^(-8/3) exp(-i 2 pi s.v) over the cell [-hx, hx] x [-hy, hy].
// Polar coordinates with r = R(phi) t^3 make every radial integrand smooth.
ZeroCellMoments zero_cell_moments(double c, Vec2 s, double hx, double hy) {
  ZeroCellMoments out{};
  const double phic = std::atan2(hy, hx);
  const std::array<double, 5> edges = {-phic, phic, std::numbers::pi - phic, std::numbers::pi + phic,
                                        2.0 * std::numbers::pi - phic};
  const auto rule = internal::gauss_legendre(48);
  const auto trule = internal::gauss_legendre(48);
  for (int piece = 0; piece < 4; ++piece) {
    const double a = edges[piece], b = edges[piece + 1];
    for (std::size_t ip = 0; ip < rule.nodes.size(); ++ip) {
      const double phi = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[ip];
      const double wphi = 0.5 * (b - a) * rule.weights[ip];
      const double cp = std::cos(phi), sp = std::sin(phi);
      const double big_r = std::min(cp != 0.0 ? hx / std::abs(cp) : INFINITY, sp != 0.0 ? hy / std::abs(sp) : INFINITY);
      const double kappa = kTwoPi * (s.x * cp + s.y * sp);
      cplx r0{}, r1{}, r2{};
      for (std::size_t it = 0; it < trule.nodes.size(); ++it) {
        const double t = 0.5 + 0.5 * trule.nodes[it];
        const double wt = 0.5 * trule.weights[it];
        const double t3 = t * t * t;
        const double theta = kappa * big_r * t3;
        const cplx e{std::cos(theta), -std::sin(theta)};
        // (e - 1) / t^3 -> -i theta / t^3 as t -> 0
        const cplx em1 = t3 > 0.0 ? expm1_i(theta) / t3 : cplx{0.0, -kappa * big_r};
        r0 += wt * em1;
        r1 += wt * e;
        r2 += wt * t3 * e;
      }
      // radial factors: 3 R^(-2/3), 3 R^(1/3), 3 R^(4/3)
      const double rr = std::cbrt(big_r);
      const cplx f0 = 3.0 * r0 / (rr * rr);
      const cplx f1 = 3.0 * rr * r1;
      const cplx f2 = 3.0 * rr * big_r * r2;
      out.m0 += wphi * c * f0;
      out.mx += wphi * c * cp * f1;
      out.my += wphi * c * sp * f1;
      out.mxx += wphi * c * cp * cp * f2;
      out.mxy += wphi * c * cp * sp * f2;
      out.myy += wphi * c * sp * sp * f2;
    }
  }
  return out;
}

// c |v|^(-8/3) integrated over the plane outside [-hx, hx] x [-hy, hy]:
// (3/2) c int R(phi)^(-2/3) dphi.
double outside_box_integral(double c, double hx, double hy) {
  const double phic = std::atan2(hy, hx);
  oracle::QuadOptions opt{1e-15, 1e-14, 200};
  const double p1 = oracle::quad_adaptive_1d([&](double phi) { return std::cbrt(std::pow(std::cos(phi) / hx, 2.0)); },
                                             0.0, phic, opt).value;
  const double p2 = oracle::quad_adaptive_1d([&](double phi) { return std::cbrt(std::pow(std::sin(phi) / hy, 2.0)); },
                                             phic, 0.5 * std::numbers::pi, opt).value;
  return 1.5 * c * 4.0 * (p1 + p2);
}

// Fourth-order central difference along one axis; zero outside the grid.
std::vector<cplx> diff(const std::vector<cplx>& f, std::size_t nx, std::size_t ny, bool along_x, double h) {
  std::vector<cplx> out(f.size());
  auto get = [&](long i, long j) -> cplx {
    if (i < 0 || j < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny)) return {};
    return f[static_cast<std::size_t>(i) * ny + static_cast<std::size_t>(j)];
  };
  const double inv = 1.0 / (12.0 * h);
  for (long i = 0; i < static_cast<long>(nx); ++i) {
    for (long j = 0; j < static_cast<long>(ny); ++j) {
      const long di = along_x ? 1 : 0, dj = along_x ? 0 : 1;
      const cplx v = -get(i + 2 * di, j + 2 * dj) + 8.0 * get(i + di, j + dj) - 8.0 * get(i - di, j - dj) +
                     get(i - 2 * di, j - 2 * dj);
      out[static_cast<std::size_t>(i) * ny + static_cast<std::size_t>(j)] = v * inv;
    }
  }
  return out;
}

}  // namespace

double p_poly(double z, const PhasePoint& pt, double lambda) { return norm2(lambda * z * pt.a_d + pt.x); }

double k_single(double z, const PhasePoint& pt, const TurbulenceParams& params) {
  const double k = kTwoPi / params.lambda;
  return -k * k * params.cn2 * std::cbrt(p_poly(z, pt, params.lambda));
}

double k_two(double z, const TwoPhotonPoint& pt, const TurbulenceParams& params) {
  return k_single(z, {pt.x1, pt.a_d}, params) + k_single(z, {pt.x2, pt.b_d}, params);
}

GridState ipe_rhs_local(const GridState& h_grid, Vec2 a_d, double z, const TurbulenceParams& params) {
  h_grid.validate();
  if (h_grid.domain_tag != DomainTag::position) throw GridMismatch("ipe_rhs_local: expected a position-domain grid");
  const double k = kTwoPi / params.lambda;
  const double coef = -2.0 * k * k * 0.5 * params.cn2;
  const Vec2 s = params.lambda * z * a_d;
  GridState out = h_grid;
  std::vector<double> r2(h_grid.ny), w(h_grid.ny);
  const auto& kern = simd::active();
  for (std::size_t i = 0; i < h_grid.nx; ++i) {
    const double xs = h_grid.origin.x + static_cast<double>(i) * h_grid.spacing.x + s.x;
    kern.shifted_radius_squared(h_grid.origin.y, h_grid.spacing.y, s.y, xs * xs, r2.data(), h_grid.ny);
    for (std::size_t j = 0; j < h_grid.ny; ++j) w[j] = coef * std::cbrt(r2[j]);
    kern.scale_by_real(&out.samples[i * h_grid.ny], w.data(), h_grid.ny);
  }
  return out;
}

GridState ipe_rhs_fourier(const GridState& s_grid, Vec2 a_d, double z, const TurbulenceParams& params) {
  s_grid.validate();
  params.validate();
  if (s_grid.domain_tag != DomainTag::frequency) throw GridMismatch("ipe_rhs_fourier: expected a frequency-domain grid");
  if (!is_finite(a_d) || !(z >= 0.0)) throw DomainError("ipe_rhs_fourier: invalid a_d or z");

  const std::size_t nx = s_grid.nx, ny = s_grid.ny;
  GridState out(nx, ny, s_grid.origin, s_grid.spacing, DomainTag::frequency);
  const double c = turbulence::phi_1(1.0, params.cn2);
  if (c == 0.0) return out;

  const double dx = s_grid.spacing.x, dy = s_grid.spacing.y;
  const Vec2 s = params.lambda * z * a_d;
  const std::size_t kx = 2 * nx - 1, ky = 2 * ny - 1;

  // Per-cell moments of phi_1 exp(-i 2 pi s.v) about each lattice point.
  const auto rule = internal::gauss_legendre(kCellOrder);
  const std::size_t q = rule.nodes.size();
  std::vector<double> ox(q), oy(q), wx(q), wy(q);
  for (std::size_t g = 0; g < q; ++g) {
    ox[g] = 0.5 * dx * rule.nodes[g];
    oy[g] = 0.5 * dy * rule.nodes[g];
    wx[g] = 0.5 * dx * rule.weights[g];
    wy[g] = 0.5 * dy * rule.weights[g];
  }
  std::vector<cplx> eo(q * q);
  for (std::size_t g = 0; g < q; ++g)
    for (std::size_t h = 0; h < q; ++h) eo[g * q + h] = std::polar(1.0, -kTwoPi * (s.x * ox[g] + s.y * oy[h]));

  std::vector<cplx> m0(kx * ky), mx(kx * ky), my(kx * ky), mxx(kx * ky), mxy(kx * ky), myy(kx * ky);
  std::vector<double> real_row(kx);
  internal::parallel_for(kx, [&](std::size_t i) {
    const double ux = (static_cast<double>(i) - static_cast<double>(nx - 1)) * dx;
    double real_sum = 0.0;
    for (std::size_t j = 0; j < ky; ++j) {
      const std::size_t idx = i * ky + j;
      if (i == nx - 1 && j == ny - 1) continue;
      const double uy = (static_cast<double>(j) - static_cast<double>(ny - 1)) * dy;
      const cplx ec = std::polar(1.0, -kTwoPi * (s.x * ux + s.y * uy));
      cplx a0{}, ax{}, ay{}, axx{}, axy{}, ayy{};
      double r0 = 0.0;
      for (std::size_t g = 0; g < q; ++g) {
        const double vx = ux + ox[g];
        for (std::size_t h = 0; h < q; ++h) {
          const double vy = uy + oy[h];
          const double r2 = vx * vx + vy * vy;
          const double f = c * wx[g] * wy[h] / (r2 * std::cbrt(r2));
          r0 += f;
          const cplx fe = f * eo[g * q + h];
          a0 += fe;
          ax += fe * ox[g];
          ay += fe * oy[h];
          axx += fe * (ox[g] * ox[g]);
          axy += fe * (ox[g] * oy[h]);
          ayy += fe * (oy[h] * oy[h]);
        }
      }
      m0[idx] = ec * a0;
      mx[idx] = ec * ax;
      my[idx] = ec * ay;
      mxx[idx] = ec * axx;
      mxy[idx] = ec * axy;
      myy[idx] = ec * ayy;
      real_sum += r0;
    }
    real_row[i] = real_sum;
  });
  double total = outside_box_integral(c, (static_cast<double>(nx) - 0.5) * dx, (static_cast<double>(ny) - 0.5) * dy);
  for (double v : real_row) total += v;

  const auto& sv = s_grid.samples;
  const auto sx = diff(sv, nx, ny, true, dx);
  const auto sy = diff(sv, nx, ny, false, dy);
  const auto sxx = diff(sx, nx, ny, true, dx);
  const auto sxy = diff(sx, nx, ny, false, dy);
  const auto syy = diff(sy, nx, ny, false, dy);

  // S(a - u - o) ~ S - o.grad S + (1/2) o o : grad grad S, evaluated at a - u
  for (auto& v : mx) v = -v;
  for (auto& v : my) v = -v;
  for (auto& v : mxx) v *= 0.5;
  for (auto& v : myy) v *= 0.5;
  auto conv = convolve_centered_sum(
      {{&sv, &m0}, {&sx, &mx}, {&sy, &my}, {&sxx, &mxx}, {&sxy, &mxy}, {&syy, &myy}}, nx, ny);

  const ZeroCellMoments zc = zero_cell_moments(c, s, 0.5 * dx, 0.5 * dy);
  const double k = kTwoPi / params.lambda;
  const double pref = 2.0 * k * k;
  for (std::size_t n = 0; n < nx * ny; ++n) {
    const cplx local = (zc.m0 - total) * sv[n] - zc.mx * sx[n] - zc.my * sy[n] +
                       0.5 * zc.mxx * sxx[n] + zc.mxy * sxy[n] + 0.5 * zc.myy * syy[n];
    out.samples[n] = pref * (conv[n] + local);
  }
  return out;
}

}  // namespace ipe
}  // namespace nmipe
