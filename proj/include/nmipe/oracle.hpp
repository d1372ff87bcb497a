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

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "nmipe/errors.hpp"

namespace nmipe::oracle {

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_subdivisions = 4000;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

/// Value types accepted by the integrators: real or complex scalars.
template <class T>
concept QuadValue = std::is_same_v<T, double> || std::is_same_v<T, std::complex<double>>;

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T resk = fc * kWgk[7];
  T resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    resk += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) resg += (f1 + f2) * kWg[j / 2];
  }
  return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace detail

namespace detail {

template <class T, class F>
QuadResult<T> gk_adaptive(F& f, double a, double b, const QuadOptions& opt) {
  std::priority_queue<detail::Segment<T>> heap;
  auto first = detail::gk15<T>(f, a, b);
  heap.push(first);
  T total = first.value;
  double err = first.error;
  int evals = 15;
  int subdivisions = 0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (subdivisions >= opt.max_subdivisions) {
      throw NonConvergenceError("quad_adaptive_1d: subdivision limit reached", std::abs(total), err);
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergenceError("quad_adaptive_1d: interval below floating-point resolution", std::abs(total), err);
    }
    heap.pop();
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    evals += 30;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) || subdivisions % 256 == 0) {
      // resum from scratch before trusting an incrementally updated total
      err = 0.0;
      T sum{};
      auto copy = heap;
      while (!copy.empty()) {
        err += copy.top().error;
        sum += copy.top().value;
        copy.pop();
      }
      total = sum;
    }
  }
  return {total, err, evals};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. Either bound
/// may be infinite. The interval with the largest error estimate is bisected
/// until the summed estimate drops below max(abs_tol, rel_tol |I|).
/// Throws NonConvergenceError, carrying the best estimate, when the
/// subdivision budget runs out.
template <QuadValue T = double, class F>
QuadResult<T> quad_adaptive_1d(F&& f, double a, double b, const QuadOptions& opt = {}) {
  if (a == b) return {};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  QuadResult<T> r;
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) {
    r = detail::gk_adaptive<T>(f, a, b, opt);
  } else if (lo_inf && hi_inf) {
    // x = t/(1-t^2), t in (-1, 1)
    auto g = [&](double t) -> T {
      const double d = 1.0 - t * t;
      if (d <= 0.0) return T{};
      return f(t / d) * ((1.0 + t * t) / (d * d));
    };
    r = detail::gk_adaptive<T>(g, -1.0, 1.0, opt);
  } else {
    // x = s +- t/(1-t), t in [0, 1)
    const double s = lo_inf ? b : a;
    const double dir = lo_inf ? -1.0 : 1.0;
    auto g = [&](double t) -> T {
      const double u = 1.0 - t;
      if (u <= 0.0) return T{};
      return f(s + dir * t / u) * (1.0 / (u * u));
    };
    r = detail::gk_adaptive<T>(g, 0.0, 1.0, opt);
  }
  r.value = r.value * sign;
  return r;
}

/// Region { (x, y) : x0 <= x <= x1, y_lo(x) <= y <= y_hi(x) }.
struct Region2d {
  double x0 = 0.0;
  double x1 = 0.0;
  std::function<double(double)> y_lo;
  std::function<double(double)> y_hi;

  static Region2d rectangle(double x0, double x1, double y0, double y1) {
    return {x0, x1, [y0](double) { return y0; }, [y1](double) { return y1; }};
  }
};

/// Iterated adaptive quadrature of f(x, y) over a Region2d. The inner
/// integral is evaluated with a tolerance tightened by the outer interval
/// length so the accumulated inner error stays below opt.abs_tol / 2.
template <QuadValue T = double, class F>
QuadResult<T> quad_adaptive_2d(F&& f, const Region2d& dom, const QuadOptions& opt = {}) {
  const double width = std::abs(dom.x1 - dom.x0);
  if (width == 0.0) return {};
  QuadOptions inner = opt;
  inner.abs_tol = 0.5 * opt.abs_tol / width;
  QuadOptions outer = opt;
  outer.abs_tol = 0.5 * opt.abs_tol;
  int evals = 0;
  auto g = [&](double x) -> T {
    auto r = quad_adaptive_1d<T>([&](double y) -> T { return f(x, y); }, dom.y_lo(x), dom.y_hi(x), inner);
    evals += r.evaluations;
    return r.value;
  };
  auto r = quad_adaptive_1d<T>(g, dom.x0, dom.x1, outer);
  r.error += 0.5 * opt.abs_tol;
  r.evaluations = evals;
  return r;
}

// ---------------------------------------------------------------------------
// Second-order initial value problem  rho'' = K(z) rho,  rho(0) = 1, rho'(0) = 0
// ---------------------------------------------------------------------------

/// Samples of rho(z) / rho_in and its derivative. Entry 0 is always z = 0.
struct OdeSolution {
  std::vector<double> z_samples;
  std::vector<double> values;
  std::vector<double> derivative_values;

  /// Cubic Hermite interpolation between stored samples. z must lie within
  /// [z_samples.front(), z_samples.back()].
  double interpolate(double z) const;
};

struct OdeOptions {
  double tol = 1e-10;
  /// Extra distances at which the solution must be reported exactly. Steps
  /// are clipped to land on them; z_end is always included.
  std::vector<double> report_at;
  /// Keep every accepted step (dense history) rather than only report points.
  bool keep_steps = false;
  int max_steps = 2000000;
};

/// Dormand-Prince 5(4) with a first-order series bootstrap over the initial
/// step. Error is controlled on rho with scale tol (1 + |rho|) and on rho'
/// with scale tol (1/z_end + |rho'|). Throws StepSizeUnderflow when the
/// step collapses, DomainError for z_end <= 0 or tol <= 0.
OdeSolution integrate_pointwise(const std::function<double(double)>& k_of_z, double z_end,
                                const OdeOptions& opt = {});

}  // namespace nmipe::oracle
