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
#include <vector>

#include "nmipe/vec2.hpp"

namespace nmipe {

enum class DomainTag { position, frequency };

/// Complex samples on a uniform 2-D grid. Sample (ix, iy) sits at
/// origin + (ix spacing.x, iy spacing.y) and is stored at ix * ny + iy.
struct GridState {
  std::size_t nx = 0;
  std::size_t ny = 0;
  Vec2 origin;
  Vec2 spacing;
  DomainTag domain_tag = DomainTag::position;
  std::vector<std::complex<double>> samples;

  GridState() = default;
  GridState(std::size_t nx_, std::size_t ny_, Vec2 origin_, Vec2 spacing_, DomainTag tag);

  /// Grid of n x n samples centred on zero: origin = -(n/2) spacing.
  static GridState centered(std::size_t n, double spacing, DomainTag tag);

  std::complex<double>& at(std::size_t ix, std::size_t iy) { return samples[ix * ny + iy]; }
  const std::complex<double>& at(std::size_t ix, std::size_t iy) const { return samples[ix * ny + iy]; }
  Vec2 coord(std::size_t ix, std::size_t iy) const {
    return {origin.x + static_cast<double>(ix) * spacing.x, origin.y + static_cast<double>(iy) * spacing.y};
  }

  /// Throws GridMismatch if spacing is not positive, sizes disagree, or a
  /// sample is not finite.
  void validate() const;
  bool same_geometry(const GridState& o) const;
};

/// Continuous Fourier transform approximated by the DFT:
///   out(x) = sum_a in(a) exp(sign i 2 pi a.x) dA,   sign = -1 or +1.
/// The output grid has the same shape, spacing 1/(n spacing) and the
/// requested origin. The output domain tag is the opposite of the input.
GridState fourier_transform(const GridState& in, Vec2 out_origin, int sign);

/// Same, with the output centred on zero (origin = -(n/2) out spacing).
GridState fourier_transform(const GridState& in, int sign);

/// Linear (non-circular) 2-D convolution via zero-padded FFTs:
///   out[i, j] = sum_{m, l} a[i - m, j - l] k[m + nx - 1, l + ny - 1]
/// with |m| < nx, |l| < ny. k is (2nx-1) x (2ny-1), a is nx x ny and is
/// treated as zero outside its extent. Returns nx x ny.
std::vector<std::complex<double>> convolve_centered(const std::vector<std::complex<double>>& a, std::size_t nx,
                                                    std::size_t ny,
                                                    const std::vector<std::complex<double>>& kernel);

/// Sum of several convolve_centered results, sharing one inverse transform.
struct ConvolutionTerm {
  const std::vector<std::complex<double>>* a;
  const std::vector<std::complex<double>>* kernel;
};
std::vector<std::complex<double>> convolve_centered_sum(const std::vector<ConvolutionTerm>& terms, std::size_t nx,
                                                        std::size_t ny);

}  // namespace nmipe
