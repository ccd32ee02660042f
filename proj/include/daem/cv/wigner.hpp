// Copyright 2026 The daem-lab Authors
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

// Point-wise Wigner function on a square phase-space grid, x = sqrt(2) Re(alpha),
// p = sqrt(2) Im(alpha), normalized so that sum W dx dp = 1.

#include "daem/density_matrix.hpp"

#include <cmath>

namespace daem::cv {

struct GridSpec {
  int points = 48;
  double lo = -4.0;
  double hi = 4.0;

  double step() const { return (hi - lo) / (points - 1); }
  double coord(int i) const { return lo + step() * i; }
  std::size_t size() const { return static_cast<std::size_t>(points) * static_cast<std::size_t>(points); }
};

/// values[i * points + j] = W(x_i, p_j).
struct WignerGrid {
  GridSpec spec;
  std::vector<double> values;

  double cell() const { return spec.step() * spec.step(); }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i * spec.points + j)]; }
  double normalization() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell();
  }
};

/// Precomputed Wigner kernels pi^{-1} <n| D(a) P D(a)^dagger |m> for every grid point and (m, n).
class WignerTransform {
 public:
  WignerTransform(int n_trunc, GridSpec grid = {}) : n_(n_trunc), grid_(grid) {
    if (n_trunc < 1) throw std::invalid_argument("Fock truncation must be >= 1");
    if (grid.points < 2 || !(grid.hi > grid.lo)) throw std::invalid_argument("invalid Wigner grid");
    const auto pts = static_cast<Eigen::Index>(grid.size());
    kernel_ = CMat::Zero(pts, static_cast<Eigen::Index>(n_) * n_);
    for (int i = 0; i < grid.points; ++i)
      for (int j = 0; j < grid.points; ++j) {
        const cplx alpha{grid.coord(i) / std::sqrt(2.0), grid.coord(j) / std::sqrt(2.0)};
        const double r2 = std::norm(alpha);
        const double gauss = std::exp(-2.0 * r2) / kPi;
        const Eigen::Index row = i * grid.points + j;
        for (int m = 0; m < n_; ++m)
          for (int n = 0; n <= m; ++n) {
            const double pref = (n % 2 ? -1.0 : 1.0) * std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
            const double lag = std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(m - n), 4.0 * r2);
            const cplx k = pref * std::pow(2.0 * std::conj(alpha), m - n) * gauss * lag;
            // W = sum_mn rho_mn <n|K|m>; the (n, m) element is the conjugate
            kernel_(row, static_cast<Eigen::Index>(m) * n_ + n) = k;
            if (m != n) kernel_(row, static_cast<Eigen::Index>(n) * n_ + m) = std::conj(k);
          }
      }
  }

  int truncation() const { return n_; }
  const GridSpec& grid() const { return grid_; }

  WignerGrid operator()(const DensityMatrix& rho) const {
    if (rho.dim() != n_) throw std::invalid_argument("state truncation does not match Wigner transform");
    CVec vec(static_cast<Eigen::Index>(n_) * n_);
    for (int m = 0; m < n_; ++m)
      for (int n = 0; n < n_; ++n) vec(static_cast<Eigen::Index>(m) * n_ + n) = rho.matrix()(m, n);
    const RVec w = (kernel_ * vec).real();
    return {grid_, std::vector<double>(w.data(), w.data() + w.size())};
  }

 private:
  int n_;
  GridSpec grid_;
  CMat kernel_;
};

inline WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid = {}) {
  return WignerTransform(static_cast<int>(rho.dim()), grid)(rho);
}

/// tr(rho sigma) ~ 2 pi sum W1 W2 dx dp.
inline double wigner_overlap(const WignerGrid& a, const WignerGrid& b) {
  if (a.values.size() != b.values.size() || a.spec.points != b.spec.points || a.spec.lo != b.spec.lo ||
      a.spec.hi != b.spec.hi)
    throw std::invalid_argument("Wigner grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return 2.0 * kPi * s * a.cell();
}

/// Overlap normalized by the larger grid purity, tr(rho sigma) / max(tr rho^2, tr sigma^2).
inline double overlap_fidelity(const WignerGrid& a, const WignerGrid& b) {
  return wigner_overlap(a, b) / std::max(wigner_overlap(a, a), wigner_overlap(b, b));
}

}  // namespace daem::cv
