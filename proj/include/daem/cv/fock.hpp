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

// Single bosonic mode truncated to N Fock levels.

#include "daem/density_matrix.hpp"

namespace daem::cv {

inline CMat annihilation(int n_trunc) {
  CMat a = CMat::Zero(n_trunc, n_trunc);
  for (int n = 1; n < n_trunc; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline RVec number_diagonal(int n_trunc) { return RVec::LinSpaced(n_trunc, 0.0, n_trunc - 1.0); }

/// Diagonal of pi a^dagger^2 a^2 = pi n(n-1).
inline RVec kerr_diagonal(int n_trunc) {
  RVec h(n_trunc);
  for (int n = 0; n < n_trunc; ++n) h(n) = kPi * n * (n - 1.0);
  return h;
}

/// Truncated expansion e^{-|a|^2/2} sum_n a^n / sqrt(n!) |n>, not renormalized.
inline CVec coherent_vector(cplx alpha, int n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("Fock truncation must be >= 1");
  CVec v(n_trunc);
  v(0) = std::exp(-std::norm(alpha) / 2.0);
  for (int n = 1; n < n_trunc; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return v;
}

/// Coherent state renormalized on the truncated space.
inline DensityMatrix coherent_state(cplx alpha, int n_trunc) {
  return DensityMatrix::from_pure(coherent_vector(alpha, n_trunc));
}

inline DensityMatrix fock_state(int n, int n_trunc) { return DensityMatrix::basis(n_trunc, n); }

inline cplx mean_annihilation(const DensityMatrix& rho) { return (rho.matrix() * annihilation(static_cast<int>(rho.dim()))).trace(); }

inline double mean_photon_number(const DensityMatrix& rho) {
  return rho.matrix().diagonal().real().dot(number_diagonal(static_cast<int>(rho.dim())));
}

}  // namespace daem::cv
