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

// Random and physically motivated input states.

#include "daem/density_matrix.hpp"
#include "daem/pauli.hpp"
#include "daem/random.hpp"

namespace daem {

inline DensityMatrix haar_random_pure(int n_qubits, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(pow2(n_qubits));
  const CVec psi = complex_gaussian(dim, 1, rng).col(0);
  return DensityMatrix::from_pure(psi);
}

inline CVec haar_random_vector(Eigen::Index dim, Rng& rng) {
  CVec psi = complex_gaussian(dim, 1, rng).col(0);
  return psi / psi.norm();
}

/// Ginibre ensemble rho = G G^dagger / tr(G G^dagger), G of size d x rank (full rank by default).
inline DensityMatrix random_mixed(int n_qubits, Rng& rng, int rank = 0) {
  const auto dim = static_cast<Eigen::Index>(pow2(n_qubits));
  const Eigen::Index r = rank > 0 ? rank : dim;
  const CMat g = complex_gaussian(dim, r, rng);
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

/// Transverse-field Ising chain H = -g sum X_i - J sum Z_i Z_{i+1} (open boundary).
struct IsingSpec {
  int n_sites = 2;
  double coupling_j = 1.0;
  double field_g = 1.0;

  void validate() const {
    if (n_sites < 2) throw std::invalid_argument("Ising chain needs at least 2 sites");
    if (n_sites > 12) throw std::invalid_argument("Ising chain limited to 12 sites for dense simulation");
  }
};

inline CMat ising_hamiltonian(const IsingSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const auto dim = static_cast<Eigen::Index>(pow2(n));
  CMat h = CMat::Zero(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    const auto bits = static_cast<std::size_t>(m);
    double zz = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const bool a = bits & qubit_mask(i, n), b = bits & qubit_mask(i + 1, n);
      zz += (a == b) ? 1.0 : -1.0;
    }
    h(m, m) = -spec.coupling_j * zz;
    for (int i = 0; i < n; ++i) h(static_cast<Eigen::Index>(bits ^ qubit_mask(i, n)), m) += -spec.field_g;
  }
  return h;
}

struct GroundState {
  DensityMatrix state;
  CVec vector;
  double energy = 0.0;
};

/// Lowest eigenvector of the (real symmetric) Ising Hamiltonian. With a
/// degenerate ground space (g -> 0) the eigensolver's first vector is returned.
inline GroundState ground_state(const IsingSpec& spec) {
  const CMat h = ising_hamiltonian(spec);
  const RMat hr = h.real();
  Eigen::SelfAdjointEigenSolver<RMat> es(hr);
  if (es.info() != Eigen::Success) throw std::runtime_error("ground_state: eigensolver failed");
  RVec v = es.eigenvectors().col(0);
  // Fix the sign so that the largest-magnitude amplitude is positive.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
  const CVec psi = v.cast<cplx>();
  return {DensityMatrix::from_pure(psi), psi, es.eigenvalues()(0)};
}

/// U rho U^dagger with U = exp(-i H t).
inline DensityMatrix evolve_unitary(const DensityMatrix& state, const CMat& hamiltonian, double t) {
  if (hamiltonian.rows() != state.dim()) throw std::invalid_argument("Hamiltonian dimension does not match state");
  if (!is_hermitian(hamiltonian, 1e-10)) throw std::invalid_argument("Hamiltonian is not Hermitian");
  if (t == 0.0) return state;
  const CMat u = expm_hermitian(hamiltonian, t);
  CMat out = u * state.matrix() * u.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

}  // namespace daem
