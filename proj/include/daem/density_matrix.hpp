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

#include "daem/linalg.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace daem {

/// Density operator of a qubit register (dim = 2^n) or a truncated Fock mode.
///
/// Construction checks Hermiticity and unit trace at `kStateTolerance`; the
/// tighter 1e-10 bounds of the individual operations are asserted in tests.
/// Positivity is not checked on construction (it costs an eigensolve); call
/// `min_eigenvalue()` where it matters.
class DensityMatrix {
 public:
  static constexpr double kStateTolerance = 1e-8;

  DensityMatrix() : rho_(CMat::Identity(1, 1)) {}

  explicit DensityMatrix(CMat rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
      throw std::invalid_argument("density matrix must be square and non-empty");
    if (!is_hermitian(rho_, kStateTolerance)) throw std::invalid_argument("density matrix is not Hermitian");
    const cplx tr = rho_.trace();
    if (std::abs(tr - cplx{1.0, 0.0}) > kStateTolerance)
      throw std::invalid_argument("density matrix trace " + std::to_string(tr.real()) + " differs from 1");
  }

  static DensityMatrix from_pure(const CVec& psi) {
    const double nrm = psi.norm();
    if (nrm == 0.0) throw std::invalid_argument("zero state vector");
    const CVec v = psi / nrm;
    return DensityMatrix(v * v.adjoint());
  }

  /// Computational basis projector |index><index| of a register of dimension dim.
  static DensityMatrix basis(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) throw std::out_of_range("basis index out of range");
    CMat m = CMat::Zero(dim, dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix zero_state(int n_qubits) { return basis(static_cast<Eigen::Index>(pow2(n_qubits)), 0); }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(CMat::Identity(dim, dim) / static_cast<double>(dim));
  }

  const CMat& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  int num_qubits() const { return log2_exact(static_cast<std::size_t>(rho_.rows())); }

  double trace() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMat> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

  /// Computational-basis populations (real diagonal).
  RVec populations() const { return rho_.diagonal().real(); }

  DensityMatrix tensor(const DensityMatrix& other) const { return DensityMatrix(kron(rho_, other.rho_)); }

 private:
  CMat rho_;
};

inline double trace_distance_frobenius(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() - b.matrix()).norm();
}

/// tr(rho sigma); equals the fidelity when either state is pure.
inline double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() * b.matrix()).trace().real();
}

/// Reduced state on `keep` (ascending register order preserved) of an n-qubit state.
inline DensityMatrix partial_trace_keep(const DensityMatrix& state, const std::vector<int>& keep) {
  const int n = state.num_qubits();
  const int k = static_cast<int>(keep.size());
  const auto dim = static_cast<std::size_t>(state.dim());
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  auto compose = [&](std::size_t kept_bits, std::size_t traced_bits) {
    std::size_t idx = 0;
    for (int r = 0; r < k; ++r)
      if (kept_bits & (std::size_t{1} << (k - 1 - r))) idx |= std::size_t{1} << (n - 1 - keep[r]);
    const int t = static_cast<int>(traced.size());
    for (int r = 0; r < t; ++r)
      if (traced_bits & (std::size_t{1} << (t - 1 - r))) idx |= std::size_t{1} << (n - 1 - traced[r]);
    return static_cast<Eigen::Index>(idx);
  };
  const std::size_t dk = pow2(k);
  const std::size_t dt = dim / dk;
  CMat out = CMat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t a = 0; a < dk; ++a)
    for (std::size_t b = 0; b < dk; ++b) {
      cplx acc{0.0, 0.0};
      for (std::size_t e = 0; e < dt; ++e) acc += state.matrix()(compose(a, e), compose(b, e));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  return DensityMatrix(std::move(out));
}

}  // namespace daem
