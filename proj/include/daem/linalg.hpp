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

// Dense complex linear algebra shared by every simulator in the library.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace daem {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

namespace pauli {
inline CMat I() { return CMat::Identity(2, 2); }
inline CMat X() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMat Y() {
  CMat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
inline CMat Z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline CMat by_label(char c) {
  switch (c) {
    case 'I': return I();
    case 'X': return X();
    case 'Y': return Y();
    case 'Z': return Z();
    default: throw std::invalid_argument(std::string("unknown Pauli label '") + c + "'");
  }
}
}  // namespace pauli

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMat kron_all(const std::vector<CMat>& factors) {
  CMat out = CMat::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

inline bool is_hermitian(const CMat& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const CMat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// exp(-i H t) for Hermitian H, through the spectral decomposition.
inline CMat expm_hermitian(const CMat& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("expm_hermitian: eigensolver failed");
  CVec phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::exp(-kI * es.eigenvalues()(k) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Frobenius distance between two operators after removing the best global phase from b.
inline double phase_aligned_distance(const CMat& a, const CMat& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  return (a - phase * b).norm();
}

/// Hermitian generator G with exp(-i G) = U (principal branch of the logarithm).
inline CMat unitary_generator(const CMat& u) {
  Eigen::ComplexSchur<CMat> schur(u);
  const CMat& q = schur.matrixU();
  const CMat& t = schur.matrixT();
  CVec angles(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) angles(k) = -std::arg(t(k, k));
  CMat g = q * angles.asDiagonal() * q.adjoint();
  return 0.5 * (g + g.adjoint());
}

inline std::size_t pow2(int n) { return std::size_t{1} << n; }

inline int log2_exact(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) throw std::invalid_argument("dimension is not a power of two");
  return n;
}

}  // namespace daem
