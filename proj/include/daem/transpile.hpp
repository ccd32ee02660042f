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

// Lowering of arbitrary 1- and 2-qubit unitaries to the {Rx, Rz, CNOT} basis.

#include "daem/circuit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <array>

namespace daem {

/// U = e^{i phase} Rz(gamma) Rx(beta) Rz(alpha); alpha is applied first.
struct EulerZXZ {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double phase = 0.0;
};

namespace detail {
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}
}  // namespace detail

inline EulerZXZ euler_zxz(const CMat& u) {
  if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("euler_zxz expects a 2x2 matrix");
  const cplx det = u.determinant();
  const cplx root = std::sqrt(det);
  const CMat v = u / root;  // SU(2)
  const double a00 = std::abs(v(0, 0));
  const double a10 = std::abs(v(1, 0));
  EulerZXZ e;
  e.beta = 2.0 * std::atan2(a10, a00);
  double sum = 0.0, diff = 0.0;
  if (a00 > 1e-12) sum = -2.0 * std::arg(v(0, 0));
  if (a10 > 1e-12) diff = -2.0 * (std::arg(v(1, 0)) + kPi / 2.0);
  e.alpha = (sum + diff) / 2.0;
  e.gamma = (sum - diff) / 2.0;
  const CMat rebuilt = gates::rz(e.gamma) * gates::rx(e.beta) * gates::rz(e.alpha);
  e.phase = std::arg((rebuilt.adjoint() * u).trace());
  e.alpha = detail::wrap_angle(e.alpha);
  e.beta = detail::wrap_angle(e.beta);
  e.gamma = detail::wrap_angle(e.gamma);
  return e;
}

/// Rotations of a single-qubit unitary; zero-angle rotations are omitted, so identity yields nothing.
inline std::vector<Gate> decompose_single_qubit(const CMat& u, int qubit, int group = -1) {
  const EulerZXZ e = euler_zxz(u);
  std::vector<Gate> out;
  constexpr double eps = 1e-12;
  if (std::abs(e.alpha) > eps) out.push_back(Gate::rz(qubit, e.alpha, group));
  if (std::abs(e.beta) > eps) out.push_back(Gate::rx(qubit, e.beta, group));
  if (std::abs(e.gamma) > eps) out.push_back(Gate::rz(qubit, e.gamma, group));
  return out;
}

/// Two-qubit Cartan (KAK) form: U ~ (a1 x b1) exp(i(cx XX + cy YY + cz ZZ)) (a2 x b2).
struct KakDecomposition {
  CMat before_a, before_b;  // applied first
  CMat after_a, after_b;
  double cx = 0.0, cy = 0.0, cz = 0.0;
};

namespace detail {

inline CMat magic_basis() {
  CMat b(4, 4);
  const double r = 1.0 / std::sqrt(2.0);
  b << r, 0, 0, kI * r,
       0, kI * r, r, 0,
       0, kI * r, -r, 0,
       r, 0, 0, -kI * r;
  return b;
}

/// Factor a 4x4 operator that is a tensor product a (x) b.
inline std::pair<CMat, CMat> factor_tensor_product(const CMat& m) {
  CMat r(4, 4);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) r(i1 * 2 + j1, i2 * 2 + j2) = m(i1 * 2 + i2, j1 * 2 + j2);
  Eigen::JacobiSVD<CMat> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s = std::sqrt(svd.singularValues()(0));
  CMat a(2, 2), b(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a(i, j) = s * svd.matrixU()(i * 2 + j, 0);
      b(i, j) = s * std::conj(svd.matrixV()(i * 2 + j, 0));
    }
  const double na = a.norm() / std::sqrt(2.0);
  return {a / na, b * na};
}

}  // namespace detail

inline KakDecomposition kak_decompose(const CMat& u_in) {
  if (u_in.rows() != 4 || u_in.cols() != 4) throw std::invalid_argument("kak_decompose expects a 4x4 unitary");
  const CMat b = detail::magic_basis();
  const cplx det = u_in.determinant();
  const CMat u = u_in / std::pow(det, 0.25);
  const CMat up = b.adjoint() * u * b;
  const CMat m2 = up.transpose() * up;
  const RMat re = m2.real(), im = m2.imag();

  // Real and imaginary parts commute; a generic real combination shares their eigenvectors.
  RMat p;
  bool found = false;
  for (double mix : {0.6180339887498949, 1.4142135623730951, 0.2718281828459045, 3.141592653589793}) {
    Eigen::SelfAdjointEigenSolver<RMat> es(re + mix * im);
    p = es.eigenvectors();
    const CMat d = p.transpose().cast<cplx>() * m2 * p.cast<cplx>();
    if ((d - CMat(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-9) {
      found = true;
      break;
    }
  }
  if (!found) throw std::runtime_error("kak_decompose: simultaneous diagonalization failed");
  if (p.determinant() < 0) p.col(0) *= -1.0;

  const CMat pc = p.cast<cplx>();
  const CVec eig = (pc.transpose() * m2 * pc).diagonal();
  CVec d(4);
  for (int k = 0; k < 4; ++k) d(k) = std::sqrt(eig(k));
  if (std::real(d.prod()) < 0) d(0) = -d(0);

  const CMat k1 = up * pc * d.cwiseInverse().asDiagonal();
  const CMat k2 = pc.transpose();
  const CMat local_after = b * k1 * b.adjoint();
  const CMat local_before = b * k2 * b.adjoint();

  KakDecomposition out;
  std::tie(out.after_a, out.after_b) = detail::factor_tensor_product(local_after);
  std::tie(out.before_a, out.before_b) = detail::factor_tensor_product(local_before);

  // Solve theta_j = cx dxx_j + cy dyy_j + cz dzz_j + phi in the magic basis.
  const CVec dxx = (b.adjoint() * kron(pauli::X(), pauli::X()) * b).diagonal();
  const CVec dyy = (b.adjoint() * kron(pauli::Y(), pauli::Y()) * b).diagonal();
  const CVec dzz = (b.adjoint() * kron(pauli::Z(), pauli::Z()) * b).diagonal();
  RMat a(4, 4);
  RVec theta(4);
  for (int j = 0; j < 4; ++j) {
    a(j, 0) = dxx(j).real();
    a(j, 1) = dyy(j).real();
    a(j, 2) = dzz(j).real();
    a(j, 3) = 1.0;
    theta(j) = std::arg(d(j));
  }
  const RVec coef = a.fullPivLu().solve(theta);
  out.cx = coef(0);
  out.cy = coef(1);
  out.cz = coef(2);
  return out;
}

namespace detail {

/// exp(i c Z(x)Z) on (q0, q1) as CNOT, Rz(-2c), CNOT.
inline void emit_zz(std::vector<Gate>& out, int q0, int q1, double c, int group) {
  out.push_back(Gate::cnot(q0, q1, group));
  out.push_back(Gate::rz(q1, -2.0 * c, group));
  out.push_back(Gate::cnot(q0, q1, group));
}

/// Merge runs of consecutive single-qubit unitaries acting on the same qubit.
inline std::vector<Gate> fuse_single_qubit(const std::vector<Gate>& in, int n_qubits) {
  std::vector<Gate> out;
  std::vector<int> pending(static_cast<std::size_t>(n_qubits), -1);
  auto flush = [&](int q) {
    pending[static_cast<std::size_t>(q)] = -1;
  };
  for (const auto& g : in) {
    if (g.is_single_qubit()) {
      const int q = g.qubits[0];
      int& slot = pending[static_cast<std::size_t>(q)];
      if (slot >= 0) {
        Gate& prev = out[static_cast<std::size_t>(slot)];
        prev = Gate::unitary(g.local_matrix() * prev.local_matrix(), {q}, "u", prev.group);
      } else {
        out.push_back(Gate::unitary(g.local_matrix(), {q}, "u", g.group));
        slot = static_cast<int>(out.size()) - 1;
      }
    } else {
      for (int q : g.qubits) flush(q);
      out.push_back(g);
    }
  }
  return out;
}

}  // namespace detail

/// Gate sequence on (q0, q1) realizing a 4x4 unitary up to global phase with at most 6 CNOTs.
inline std::vector<Gate> decompose_two_qubit(const CMat& u, int q0, int q1, int group = -1) {
  const KakDecomposition k = kak_decompose(u);
  const CMat h = gates::h();
  const CMat w = gates::rx(-kPi / 2.0);  // w Z w^dagger = Y
  std::vector<Gate> seq;
  seq.push_back(Gate::unitary(k.before_a, {q0}, "u", group));
  seq.push_back(Gate::unitary(k.before_b, {q1}, "u", group));
  constexpr double eps = 1e-12;
  if (std::abs(k.cx) > eps) {
    seq.push_back(Gate::unitary(h, {q0}, "u", group));
    seq.push_back(Gate::unitary(h, {q1}, "u", group));
    detail::emit_zz(seq, q0, q1, k.cx, group);
    seq.push_back(Gate::unitary(h, {q0}, "u", group));
    seq.push_back(Gate::unitary(h, {q1}, "u", group));
  }
  if (std::abs(k.cy) > eps) {
    seq.push_back(Gate::unitary(w.adjoint(), {q0}, "u", group));
    seq.push_back(Gate::unitary(w.adjoint(), {q1}, "u", group));
    detail::emit_zz(seq, q0, q1, k.cy, group);
    seq.push_back(Gate::unitary(w, {q0}, "u", group));
    seq.push_back(Gate::unitary(w, {q1}, "u", group));
  }
  if (std::abs(k.cz) > eps) detail::emit_zz(seq, q0, q1, k.cz, group);
  seq.push_back(Gate::unitary(k.after_a, {q0}, "u", group));
  seq.push_back(Gate::unitary(k.after_b, {q1}, "u", group));

  const int n = std::max(q0, q1) + 1;
  std::vector<Gate> out;
  for (const auto& g : detail::fuse_single_qubit(seq, n)) {
    if (g.is_single_qubit()) {
      for (auto& r : decompose_single_qubit(g.local_matrix(), g.qubits[0], group)) out.push_back(std::move(r));
    } else {
      out.push_back(g);
    }
  }
  return out;
}

/// Lower a circuit to {Rx, Rz, CNOT}. Basis gates pass through unchanged; the
/// composed unitary is preserved up to global phase. Group tags are kept.
inline Circuit transpile(const Circuit& circuit) {
  Circuit out(circuit.n_qubits, circuit.tag);
  for (const auto& g : circuit.gates) {
    if (g.is_basis()) {
      out.add(g);
      continue;
    }
    if (g.arity() == 1) {
      for (auto& r : decompose_single_qubit(g.matrix, g.qubits[0], g.group)) out.add(std::move(r));
    } else if (g.arity() == 2) {
      for (auto& r : decompose_two_qubit(g.matrix, g.qubits[0], g.qubits[1], g.group)) out.add(std::move(r));
    } else {
      throw std::invalid_argument("transpile: unsupported gate arity " + std::to_string(g.arity()));
    }
  }
  return out;
}

}  // namespace daem
