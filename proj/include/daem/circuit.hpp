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

#include "daem/density_matrix.hpp"
#include "daem/local_ops.hpp"

#include <string>
#include <vector>

namespace daem {

enum class GateKind { Rx, Rz, CNOT, Unitary };

namespace gates {
inline CMat rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  CMat m(2, 2);
  m << c, -kI * s, -kI * s, c;
  return m;
}
inline CMat rz(double theta) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = std::exp(-kI * theta / 2.0);
  m(1, 1) = std::exp(kI * theta / 2.0);
  return m;
}
inline CMat cnot() {
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1.0;
  m(2, 3) = m(3, 2) = 1.0;
  return m;
}
inline CMat h() {
  CMat m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}
inline CMat s() {
  CMat m = CMat::Identity(2, 2);
  m(1, 1) = kI;
  return m;
}
inline CMat t() {
  CMat m = CMat::Identity(2, 2);
  m(1, 1) = std::exp(kI * kPi / 4.0);
  return m;
}
inline CMat tdg() { return t().adjoint(); }
}  // namespace gates

/// One operation of a circuit. `group` tags gates that belong to the same
/// noise block or layer (-1 when ungrouped); noise placement policies use it.
struct Gate {
  GateKind kind = GateKind::Unitary;
  double angle = 0.0;
  std::vector<int> qubits;
  CMat matrix;
  int group = -1;
  std::string label;

  static Gate rx(int q, double theta, int group = -1) { return {GateKind::Rx, theta, {q}, {}, group, "rx"}; }
  static Gate rz(int q, double theta, int group = -1) { return {GateKind::Rz, theta, {q}, {}, group, "rz"}; }
  static Gate cnot(int control, int target, int group = -1) {
    return {GateKind::CNOT, 0.0, {control, target}, {}, group, "cx"};
  }
  static Gate unitary(CMat u, std::vector<int> qubits, std::string label = "u", int group = -1) {
    if (u.rows() != static_cast<Eigen::Index>(pow2(static_cast<int>(qubits.size()))) || u.rows() != u.cols())
      throw std::invalid_argument("unitary gate size does not match its qubit count");
    if (!is_unitary(u, 1e-10)) throw std::invalid_argument("gate matrix is not unitary");
    return {GateKind::Unitary, 0.0, std::move(qubits), std::move(u), group, std::move(label)};
  }

  int arity() const { return static_cast<int>(qubits.size()); }
  bool is_single_qubit() const { return qubits.size() == 1; }
  bool is_basis() const { return kind != GateKind::Unitary; }

  CMat local_matrix() const {
    switch (kind) {
      case GateKind::Rx: return gates::rx(angle);
      case GateKind::Rz: return gates::rz(angle);
      case GateKind::CNOT: return gates::cnot();
      case GateKind::Unitary: return matrix;
    }
    return matrix;
  }
};

/// Ordered gate list on n qubits plus the process tag g.
struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  double tag = 0.0;

  Circuit() = default;
  explicit Circuit(int n, double g = 0.0) : n_qubits(n), tag(g) {
    if (n < 1) throw std::invalid_argument("circuit needs at least one qubit");
  }

  Circuit& add(Gate gate) {
    check_qubits(gate.qubits, n_qubits);
    if (!std::isfinite(gate.angle)) throw std::invalid_argument("non-finite gate angle");
    gates.push_back(std::move(gate));
    return *this;
  }

  bool uses_basis_only() const {
    return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.is_basis(); });
  }

  std::size_t count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [kind](const Gate& g) { return g.kind == kind; }));
  }
};

/// rho -> U rho U^dagger for one gate.
inline DensityMatrix apply_gate(const DensityMatrix& state, const Gate& gate) {
  const int n = state.num_qubits();
  check_qubits(gate.qubits, n);
  return DensityMatrix(conjugate_local(state.matrix(), gate.local_matrix(), gate.qubits, n));
}

inline DensityMatrix run_circuit(const DensityMatrix& state, const Circuit& circuit) {
  if (state.num_qubits() != circuit.n_qubits) throw std::invalid_argument("state/circuit qubit count mismatch");
  CMat rho = state.matrix();
  for (const auto& g : circuit.gates) rho = conjugate_local(rho, g.local_matrix(), g.qubits, circuit.n_qubits);
  return DensityMatrix(std::move(rho));
}

inline CMat circuit_unitary(const Circuit& circuit) {
  const auto dim = static_cast<Eigen::Index>(pow2(circuit.n_qubits));
  CMat u = CMat::Identity(dim, dim);
  for (const auto& g : circuit.gates) apply_local_left(u, g.local_matrix(), g.qubits, circuit.n_qubits);
  return u;
}

inline CVec run_statevector(const CVec& psi, const Circuit& circuit) {
  CMat v = psi;
  for (const auto& g : circuit.gates) apply_local_left(v, g.local_matrix(), g.qubits, circuit.n_qubits);
  return v.col(0);
}

}  // namespace daem
