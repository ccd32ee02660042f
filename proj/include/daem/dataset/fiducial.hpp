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

// Fiducial process of a transpiled circuit: single-qubit gates become identity
// slots (they keep their position and group so placement policies see the same
// template), CNOTs stay. Its noiseless action is the CNOT product U_eff, so the
// ideal output statistic of M equals tr(U_eff^dagger M U_eff rho) on the input.

#include "daem/circuit.hpp"
#include "daem/pauli.hpp"
#include "daem/random.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace daem {

inline constexpr int kMaxDenseQubits = 12;

class FiducialProcess {
 public:
  FiducialProcess(Circuit circuit, CMat u_eff) : circuit_(std::move(circuit)), u_eff_(std::move(u_eff)) {}

  const Circuit& circuit() const { return circuit_; }
  const CMat& u_eff() const { return u_eff_; }
  int n_qubits() const { return circuit_.n_qubits; }

  /// U_eff^dagger M U_eff for a dense observable.
  CMat conjugate(const CMat& m) const { return u_eff_.adjoint() * m * u_eff_; }

  /// Cached conjugate of a Pauli observable, keyed by its label.
  const CMat& conjugate(const PauliObservable& p) const {
    const std::string key = p.label();
    std::lock_guard lock(*mu_);
    auto it = cache_->find(key);
    if (it == cache_->end()) it = cache_->emplace(key, conjugate(p.dense(n_qubits()))).first;
    return it->second;
  }

 private:
  Circuit circuit_;
  CMat u_eff_;
  std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<std::string, CMat>> cache_ = std::make_shared<std::map<std::string, CMat>>();
};

inline FiducialProcess build_fiducial(const Circuit& circuit) {
  if (!circuit.uses_basis_only()) throw std::invalid_argument("fiducial construction needs a transpiled circuit");
  if (circuit.n_qubits > kMaxDenseQubits)
    throw std::invalid_argument("fiducial U_eff limited to " + std::to_string(kMaxDenseQubits) + " qubits");
  Circuit f(circuit.n_qubits, circuit.tag);
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::CNOT) {
      f.add(g);
    } else {
      Gate id = Gate::rz(g.qubits[0], 0.0, g.group);
      id.label = "id";
      f.add(std::move(id));
    }
  }
  CMat u = circuit_unitary(f);
  return {std::move(f), std::move(u)};
}

/// Identity process on n qubits (spin dynamics with H = I, continuous evolution echoes).
inline FiducialProcess identity_fiducial(int n_qubits, double tag = 0.0) {
  const auto dim = static_cast<Eigen::Index>(pow2(n_qubits));
  return {Circuit(n_qubits, tag), CMat::Identity(dim, dim)};
}

/// Random pure state in the +1 eigenspace of X^{(x)n}: amplitudes paired c_x = c_{~x}.
inline DensityMatrix sample_symmetric_state(int n, Rng& rng) {
  if (n < 1 || n > kMaxDenseQubits) throw std::invalid_argument("symmetric state size out of range");
  const std::size_t dim = pow2(n), mask = dim - 1;
  const CVec half = complex_gaussian(static_cast<Eigen::Index>(dim / 2), 1, rng).col(0);
  CVec psi(static_cast<Eigen::Index>(dim));
  // x < dim/2 has its top bit clear, so x and ~x cover every index once
  for (std::size_t x = 0; x < dim / 2; ++x) {
    psi(static_cast<Eigen::Index>(x)) = half(static_cast<Eigen::Index>(x));
    psi(static_cast<Eigen::Index>(x ^ mask)) = half(static_cast<Eigen::Index>(x));
  }
  return DensityMatrix::from_pure(psi);
}

inline DensityMatrix sample_symmetric_state(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_symmetric_state(n, rng);
}

}  // namespace daem
