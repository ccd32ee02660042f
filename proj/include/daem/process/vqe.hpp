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

// Hardware-efficient VQE ansatz for the transverse-field Ising chain.

#include "daem/circuit.hpp"
#include "daem/random.hpp"
#include "daem/states.hpp"

namespace daem {

/// L layers of Rz-Rx-Rz on every qubit followed by a CNOT ladder (i, i+1).
/// theta is ordered [layer][qubit][rz, rx, rz]; gates carry their layer as group.
inline Circuit build_vqe(int n_qubits, int layers, std::span<const double> theta, double tag = 0.0) {
  if (layers < 1) throw std::invalid_argument("VQE needs at least one layer");
  if (theta.size() != static_cast<std::size_t>(3 * n_qubits * layers))
    throw std::invalid_argument("VQE expects 3*N*L parameters, got " + std::to_string(theta.size()));
  Circuit c(n_qubits, tag);
  std::size_t j = 0;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n_qubits; ++q) {
      c.add(Gate::rz(q, theta[j], l));
      c.add(Gate::rx(q, theta[j + 1], l));
      c.add(Gate::rz(q, theta[j + 2], l));
      j += 3;
    }
    for (int q = 0; q + 1 < n_qubits; ++q) c.add(Gate::cnot(q, q + 1, l));
  }
  return c;
}

struct VqeTrainConfig {
  int layers = 2;
  int iterations = 500;
  double step = 0.05;
  int restarts = 4;
  std::uint64_t seed = 0;
};

struct VqeResult {
  std::vector<double> theta;
  double energy = 0.0;
};

/// <psi(theta)| H |psi(theta)> for the ansatz on |0...0>.
inline double vqe_energy(const CMat& hamiltonian, int n_qubits, int layers, std::span<const double> theta) {
  CVec psi = CVec::Zero(static_cast<Eigen::Index>(pow2(n_qubits)));
  psi(0) = 1.0;
  psi = run_statevector(psi, build_vqe(n_qubits, layers, theta));
  return psi.dot(hamiltonian * psi).real();
}

/// Gradient descent with parameter-shift gradients from several seeded starts; the lowest energy wins.
inline VqeResult train_vqe(const IsingSpec& spec, const VqeTrainConfig& cfg) {
  spec.validate();
  if (spec.n_sites > 8) throw std::invalid_argument("VQE training is limited to N <= 8");
  const CMat h = ising_hamiltonian(spec);
  const int n = spec.n_sites;
  const std::size_t np = static_cast<std::size_t>(3 * n * cfg.layers);
  VqeResult best;
  best.energy = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(cfg.restarts, 1); ++r) {
    auto rng = make_rng(cfg.seed, {0x5651u, static_cast<std::uint64_t>(r)});
    std::uniform_real_distribution<double> init(-kPi, kPi);
    std::vector<double> theta(np);
    for (auto& x : theta) x = r == 0 ? 0.1 * init(rng) / kPi : init(rng);
    std::vector<double> grad(np);
    for (int it = 0; it < cfg.iterations; ++it) {
      for (std::size_t j = 0; j < np; ++j) {
        const double keep = theta[j];
        theta[j] = keep + kPi / 2.0;
        const double plus = vqe_energy(h, n, cfg.layers, theta);
        theta[j] = keep - kPi / 2.0;
        const double minus = vqe_energy(h, n, cfg.layers, theta);
        theta[j] = keep;
        grad[j] = 0.5 * (plus - minus);
      }
      for (std::size_t j = 0; j < np; ++j) theta[j] -= cfg.step * grad[j];
    }
    const double e = vqe_energy(h, n, cfg.layers, theta);
    if (e < best.energy) best = {theta, e};
  }
  return best;
}

}  // namespace daem
