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

// Input-state ensembles for the two dataset phases.

#include "daem/dataset/construct.hpp"
#include "daem/states.hpp"

namespace daem::ensembles {

/// Ginibre mixed states of the given rank (0 = full rank).
inline InputSampler ginibre(int n_qubits, int rank = 0) {
  return [=](Rng& rng, std::size_t) { return InputDraw{random_mixed(n_qubits, rng, rank), std::nullopt}; };
}

inline InputSampler haar_pure(int n_qubits) {
  return [=](Rng& rng, std::size_t) { return InputDraw{haar_random_pure(n_qubits, rng), std::nullopt}; };
}

/// Tensor products of independent single-qubit Ginibre states of the given rank (1 = pure).
inline InputSampler product(int n_qubits, int rank = 1) {
  return [=](Rng& rng, std::size_t) {
    DensityMatrix rho = random_mixed(1, rng, rank);
    for (int q = 1; q < n_qubits; ++q) rho = rho.tensor(random_mixed(1, rng, rank));
    return InputDraw{rho, std::nullopt};
  };
}

/// Alternates between the given ensembles by state index.
inline InputSampler alternating(std::vector<InputSampler> parts) {
  if (parts.empty()) throw std::invalid_argument("alternating ensemble needs at least one part");
  return [parts = std::move(parts)](Rng& rng, std::size_t i) { return parts[i % parts.size()](rng, i); };
}

inline InputSampler symmetric(int n_qubits) {
  return [=](Rng& rng, std::size_t) { return InputDraw{sample_symmetric_state(n_qubits, rng), std::nullopt}; };
}

inline InputSampler fixed(DensityMatrix state) {
  return [state = std::move(state)](Rng&, std::size_t) { return InputDraw{state, std::nullopt}; };
}

/// Swap-test register: ancilla (random pure, or |0> for the target run) then two Haar registers.
inline InputSampler swap_pair(int register_size, bool random_ancilla) {
  return [=](Rng& rng, std::size_t) {
    const DensityMatrix anc = random_ancilla ? haar_random_pure(1, rng) : DensityMatrix::zero_state(1);
    const DensityMatrix a = haar_random_pure(register_size, rng);
    const DensityMatrix b = haar_random_pure(register_size, rng);
    return InputDraw{anc.tensor(a).tensor(b), std::nullopt};
  };
}

/// Ground states of Ising chains with fixed field and J drawn uniformly from [j_lo, j_hi]; tag = J.
inline InputSampler ising_ground(int n_sites, double field_g, double j_lo, double j_hi) {
  if (!(j_hi >= j_lo)) throw std::invalid_argument("empty coupling range");
  return [=](Rng& rng, std::size_t) {
    std::uniform_real_distribution<double> u(j_lo, j_hi);
    const double j = u(rng);
    return InputDraw{ground_state({n_sites, j, field_g}).state, j};
  };
}

}  // namespace daem::ensembles
