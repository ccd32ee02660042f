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

#include "daem/circuit.hpp"
#include "daem/noise/channels.hpp"

#include <map>
#include <set>

namespace daem {

enum class Placement { AfterEachGate, BeforeEachBlock, PerLayer, AfterFullProcess };

inline std::string to_string(Placement p) {
  switch (p) {
    case Placement::AfterEachGate: return "after-each-gate";
    case Placement::BeforeEachBlock: return "before-each-controlled-swap";
    case Placement::PerLayer: return "per-layer";
    case Placement::AfterFullProcess: return "after-full-process";
  }
  return "after-each-gate";
}

inline Placement placement_from_string(std::string_view s) {
  if (s == "after-each-gate") return Placement::AfterEachGate;
  if (s == "before-each-controlled-swap") return Placement::BeforeEachBlock;
  if (s == "per-layer") return Placement::PerLayer;
  if (s == "after-full-process") return Placement::AfterFullProcess;
  throw std::invalid_argument("unknown noise placement '" + std::string(s) + "'");
}

struct MarkovianNoise {
  ChannelKind kind = ChannelKind::Depolarizing;
  double level = 0.0;
  Placement placement = Placement::AfterEachGate;
};

/// Noise on a qubit set in place. Damping acts independently per qubit, depolarizing jointly.
inline void apply_noise_inplace(CMat& rho, ChannelKind kind, double level, std::span<const int> qubits, int n) {
  if (level == 0.0 || qubits.empty()) return;
  switch (kind) {
    case ChannelKind::AmplitudeDamping:
      for (int q : qubits) rho = apply_local_kraus(rho, amplitude_damping_channel(level, q).ops, std::array{q}, n);
      break;
    case ChannelKind::PhaseDamping:
      for (int q : qubits) rho = apply_local_kraus(rho, phase_damping_channel(level, q).ops, std::array{q}, n);
      break;
    case ChannelKind::Depolarizing: rho = detail::depolarize(rho, level, qubits, n); break;
    case ChannelKind::Custom: throw std::invalid_argument("custom channels have no level-driven placement");
  }
}

/// Circuit under Markovian noise; a level of 0 reproduces the noiseless run exactly.
/// Block placements use Gate::group; ungrouped gates (group -1) receive no block noise.
inline DensityMatrix run_noisy_circuit(const DensityMatrix& input, const Circuit& circuit, const MarkovianNoise& noise) {
  validate_level(noise.kind, noise.level);
  const int n = circuit.n_qubits;
  if (input.num_qubits() != n) throw std::invalid_argument("state/circuit qubit count mismatch");
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;

  std::map<int, std::set<int>> group_qubits;
  std::map<int, std::size_t> first_of, last_of;
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const Gate& g = circuit.gates[i];
    if (g.group < 0) continue;
    group_qubits[g.group].insert(g.qubits.begin(), g.qubits.end());
    first_of.try_emplace(g.group, i);
    last_of[g.group] = i;
  }

  CMat rho = input.matrix();
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const Gate& g = circuit.gates[i];
    if (noise.placement == Placement::BeforeEachBlock && g.group >= 0 && first_of[g.group] == i) {
      const auto& qs = group_qubits[g.group];
      const std::vector<int> support(qs.begin(), qs.end());
      apply_noise_inplace(rho, noise.kind, noise.level, support, n);
    }
    rho = conjugate_local(rho, g.local_matrix(), g.qubits, n);
    if (noise.placement == Placement::AfterEachGate) apply_noise_inplace(rho, noise.kind, noise.level, g.qubits, n);
    if (noise.placement == Placement::PerLayer && g.group >= 0 && last_of[g.group] == i)
      apply_noise_inplace(rho, noise.kind, noise.level, all, n);
  }
  if (noise.placement == Placement::AfterFullProcess) apply_noise_inplace(rho, noise.kind, noise.level, all, n);
  return DensityMatrix(std::move(rho));
}

/// Heisenberg dual of after-full-process noise over all n qubits applied to a dense observable.
inline CMat conjugate_observable(const CMat& observable, ChannelKind kind, double level) {
  validate_level(kind, level);
  const int n = log2_exact(static_cast<std::size_t>(observable.rows()));
  CMat m = observable;
  switch (kind) {
    case ChannelKind::AmplitudeDamping:
      for (int q = 0; q < n; ++q) m = conjugate_observable(m, amplitude_damping_channel(level, q));
      break;
    case ChannelKind::PhaseDamping:
      for (int q = 0; q < n; ++q) m = conjugate_observable(m, phase_damping_channel(level, q));
      break;
    case ChannelKind::Depolarizing: {
      // self-dual up to the trace term: D*(M) = keep M + mix tr(M)/2^n I
      std::vector<int> all(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
      m = detail::depolarize(m, level, all, n);
      break;
    }
    case ChannelKind::Custom: throw std::invalid_argument("custom channels have no level-driven dual");
  }
  return m;
}

}  // namespace daem
