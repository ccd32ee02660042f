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

// Markovian noise as Kraus maps and the Heisenberg-picture dual used to move
// noise from the state onto the observable.

#include "daem/density_matrix.hpp"
#include "daem/local_ops.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace daem {

enum class ChannelKind { AmplitudeDamping, PhaseDamping, Depolarizing, Custom };

inline std::string to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::AmplitudeDamping: return "amplitude-damping";
    case ChannelKind::PhaseDamping: return "phase-damping";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::Custom: return "custom";
  }
  return "custom";
}

inline ChannelKind channel_kind_from_string(std::string_view s) {
  if (s == "amplitude-damping") return ChannelKind::AmplitudeDamping;
  if (s == "phase-damping") return ChannelKind::PhaseDamping;
  if (s == "depolarizing") return ChannelKind::Depolarizing;
  throw std::invalid_argument("unknown channel kind '" + std::string(s) + "'");
}

struct KrausChannel {
  ChannelKind kind = ChannelKind::Custom;
  double level = 0.0;
  std::vector<CMat> ops;
  std::vector<int> qubits;

  /// max |sum K^dagger K - I|
  double completeness_error() const {
    if (ops.empty()) return 0.0;
    CMat acc = CMat::Zero(ops.front().cols(), ops.front().cols());
    for (const auto& k : ops) acc += k.adjoint() * k;
    return (acc - CMat::Identity(acc.rows(), acc.cols())).cwiseAbs().maxCoeff();
  }
};

inline void validate_level(ChannelKind kind, double level) {
  if (!std::isfinite(level) || level < 0.0) throw std::invalid_argument("noise level must be finite and >= 0");
  if ((kind == ChannelKind::AmplitudeDamping || kind == ChannelKind::Depolarizing) && level > 1.0)
    throw std::invalid_argument(to_string(kind) + " level must lie in [0, 1]");
}

/// V0 = diag(1, sqrt(1-l)), V1 = [[0, sqrt(l)], [0, 0]]
inline KrausChannel amplitude_damping_channel(double level, int qubit) {
  validate_level(ChannelKind::AmplitudeDamping, level);
  CMat v0 = CMat::Zero(2, 2), v1 = CMat::Zero(2, 2);
  v0(0, 0) = 1.0;
  v0(1, 1) = std::sqrt(1.0 - level);
  v1(0, 1) = std::sqrt(level);
  return {ChannelKind::AmplitudeDamping, level, {v0, v1}, {qubit}};
}

/// V0 = diag(1, e^{-2l}), V1 = diag(0, sqrt(1 - e^{-4l})); coherences scale by e^{-2l}.
inline KrausChannel phase_damping_channel(double level, int qubit) {
  validate_level(ChannelKind::PhaseDamping, level);
  CMat v0 = CMat::Zero(2, 2), v1 = CMat::Zero(2, 2);
  v0(0, 0) = 1.0;
  v0(1, 1) = std::exp(-2.0 * level);
  v1(1, 1) = std::sqrt(1.0 - std::exp(-4.0 * level));
  return {ChannelKind::PhaseDamping, level, {v0, v1}, {qubit}};
}

/// Explicit Kraus form sqrt(1-l) I, sqrt(l/(4^k-1)) P over the 4^k - 1 non-identity Paulis.
inline KrausChannel depolarizing_channel(double level, std::vector<int> qubits) {
  validate_level(ChannelKind::Depolarizing, level);
  const int k = static_cast<int>(qubits.size());
  if (k < 1 || k > 4) throw std::invalid_argument("explicit depolarizing Kraus form supports 1..4 qubits");
  const std::size_t n_paulis = std::size_t{1} << (2 * k);
  KrausChannel ch{ChannelKind::Depolarizing, level, {}, std::move(qubits)};
  const double w = level / static_cast<double>(n_paulis - 1);
  static constexpr char kLabels[] = {'I', 'X', 'Y', 'Z'};
  for (std::size_t code = 0; code < n_paulis; ++code) {
    std::vector<CMat> f;
    for (int r = 0; r < k; ++r) f.push_back(pauli::by_label(kLabels[(code >> (2 * (k - 1 - r))) & 3]));
    const CMat p = kron_all(f);
    ch.ops.push_back(code == 0 ? CMat(std::sqrt(1.0 - level) * p) : CMat(std::sqrt(w) * p));
  }
  return ch;
}

inline KrausChannel custom_channel(std::vector<CMat> ops, std::vector<int> qubits) {
  return {ChannelKind::Custom, 0.0, std::move(ops), std::move(qubits)};
}

namespace detail {

/// rho -> I_S / 2^k (x) tr_S(rho) on the subset S.
inline CMat replace_with_maximally_mixed(const CMat& rho, std::span<const int> subset, int n_qubits) {
  std::size_t smask = 0;
  for (int q : subset) smask |= qubit_mask(q, n_qubits);
  const auto dim = static_cast<std::size_t>(rho.rows());
  const double norm = 1.0 / static_cast<double>(pow2(static_cast<int>(subset.size())));
  // enumerate all assignments of the subset bits
  std::vector<std::size_t> sub_patterns{0};
  for (int q : subset) {
    const std::size_t bit = qubit_mask(q, n_qubits);
    const std::size_t cur = sub_patterns.size();
    for (std::size_t i = 0; i < cur; ++i) sub_patterns.push_back(sub_patterns[i] | bit);
  }
  CMat out = CMat::Zero(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & smask) != (j & smask)) continue;
      const std::size_t ri = i & ~smask, rj = j & ~smask;
      cplx acc{0.0, 0.0};
      for (std::size_t s : sub_patterns)
        acc += rho(static_cast<Eigen::Index>(ri | s), static_cast<Eigen::Index>(rj | s));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = norm * acc;
    }
  }
  return out;
}

/// Joint depolarizing on `subset` through the twirl identity sum_{P != I} P rho P = 4^k T(rho) - rho,
/// T the replacement by the maximally mixed state on the subset.
inline CMat depolarize(const CMat& rho, double level, std::span<const int> subset, int n_qubits) {
  const int k = static_cast<int>(subset.size());
  const double four_k = std::ldexp(1.0, 2 * k);
  const double keep = 1.0 - level - level / (four_k - 1.0);
  const double mix = level * four_k / (four_k - 1.0);
  if (k == n_qubits) {
    const double dim = std::ldexp(1.0, n_qubits);
    CMat out = keep * rho;
    out.diagonal().array() += mix * rho.trace() / dim;
    return out;
  }
  return keep * rho + mix * replace_with_maximally_mixed(rho, subset, n_qubits);
}

}  // namespace detail

/// Apply a channel to the qubits it names.
inline DensityMatrix apply_channel(const DensityMatrix& state, const KrausChannel& ch) {
  const int n = state.num_qubits();
  check_qubits(ch.qubits, n);
  return DensityMatrix(apply_local_kraus(state.matrix(), ch.ops, ch.qubits, n));
}

inline DensityMatrix amplitude_damping(const DensityMatrix& state, double level, int qubit) {
  return apply_channel(state, amplitude_damping_channel(level, qubit));
}

inline DensityMatrix phase_damping(const DensityMatrix& state, double level, int qubit) {
  return apply_channel(state, phase_damping_channel(level, qubit));
}

/// rho -> (1-l) rho + l/(4^N-1) sum_{P != I} P rho P over all N qubits (closed form).
inline DensityMatrix depolarizing(const DensityMatrix& state, double level) {
  validate_level(ChannelKind::Depolarizing, level);
  const int n = state.num_qubits();
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
  return DensityMatrix(detail::depolarize(state.matrix(), level, all, n));
}

/// Heisenberg dual M~ = sum_i K_i^dagger M K_i with the Kraus operators acting on
/// ch.qubits of a register matching M's dimension; tr(M ch(rho)) = tr(M~ rho).
inline CMat conjugate_observable(const CMat& observable, const KrausChannel& ch) {
  const int n = log2_exact(static_cast<std::size_t>(observable.rows()));
  check_qubits(ch.qubits, n);
  CMat out = CMat::Zero(observable.rows(), observable.cols());
  for (const auto& k : ch.ops) {
    const CMat kd = k.adjoint();
    CMat b = observable;
    apply_local_left(b, kd, ch.qubits, n);  // K^dagger M
    CMat c = b.adjoint();
    apply_local_left(c, kd, ch.qubits, n);  // K^dagger (K^dagger M)^dagger
    out += c.adjoint();                     // K^dagger M K
  }
  return out;
}

}  // namespace daem
