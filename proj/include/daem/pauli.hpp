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

#include <bit>
#include <string>
#include <vector>

namespace daem {

/// Pauli string with explicit support, e.g. "XZ" on qubits {1, 2}.
struct PauliObservable {
  std::string paulis;
  std::vector<int> qubits;

  PauliObservable() = default;
  PauliObservable(std::string p, std::vector<int> q) : paulis(std::move(p)), qubits(std::move(q)) {
    if (paulis.size() != qubits.size()) throw std::invalid_argument("Pauli string and support differ in length");
    for (char c : paulis)
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') throw std::invalid_argument("invalid Pauli label");
  }

  CMat local_matrix() const {
    std::vector<CMat> f;
    for (char c : paulis) f.push_back(pauli::by_label(c));
    return kron_all(f);
  }

  CMat dense(int n_qubits) const {
    check_qubits(qubits, n_qubits);
    return embed_operator(local_matrix(), qubits, n_qubits);
  }

  std::string label() const {
    std::string s;
    for (std::size_t i = 0; i < paulis.size(); ++i) {
      if (i) s += ' ';
      s += paulis[i];
      s += std::to_string(qubits[i]);
    }
    return s;
  }
};

/// The nine non-identity two-local products on each nearest-neighbour pair (i, i+1).
inline std::vector<PauliObservable> nearest_neighbour_paulis(int n_qubits) {
  static constexpr char kLabels[] = {'X', 'Y', 'Z'};
  std::vector<PauliObservable> out;
  for (int i = 0; i + 1 < n_qubits; ++i)
    for (char a : kLabels)
      for (char b : kLabels) out.emplace_back(std::string{a, b}, std::vector<int>{i, i + 1});
  return out;
}

namespace detail {
inline void check_real(cplx v) {
  if (std::abs(v.imag()) > 1e-10)
    throw std::runtime_error("expectation has imaginary residue " + std::to_string(v.imag()));
}
}  // namespace detail

/// Re tr(M rho); fails if the imaginary residue exceeds 1e-10.
inline double expectation(const DensityMatrix& state, const CMat& observable) {
  if (observable.rows() != state.dim() || observable.cols() != state.dim())
    throw std::invalid_argument("observable dimension does not match state");
  const cplx v = (observable.cwiseProduct(state.matrix().transpose())).sum();
  detail::check_real(v);
  return v.real();
}

/// tr(P rho) without forming P: sum_m c(m) rho(m, m xor flip).
inline double expectation(const DensityMatrix& state, const PauliObservable& obs) {
  const int n = state.num_qubits();
  check_qubits(obs.qubits, n);
  std::size_t flip = 0, zmask = 0, ymask = 0;
  int n_y = 0;
  for (std::size_t i = 0; i < obs.paulis.size(); ++i) {
    const std::size_t bit = qubit_mask(obs.qubits[i], n);
    switch (obs.paulis[i]) {
      case 'X': flip |= bit; break;
      case 'Y': flip |= bit; ymask |= bit; ++n_y; break;
      case 'Z': zmask |= bit; break;
      default: break;
    }
  }
  // P|m> = c(m)|m^flip>, c(m) = i^{n_y} (-1)^{popcount(m & (z|y))}
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = kIPow[n_y % 4];
  const std::size_t sign_mask = zmask | ymask;
  cplx acc{0.0, 0.0};
  const auto dim = static_cast<std::size_t>(state.dim());
  const CMat& rho = state.matrix();
  for (std::size_t m = 0; m < dim; ++m) {
    const double sign = (std::popcount(m & sign_mask) & 1) ? -1.0 : 1.0;
    acc += sign * rho(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m ^ flip));
  }
  acc *= base;
  detail::check_real(acc);
  return acc.real();
}

}  // namespace daem
