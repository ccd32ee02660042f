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

// Application of small operators to selected qubits of a dense 2^n register.
// Qubit 0 is the most significant bit of a basis index (|q0 q1 ... q_{n-1}>).

#include "daem/linalg.hpp"

#include <span>
#include <vector>

namespace daem {

inline std::size_t qubit_mask(int qubit, int n_qubits) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

inline void check_qubits(std::span<const int> qubits, int n_qubits) {
  for (std::size_t a = 0; a < qubits.size(); ++a) {
    if (qubits[a] < 0 || qubits[a] >= n_qubits)
      throw std::out_of_range("qubit index " + std::to_string(qubits[a]) + " out of range for " +
                              std::to_string(n_qubits) + " qubits");
    for (std::size_t b = a + 1; b < qubits.size(); ++b)
      if (qubits[a] == qubits[b]) throw std::invalid_argument("repeated qubit index in operator support");
  }
}

namespace detail {

/// Register indices with every target bit cleared, and the offsets that set target pattern s.
struct LocalLayout {
  std::vector<std::size_t> bases;
  std::vector<std::size_t> offsets;

  LocalLayout(std::span<const int> qubits, int n_qubits) {
    const int k = static_cast<int>(qubits.size());
    std::size_t target_mask = 0;
    for (int q : qubits) target_mask |= qubit_mask(q, n_qubits);
    offsets.assign(pow2(k), 0);
    for (std::size_t s = 0; s < offsets.size(); ++s)
      for (int r = 0; r < k; ++r)
        if (s & (std::size_t{1} << (k - 1 - r))) offsets[s] |= qubit_mask(qubits[r], n_qubits);
    const std::size_t dim = pow2(n_qubits);
    bases.reserve(dim >> k);
    for (std::size_t b = 0; b < dim; ++b)
      if (!(b & target_mask)) bases.push_back(b);
  }
};

}  // namespace detail

/// m <- (U on qubits) * m, for a 2^n x c matrix m.
inline void apply_local_left(CMat& m, const CMat& u, std::span<const int> qubits, int n_qubits) {
  const detail::LocalLayout lay(qubits, n_qubits);
  const auto k = static_cast<Eigen::Index>(lay.offsets.size());
  if (k == 2) {
    const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    const std::size_t off = lay.offsets[1];
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      cplx* col = m.col(c).data();
      for (std::size_t b : lay.bases) {
        const cplx a0 = col[b], a1 = col[b + off];
        col[b] = u00 * a0 + u01 * a1;
        col[b + off] = u10 * a0 + u11 * a1;
      }
    }
    return;
  }
  CVec v(k), w(k);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    cplx* col = m.col(c).data();
    for (std::size_t b : lay.bases) {
      for (Eigen::Index s = 0; s < k; ++s) v(s) = col[b + lay.offsets[static_cast<std::size_t>(s)]];
      w.noalias() = u * v;
      for (Eigen::Index s = 0; s < k; ++s) col[b + lay.offsets[static_cast<std::size_t>(s)]] = w(s);
    }
  }
}

/// m <- m * (V on qubits), for an r x 2^n matrix m; whole columns are combined.
inline void apply_local_right(CMat& m, const CMat& v, std::span<const int> qubits, int n_qubits) {
  const detail::LocalLayout lay(qubits, n_qubits);
  const auto k = static_cast<Eigen::Index>(lay.offsets.size());
  CMat tmp(m.rows(), k);
  for (std::size_t b : lay.bases) {
    for (Eigen::Index s = 0; s < k; ++s)
      tmp.col(s) = m.col(static_cast<Eigen::Index>(b + lay.offsets[static_cast<std::size_t>(s)]));
    for (Eigen::Index s = 0; s < k; ++s) {
      auto dst = m.col(static_cast<Eigen::Index>(b + lay.offsets[static_cast<std::size_t>(s)]));
      dst = tmp.col(0) * v(0, s);
      for (Eigen::Index t = 1; t < k; ++t)
        if (v(t, s) != cplx{0.0, 0.0}) dst += tmp.col(t) * v(t, s);
    }
  }
}

/// U rho U^dagger with U acting on the given qubits.
inline CMat conjugate_local(const CMat& rho, const CMat& u, std::span<const int> qubits, int n_qubits) {
  CMat a = rho;
  apply_local_left(a, u, qubits, n_qubits);
  apply_local_right(a, u.adjoint(), qubits, n_qubits);
  return a;
}

/// sum_i K_i rho K_i^dagger with every K_i acting on the given qubits.
inline CMat apply_local_kraus(const CMat& rho, const std::vector<CMat>& kraus, std::span<const int> qubits,
                              int n_qubits) {
  CMat out = CMat::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out += conjugate_local(rho, k, qubits, n_qubits);
  return out;
}

/// Embed a local operator into the full register as a dense matrix.
inline CMat embed_operator(const CMat& op, std::span<const int> qubits, int n_qubits) {
  CMat m = CMat::Identity(static_cast<Eigen::Index>(pow2(n_qubits)), static_cast<Eigen::Index>(pow2(n_qubits)));
  apply_local_left(m, op, qubits, n_qubits);
  return m;
}

}  // namespace daem
