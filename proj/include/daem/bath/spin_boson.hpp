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

// Gate-local spin-boson environment: every gate drives its qubits for a time t
// while coupled through the summed Z of those qubits to a fresh thermal bath of
// truncated harmonic modes. The reduced map on the gate's qubits is returned as
// a Kraus channel.

#include "daem/circuit.hpp"
#include "daem/noise/channels.hpp"

#include <Eigen/Eigenvalues>

#include <cstring>
#include <map>
#include <mutex>
#include <optional>

namespace daem {

struct BathSpec {
  double alpha = 0.001;
  double s = 6.0;
  double omega_c = 5.0;
  double beta = 1.0;

  void validate() const {
    if (!(alpha >= 0.0) || !(s >= 0.0) || !(omega_c > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) ||
        !std::isfinite(beta))
      throw std::invalid_argument("bath spec requires alpha >= 0, s >= 0, omega_c > 0, beta > 0");
  }

  /// J(w) = alpha wc^{1-s} w^s e^{-w/wc}
  double spectral_density(double w) const {
    return alpha * std::pow(omega_c, 1.0 - s) * std::pow(w, s) * std::exp(-w / omega_c);
  }
};

struct BathModes {
  std::vector<double> omegas;
  std::vector<double> couplings;
  int n_max = 3;
  double beta = 1.0;

  int size() const { return static_cast<int>(omegas.size()); }
  std::size_t bath_dim() const {
    std::size_t d = 1;
    for (int k = 0; k < size(); ++k) d *= static_cast<std::size_t>(n_max + 1);
    return d;
  }
};

/// Uniform grid of M cells over (0, w_max] sampled at cell midpoints, lambda_k^2 = J(w_k) dw.
inline BathModes discretize_bath(const BathSpec& spec, int modes, double omega_max, int n_max) {
  spec.validate();
  if (modes < 1) throw std::invalid_argument("bath needs at least one mode");
  if (!(omega_max > 0.0)) throw std::invalid_argument("omega_max must be positive");
  if (n_max < 1) throw std::invalid_argument("Fock cutoff n_max must be >= 1");
  BathModes out;
  out.n_max = n_max;
  out.beta = spec.beta;
  const double dw = omega_max / modes;
  for (int k = 0; k < modes; ++k) {
    const double w = (k + 0.5) * dw;
    out.omegas.push_back(w);
    out.couplings.push_back(std::sqrt(spec.spectral_density(w) * dw));
  }
  return out;
}

/// Gamma(t) = sum_k 4 lambda_k^2 coth(beta w_k / 2)(1 - cos w_k t) / w_k^2 for an untruncated bath.
inline double dephasing_exponent(const BathModes& modes, double t) {
  double g = 0.0;
  for (int k = 0; k < modes.size(); ++k) {
    const double w = modes.omegas[static_cast<std::size_t>(k)];
    const double l = modes.couplings[static_cast<std::size_t>(k)];
    g += 4.0 * l * l / std::tanh(modes.beta * w / 2.0) * (1.0 - std::cos(w * t)) / (w * w);
  }
  return g;
}

/// Truncated Boltzmann weights e^{-beta w n} / Z for n = 0..n_max.
inline RVec mode_gibbs_populations(double omega, double beta, int n_max) {
  RVec p(n_max + 1);
  for (int n = 0; n <= n_max; ++n) p(n) = std::exp(-beta * omega * n);
  return p / p.sum();
}

inline RVec bath_gibbs_populations(const BathModes& modes) {
  RVec p = RVec::Ones(1);
  for (int k = 0; k < modes.size(); ++k) {
    const RVec pk = mode_gibbs_populations(modes.omegas[static_cast<std::size_t>(k)], modes.beta, modes.n_max);
    RVec next(p.size() * pk.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) next.segment(i * pk.size(), pk.size()) = p(i) * pk;
    p = std::move(next);
  }
  return p;
}

inline constexpr std::size_t kJointDimBudget = std::size_t{1} << 14;

/// Product Gibbs state of the bath, dense; bounded by the joint dimension budget.
inline DensityMatrix gibbs_state(const BathModes& modes) {
  const std::size_t d = modes.bath_dim();
  if (d > kJointDimBudget)
    throw std::invalid_argument("bath dimension " + std::to_string(d) + " exceeds budget " +
                                std::to_string(kJointDimBudget));
  const RVec p = bath_gibbs_populations(modes);
  return DensityMatrix(CMat(p.cast<cplx>().asDiagonal()));
}

/// System Hamiltonian whose evolution for time t realizes the gate exactly (up to global phase).
inline CMat gate_hamiltonian(const Gate& gate, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("gate evolution time must be positive");
  switch (gate.kind) {
    case GateKind::Rx: return (gate.angle / (2.0 * t)) * pauli::X();
    case GateKind::Rz: return (gate.angle / (2.0 * t)) * pauli::Z();
    case GateKind::CNOT: {
      const CMat i2 = pauli::I();
      return (kPi / 4.0 / t) * (-kron(pauli::Z(), i2) + kron(pauli::Z(), pauli::X()) - kron(i2, pauli::X()));
    }
    case GateKind::Unitary: return unitary_generator(gate.matrix) / t;
  }
  return {};
}

/// Collective coupling sum_q Z_q over the gate's qubits.
inline CMat gate_coupling(int arity) {
  const auto d = static_cast<Eigen::Index>(pow2(arity));
  CMat c = CMat::Zero(d, d);
  for (Eigen::Index s = 0; s < d; ++s) {
    int z = 0;
    for (int q = 0; q < arity; ++q) z += ((s >> (arity - 1 - q)) & 1) ? -1 : 1;
    c(s, s) = z;
  }
  return c;
}

namespace detail {

/// Kraus operators of the channel with Choi matrix J = sum_ab |a><b| (x) Phi(|a><b|).
inline std::vector<CMat> kraus_from_choi(const CMat& choi, Eigen::Index d) {
  Eigen::SelfAdjointEigenSolver<CMat> es((choi + choi.adjoint()) / 2.0);
  std::vector<CMat> ops;
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  for (Eigen::Index e = es.eigenvalues().size() - 1; e >= 0; --e) {
    const double mu = es.eigenvalues()(e);
    if (mu <= 1e-14 * std::max(scale, 1.0)) continue;
    CMat k(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index s = 0; s < d; ++s) k(s, a) = std::sqrt(mu) * es.eigenvectors()(a * d + s, e);
    ops.push_back(std::move(k));
  }
  return ops;
}

/// Creation + annihilation b + b^dagger on one truncated mode.
inline RMat mode_quadrature(int n_max) {
  RMat x = RMat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n < n_max; ++n) x(n, n + 1) = x(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
  return x;
}

inline bool is_diagonal(const CMat& m) {
  return (m - CMat(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

/// Exact reduced map when H_S commutes with the coupling: every system basis
/// state drives each mode independently, so coherences pick up a product of
/// single-mode overlaps.
inline CMat choi_diagonal(const CMat& h_s, const CMat& coupling, const BathModes& modes, double t) {
  const Eigen::Index d = h_s.rows();
  std::vector<double> cvals;
  for (Eigen::Index s = 0; s < d; ++s) {
    const double c = coupling(s, s).real();
    if (std::find(cvals.begin(), cvals.end(), c) == cvals.end()) cvals.push_back(c);
  }
  const auto nc = cvals.size();
  CMat chi = CMat::Ones(static_cast<Eigen::Index>(nc), static_cast<Eigen::Index>(nc));
  const RMat xq = mode_quadrature(modes.n_max);
  for (int k = 0; k < modes.size(); ++k) {
    const double w = modes.omegas[static_cast<std::size_t>(k)];
    const double l = modes.couplings[static_cast<std::size_t>(k)];
    const RVec p = mode_gibbs_populations(w, modes.beta, modes.n_max);
    std::vector<CMat> u(nc);
    for (std::size_t i = 0; i < nc; ++i) {
      RMat h = cvals[i] * l * xq;
      for (int n = 0; n <= modes.n_max; ++n) h(n, n) += w * n;
      u[i] = expm_hermitian(h.cast<cplx>(), t);
    }
    const CMat rho = p.cast<cplx>().asDiagonal();
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        chi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *= (u[i] * rho * u[j].adjoint()).trace();
  }
  auto idx = [&](Eigen::Index s) {
    return static_cast<Eigen::Index>(std::find(cvals.begin(), cvals.end(), coupling(s, s).real()) - cvals.begin());
  };
  CMat choi = CMat::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const cplx phase = std::exp(-kI * (h_s(a, a).real() - h_s(b, b).real()) * t);
      choi(a * d + a, b * d + b) = phase * chi(idx(a), idx(b));
    }
  return choi;
}

/// Reduced map by exponentiating the joint Hamiltonian on system (x) bath.
inline CMat choi_dense(const CMat& h_s, const CMat& coupling, const BathModes& modes, double t) {
  const Eigen::Index ds = h_s.rows();
  const auto db = static_cast<Eigen::Index>(modes.bath_dim());
  const Eigen::Index dim = ds * db;
  if (static_cast<std::size_t>(dim) > kJointDimBudget)
    throw std::invalid_argument("joint system-bath dimension " + std::to_string(dim) + " exceeds budget " +
                                std::to_string(kJointDimBudget));
  // bath operators, mode 0 most significant
  const int m = modes.size();
  const Eigen::Index dm = modes.n_max + 1;
  RVec hb = RVec::Zero(db);
  RMat xb = RMat::Zero(db, db);
  for (int k = 0; k < m; ++k) {
    Eigen::Index stride = 1;
    for (int r = k + 1; r < m; ++r) stride *= dm;
    const double w = modes.omegas[static_cast<std::size_t>(k)];
    const double l = modes.couplings[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < db; ++i) {
      const Eigen::Index n = (i / stride) % dm;
      hb(i) += w * static_cast<double>(n);
      if (n + 1 < dm) {
        const double v = l * std::sqrt(static_cast<double>(n + 1));
        xb(i, i + stride) += v;
        xb(i + stride, i) += v;
      }
    }
  }
  CMat h = CMat::Zero(dim, dim);
  for (Eigen::Index a = 0; a < ds; ++a)
    for (Eigen::Index b = 0; b < ds; ++b) {
      if (h_s(a, b) != cplx{0.0, 0.0}) h.block(a * db, b * db, db, db).diagonal().array() += h_s(a, b);
      if (coupling(a, b) != cplx{0.0, 0.0}) h.block(a * db, b * db, db, db) += coupling(a, b) * xb.cast<cplx>();
    }
  for (Eigen::Index a = 0; a < ds; ++a) h.block(a * db, a * db, db, db).diagonal() += hb.cast<cplx>();

  CMat u;
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<RMat> es(h.real());
    const CVec ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
    const CMat v = es.eigenvectors().cast<cplx>();
    u = v * ph.asDiagonal() * v.adjoint();
  } else {
    u = expm_hermitian(h, t);
  }

  const RVec p = bath_gibbs_populations(modes);
  CMat choi = CMat::Zero(ds * ds, ds * ds);
  for (Eigen::Index j = 0; j < db; ++j) {
    if (p(j) < 1e-300) continue;
    // A_a(s', i) = <s', i| U |a, j>
    std::vector<CMat> amat(static_cast<std::size_t>(ds));
    for (Eigen::Index a = 0; a < ds; ++a) {
      CMat am(ds, db);
      for (Eigen::Index s = 0; s < ds; ++s) am.row(s) = u.col(a * db + j).segment(s * db, db).transpose();
      amat[static_cast<std::size_t>(a)] = std::move(am);
    }
    for (Eigen::Index a = 0; a < ds; ++a)
      for (Eigen::Index b = 0; b < ds; ++b)
        choi.block(a * ds, b * ds, ds, ds) +=
            p(j) * amat[static_cast<std::size_t>(a)] * amat[static_cast<std::size_t>(b)].adjoint();
  }
  return choi;
}

}  // namespace detail

/// Reduced Kraus channel of one gate coupled to a fresh Gibbs bath for time t, acting on gate.qubits.
inline KrausChannel gate_bath_channel(const Gate& gate, const BathModes& modes, double t) {
  const CMat h_s = gate_hamiltonian(gate, t);
  const CMat c = gate_coupling(gate.arity());
  const CMat choi = detail::is_diagonal(h_s) ? detail::choi_diagonal(h_s, c, modes, t)
                                             : detail::choi_dense(h_s, c, modes, t);
  return custom_channel(detail::kraus_from_choi(choi, h_s.rows()), gate.qubits);
}

inline DensityMatrix noisy_gate(const DensityMatrix& state, const Gate& gate, const BathModes& modes, double t) {
  return apply_channel(state, gate_bath_channel(gate, modes, t));
}

/// Memo of gate channels keyed on the gate's local action and t; thread-safe.
class BathChannelCache {
 public:
  explicit BathChannelCache(BathModes modes) : modes_(std::move(modes)) {}

  const BathModes& modes() const { return modes_; }

  std::vector<CMat> kraus(const Gate& gate, double t) {
    std::string key = key_of(gate, t);
    {
      std::lock_guard lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    auto ops = gate_bath_channel(gate, modes_, t).ops;
    std::lock_guard lock(mutex_);
    return table_.try_emplace(std::move(key), std::move(ops)).first->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return table_.size();
  }

 private:
  static void append(std::string& s, const void* p, std::size_t n) { s.append(static_cast<const char*>(p), n); }

  static std::string key_of(const Gate& gate, double t) {
    std::string s;
    const int kind = static_cast<int>(gate.kind);
    append(s, &kind, sizeof kind);
    append(s, &t, sizeof t);
    if (gate.kind == GateKind::Unitary)
      append(s, gate.matrix.data(), sizeof(cplx) * static_cast<std::size_t>(gate.matrix.size()));
    else
      append(s, &gate.angle, sizeof gate.angle);
    return s;
  }

  BathModes modes_;
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<CMat>> table_;
};

/// Every gate meets its own fresh bath for time t; the bath is traced out after each gate.
inline DensityMatrix run_nonmarkovian_circuit(const DensityMatrix& input, const Circuit& circuit,
                                              BathChannelCache& cache, double t) {
  if (input.num_qubits() != circuit.n_qubits) throw std::invalid_argument("state/circuit qubit count mismatch");
  CMat rho = input.matrix();
  for (const auto& g : circuit.gates) rho = apply_local_kraus(rho, cache.kraus(g, t), g.qubits, circuit.n_qubits);
  return DensityMatrix(std::move(rho));
}

inline DensityMatrix run_nonmarkovian_circuit(const DensityMatrix& input, const Circuit& circuit,
                                              const BathModes& modes, double t) {
  BathChannelCache cache(modes);
  return run_nonmarkovian_circuit(input, circuit, cache, t);
}

}  // namespace daem
