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

// Zero-noise extrapolation and Clifford data regression.

#include "daem/circuit.hpp"
#include "daem/measurement.hpp"
#include "daem/noise/noise_model.hpp"
#include "daem/parallel.hpp"
#include "daem/pauli.hpp"
#include "daem/random.hpp"

#include <Eigen/QR>

namespace daem::baselines {

/// Least-squares polynomial c0 + c1 x + c2 x^2 + ...
struct ZneModel {
  std::vector<double> coefficients;
  double at(double lambda) const {
    double v = 0.0;
    for (std::size_t i = coefficients.size(); i-- > 0;) v = v * lambda + coefficients[i];
    return v;
  }
  double intercept() const { return coefficients.front(); }
};

inline ZneModel zne_fit(const std::vector<double>& levels, const std::vector<double>& values, int degree = 2) {
  if (degree < 0) throw std::invalid_argument("negative extrapolation degree");
  if (levels.size() != values.size()) throw std::invalid_argument("levels and values differ in length");
  if (levels.size() < static_cast<std::size_t>(degree) + 1)
    throw std::invalid_argument("need at least " + std::to_string(degree + 1) + " points for a degree-" +
                                std::to_string(degree) + " fit");
  std::vector<double> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw std::invalid_argument("noise levels must be distinct");
  const auto n = static_cast<Eigen::Index>(levels.size());
  Eigen::MatrixXd v(n, degree + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int d = 0; d <= degree; ++d, pw *= levels[static_cast<std::size_t>(i)]) v(i, d) = pw;
    y(i) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = v.colPivHouseholderQr().solve(y);
  return {std::vector<double>(c.data(), c.data() + c.size())};
}

/// Quadratic least-squares fit evaluated at zero noise.
inline double zne_extrapolate(const std::vector<double>& levels, const std::vector<double>& values) {
  return zne_fit(levels, values, 2).intercept();
}

/// The 24 single-qubit Cliffords modulo global phase, generated by H and S.
inline const std::vector<CMat>& clifford24() {
  static const std::vector<CMat> group = [] {
    // Clifford entries have modulus 0, 1/sqrt2 or 1: fix the phase of the first nonzero one
    auto canonical = [](CMat u) {
      for (Eigen::Index i = 0; i < u.size(); ++i)
        if (std::abs(u(i)) > 0.3) return (u * (std::abs(u(i)) / u(i))).eval();
      throw std::logic_error("zero matrix in Clifford enumeration");
    };
    std::vector<CMat> out{canonical(CMat::Identity(2, 2))};
    const CMat gens[2] = {gates::h(), gates::s()};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const CMat& g : gens) {
        const CMat cand = canonical(g * out[i]);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const CMat& m) { return (m - cand).norm() < 1e-9; });
        if (!seen) out.push_back(cand);
      }
    if (out.size() != 24) throw std::logic_error("Clifford enumeration did not close at 24 elements");
    return out;
  }();
  return group;
}

/// Distance between two single-qubit unitaries up to global phase.
inline double phase_distance(const CMat& a, const CMat& b) {
  const cplx tr = (a.adjoint() * b).trace();
  const cplx ph = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1.0);
  return (a * ph - b).norm();
}

/// Every single-qubit gate replaced by a uniform Clifford; CNOTs untouched.
inline Circuit clifford_variant(const Circuit& circuit, std::uint64_t seed) {
  if (!circuit.uses_basis_only()) throw std::invalid_argument("Clifford variants need a transpiled circuit");
  const auto& cl = clifford24();
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cl.size() - 1);
  Circuit out(circuit.n_qubits, circuit.tag);
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::CNOT) out.add(g);
    else out.add(Gate::unitary(cl[pick(rng)], g.qubits, "clifford", g.group));
  }
  return out;
}

/// exact ~ slope * noisy + intercept.
struct CdrModel {
  double slope = 1.0;
  double intercept = 0.0;
  double apply(double noisy) const { return slope * noisy + intercept; }
};

/// Ordinary least squares; a constant noisy column yields the minimum-norm solution.
inline CdrModel cdr_fit(const std::vector<double>& noisy, const std::vector<double>& exact) {
  if (noisy.size() != exact.size()) throw std::invalid_argument("noisy and exact values differ in length");
  if (noisy.size() < 2) throw std::invalid_argument("CDR needs at least 2 training points");
  const auto n = static_cast<Eigen::Index>(noisy.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = noisy[static_cast<std::size_t>(i)];
    a(i, 1) = 1.0;
    y(i) = exact[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(y);
  return {c(0), c(1)};
}

inline double cdr_apply(const CdrModel& m, double noisy) { return m.apply(noisy); }

/// Noisy and exact expectations per (variant, observable) from Clifford variants of one circuit.
struct CdrData {
  std::vector<std::vector<double>> noisy, exact;  // [observable][variant]
};

inline CdrData cdr_training_data(const Circuit& circuit, const DensityMatrix& input, const std::vector<PauliObservable>& observables,
                                 const NoiseModel& noise, double level, std::size_t n_variants, std::uint64_t seed,
                                 int threads = 1) {
  CdrData d;
  d.noisy.assign(observables.size(), std::vector<double>(n_variants));
  d.exact = d.noisy;
  parallel_for(n_variants, threads, [&](std::size_t v) {
    Rng vr = make_rng(seed, {0xCD8, v});
    const Circuit c = clifford_variant(circuit, vr());
    const DensityMatrix noisy = noise.run(input, c, level);
    const DensityMatrix exact = run_circuit(input, c);
    for (std::size_t o = 0; o < observables.size(); ++o) {
      d.noisy[o][v] = expectation(noisy, observables[o]);
      d.exact[o][v] = expectation(exact, observables[o]);
    }
  });
  return d;
}

}  // namespace daem::baselines
