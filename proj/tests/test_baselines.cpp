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

#include "daem/baselines.hpp"
#include "daem/process/vqe.hpp"
#include "daem/states.hpp"

#include <gtest/gtest.h>

using namespace daem;
using namespace daem::baselines;

namespace {

std::vector<double> vqe_grid() {
  std::vector<double> l;
  for (int k = 0; k < 13; ++k) l.push_back(0.05 + 0.02 * k);
  return l;
}

// Independent oracle: normal equations for y = c0 + c1 x + c2 x^2 solved by Cramer's rule.
double quadratic_intercept_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  long double s[5] = {0, 0, 0, 0, 0}, t[3] = {0, 0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double p = 1;
    for (int k = 0; k < 5; ++k, p *= x[i]) {
      s[k] += p;
      if (k < 3) t[k] += p * y[i];
    }
  }
  auto det3 = [](long double a, long double b, long double c, long double d, long double e, long double f, long double g,
                 long double h, long double i) { return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g); };
  const long double d = det3(s[0], s[1], s[2], s[1], s[2], s[3], s[2], s[3], s[4]);
  return static_cast<double>(det3(t[0], s[1], s[2], t[1], s[2], s[3], t[2], s[3], s[4]) / d);
}

}  // namespace

TEST(Zne, Examples) {
  const auto l = vqe_grid();
  std::vector<double> quad, cst, poly;
  for (double x : l) {
    quad.push_back(0.3 - 1.7 * x + 4.2 * x * x);
    cst.push_back(-0.42);
    poly.push_back(1 - 2 * x + x * x);
  }
  EXPECT_NEAR(zne_extrapolate(l, quad), 0.3, 1e-9);
  EXPECT_NEAR(zne_extrapolate(l, cst), -0.42, 1e-12);
  EXPECT_NEAR(zne_extrapolate(l, poly), 1.0, 1e-9);
  const ZneModel m = zne_fit(l, quad);
  EXPECT_NEAR(m.coefficients[1], -1.7, 1e-8);
  EXPECT_NEAR(m.coefficients[2], 4.2, 1e-7);
  EXPECT_NEAR(m.at(0.2), 0.3 - 0.34 + 0.168, 1e-10);
}

TEST(Zne, MatchesNormalEquationsAndIsAffineEquivariant) {
  Rng rng(1);
  std::normal_distribution<double> n;
  const auto l = vqe_grid();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> y, scaled;
    for (std::size_t i = 0; i < l.size(); ++i) y.push_back(n(rng));
    const double c = 0.5 + trial;
    for (double v : y) scaled.push_back(c * v);
    const double z = zne_extrapolate(l, y);
    EXPECT_NEAR(z, quadratic_intercept_oracle(l, y), 1e-8);
    EXPECT_NEAR(zne_extrapolate(l, scaled), c * z, 1e-9 * c);
  }
}

TEST(Zne, Errors) {
  EXPECT_THROW(zne_extrapolate({0.1, 0.2}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(zne_extrapolate({0.1, 0.2, 0.2}, {1.0, 2.0, 3.0}), std::invalid_argument);
  EXPECT_THROW(zne_extrapolate({0.1, 0.2, 0.3}, {1.0, 2.0}), std::invalid_argument);
}

TEST(Clifford, GroupEnumeration) {
  const auto& g = clifford24();
  ASSERT_EQ(g.size(), 24u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_LT((g[i].adjoint() * g[i] - CMat::Identity(2, 2)).norm(), 1e-12);
    for (std::size_t j = 0; j < i; ++j) EXPECT_GT(phase_distance(g[i], g[j]), 1e-3);
  }
  // closure: every product is in the set, and each element maps Paulis to signed Paulis
  const CMat paulis[3] = {pauli::X(), pauli::Y(), pauli::Z()};
  for (const CMat& a : g) {
    for (const CMat& b : g) {
      const CMat ab = a * b;
      EXPECT_TRUE(std::any_of(g.begin(), g.end(), [&](const CMat& m) { return phase_distance(m, ab) < 1e-10; }));
    }
    for (const CMat& p : paulis) {
      const CMat q = a * p * a.adjoint();
      EXPECT_TRUE(std::any_of(std::begin(paulis), std::end(paulis), [&](const CMat& r) {
        return (q - r).norm() < 1e-10 || (q + r).norm() < 1e-10;
      }));
    }
  }
}

TEST(Clifford, Variants) {
  Circuit cnots(3, 0.0);
  cnots.add(Gate::cnot(0, 1));
  cnots.add(Gate::cnot(1, 2));
  const Circuit same = clifford_variant(cnots, 4);
  ASSERT_EQ(same.gates.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(same.gates[i].kind, GateKind::CNOT);
    EXPECT_EQ(same.gates[i].qubits, cnots.gates[i].qubits);
  }

  Rng rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<double> theta(3 * 4 * 2);
  for (auto& t : theta) t = u(rng);
  const Circuit vqe = build_vqe(4, 2, theta, 0.4);
  const Circuit a = clifford_variant(vqe, 17), b = clifford_variant(vqe, 17), c = clifford_variant(vqe, 18);
  ASSERT_EQ(a.gates.size(), vqe.gates.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    const Gate& orig = vqe.gates[i];
    EXPECT_EQ(a.gates[i].qubits, orig.qubits);
    EXPECT_EQ(a.gates[i].group, orig.group);
    if (orig.kind == GateKind::CNOT) {
      EXPECT_EQ(a.gates[i].kind, GateKind::CNOT);
      continue;
    }
    EXPECT_TRUE(std::any_of(clifford24().begin(), clifford24().end(),
                            [&](const CMat& m) { return phase_distance(m, a.gates[i].matrix) < 1e-10; }));
    EXPECT_EQ(a.gates[i].matrix, b.gates[i].matrix);
    differs |= (a.gates[i].matrix - c.gates[i].matrix).norm() > 1e-9;
  }
  EXPECT_TRUE(differs);

  // noiseless Clifford expectations of Paulis on |0000> are in {-1, 0, 1}
  const DensityMatrix zero = DensityMatrix::zero_state(4);
  const DensityMatrix out = run_circuit(zero, a);
  for (const PauliObservable& p : {PauliObservable("ZZ", {0, 1}), PauliObservable("XX", {0, 2}),
                                    PauliObservable("YZ", {1, 2}), PauliObservable("Z", {3})}) {
    const double e = expectation(out, p);
    EXPECT_LT(std::min({std::abs(e), std::abs(e - 1), std::abs(e + 1)}), 1e-10) << p.label();
  }
}

TEST(Cdr, FitExamples) {
  const std::vector<double> x{-0.8, -0.1, 0.2, 0.5, 0.9};
  CdrModel m = cdr_fit(x, x);
  EXPECT_NEAR(m.slope, 1.0, 1e-12);
  EXPECT_NEAR(m.intercept, 0.0, 1e-12);
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 0.1);
  m = cdr_fit(x, y);
  EXPECT_NEAR(m.slope, 2.0, 1e-10);
  EXPECT_NEAR(m.intercept, 0.1, 1e-10);
  EXPECT_NEAR(cdr_apply(m, 0.25), 0.6, 1e-10);

  Rng rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) {
      a.push_back(n(rng));
      b.push_back(n(rng));
    }
    const CdrModel f = cdr_fit(a, b);
    double r_fit = 0, r_id = 0;
    for (int i = 0; i < 10; ++i) {
      r_fit += std::pow(f.apply(a[i]) - b[i], 2);
      r_id += std::pow(a[i] - b[i], 2);
    }
    EXPECT_LE(r_fit, r_id + 1e-12);
  }
  EXPECT_THROW(cdr_fit({1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(cdr_fit({1.0, 2.0}, {1.0}), std::invalid_argument);
  const CdrModel flat = cdr_fit({0.3, 0.3, 0.3}, {0.1, 0.2, 0.3});
  EXPECT_NEAR(flat.apply(0.3), 0.2, 1e-10);
}

TEST(Cdr, TrainingDataUnderPhaseDamping) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<double> theta(3 * 4 * 2);
  for (auto& t : theta) t = u(rng);
  const Circuit vqe = build_vqe(4, 2, theta, 0.4);
  const DensityMatrix zero = DensityMatrix::zero_state(4);
  const std::vector<PauliObservable> obs{PauliObservable("ZZ", {0,1}), PauliObservable("XX", {0,1})};
  const NoiseModel noise = NoiseModel::markovian(ChannelKind::PhaseDamping, Placement::AfterEachGate);
  const CdrData d1 = cdr_training_data(vqe, zero, obs, noise, 0.05, 100, 9, 1);
  const CdrData d3 = cdr_training_data(vqe, zero, obs, noise, 0.05, 100, 9, 3);
  EXPECT_EQ(d1.noisy, d3.noisy);
  EXPECT_EQ(d1.exact, d3.exact);
  ASSERT_EQ(d1.noisy[0].size(), 100u);
  for (std::size_t o = 0; o < obs.size(); ++o)
    for (std::size_t v = 0; v < 100; ++v) {
      EXPECT_LE(std::abs(d1.noisy[o][v]), std::abs(d1.exact[o][v]) + 1e-12);
      EXPECT_LE(std::abs(d1.exact[o][v]), 1.0 + 1e-12);
    }
  // dephasing only shrinks Pauli expectations, so the fitted slope is at least one
  const CdrModel m = cdr_fit(d1.noisy[0], d1.exact[0]);
  EXPECT_GE(m.slope, 1.0);
}
