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

#include "daem/noise/noisy_circuit.hpp"
#include "daem/pauli.hpp"
#include "daem/random.hpp"
#include "daem/states.hpp"

#include <gtest/gtest.h>

using namespace daem;

namespace {

std::vector<double> level_grid(double hi) {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back(hi * i / 19.0);
  return g;
}

// Brute-force Pauli sum: (1-l) rho + l/(4^N-1) sum_{P != I} P rho P.
CMat depolarize_bruteforce(const CMat& rho, double l) {
  const int n = log2_exact(static_cast<std::size_t>(rho.rows()));
  const std::size_t count = std::size_t{1} << (2 * n);
  CMat acc = CMat::Zero(rho.rows(), rho.cols());
  const char labels[] = {'I', 'X', 'Y', 'Z'};
  for (std::size_t code = 1; code < count; ++code) {
    std::vector<CMat> f;
    for (int r = 0; r < n; ++r) f.push_back(pauli::by_label(labels[(code >> (2 * (n - 1 - r))) & 3]));
    const CMat p = kron_all(f);
    acc += p * rho * p;
  }
  return (1.0 - l) * rho + l / static_cast<double>(count - 1) * acc;
}

CMat random_hermitian(Eigen::Index dim, Rng& rng) {
  const CMat a = complex_gaussian(dim, dim, rng);
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST(Kraus, CompletenessOnLevelGrid) {
  for (double l : level_grid(1.0)) {
    EXPECT_LT(amplitude_damping_channel(l, 0).completeness_error(), 1e-12);
    EXPECT_LT(depolarizing_channel(l, {0}).completeness_error(), 1e-12);
    EXPECT_LT(depolarizing_channel(l, {0, 1}).completeness_error(), 1e-12);
  }
  for (double l : level_grid(3.0)) EXPECT_LT(phase_damping_channel(l, 0).completeness_error(), 1e-12);
}

TEST(Kraus, RejectsInvalidLevels) {
  EXPECT_THROW(amplitude_damping_channel(1.5, 0), std::invalid_argument);
  EXPECT_THROW(amplitude_damping_channel(-0.1, 0), std::invalid_argument);
  EXPECT_THROW(phase_damping_channel(-0.1, 0), std::invalid_argument);
  EXPECT_NO_THROW(phase_damping_channel(4.0, 0));
  EXPECT_THROW(depolarizing(DensityMatrix::zero_state(1), 1.01), std::invalid_argument);
  EXPECT_THROW(channel_kind_from_string("bitflip"), std::invalid_argument);
}

TEST(AmplitudeDamping, ClosedForms) {
  auto rng = make_rng(1);
  const DensityMatrix rho = random_mixed(1, rng);
  EXPECT_LT(trace_distance_frobenius(amplitude_damping(rho, 0.0, 0), rho), 1e-14);
  EXPECT_LT(trace_distance_frobenius(amplitude_damping(rho, 1.0, 0), DensityMatrix::zero_state(1)), 1e-14);
  const DensityMatrix half = amplitude_damping(DensityMatrix::basis(2, 1), 0.5, 0);
  EXPECT_NEAR(half.matrix()(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(half.matrix()(1, 1).real(), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(half.matrix()(0, 1)), 0.0, 1e-14);
}

TEST(PhaseDamping, ClosedForms) {
  CVec plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix p = DensityMatrix::from_pure(plus);
  const DensityMatrix out = phase_damping(p, 0.1, 0);
  EXPECT_NEAR(out.matrix()(0, 1).real(), 0.5 * std::exp(-0.2), 1e-14);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.5, 1e-14);
  EXPECT_LT(trace_distance_frobenius(phase_damping(p, 0.0, 0), p), 1e-14);
  CMat diag = CMat::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  for (double l : level_grid(2.0))
    EXPECT_LT((phase_damping(DensityMatrix(diag), l, 0).matrix() - diag).norm(), 1e-14);
}

TEST(PhaseDamping, CompositionIsAdditive) {
  auto rng = make_rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_mixed(2, rng);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    const double a = u(rng), b = u(rng);
    const DensityMatrix two = phase_damping(phase_damping(rho, a, 1), b, 1);
    EXPECT_LT(trace_distance_frobenius(two, phase_damping(rho, a + b, 1)), 1e-10);
  }
}

TEST(Depolarizing, MatchesPauliSumAndFixedPoints) {
  auto rng = make_rng(3);
  for (int n = 1; n <= 2; ++n) {
    const double full = (std::ldexp(1.0, 2 * n) - 1.0) / std::ldexp(1.0, 2 * n);
    const DensityMatrix rho = random_mixed(n, rng);
    for (double l : level_grid(1.0))
      EXPECT_LT((depolarizing(rho, l).matrix() - depolarize_bruteforce(rho.matrix(), l)).norm(), 1e-12);
    const auto mixed = DensityMatrix::maximally_mixed(rho.dim());
    EXPECT_LT(trace_distance_frobenius(depolarizing(rho, full), mixed), 1e-12);
    EXPECT_LT(trace_distance_frobenius(depolarizing(mixed, 0.37), mixed), 1e-14);
    EXPECT_LT(trace_distance_frobenius(depolarizing(rho, 0.0), rho), 1e-14);
  }
}

TEST(Depolarizing, SubsetMatchesExplicitKraus) {
  auto rng = make_rng(4);
  const DensityMatrix rho = random_mixed(3, rng);
  for (std::vector<int> sub : {std::vector<int>{1}, std::vector<int>{0, 2}, std::vector<int>{2, 1}}) {
    const KrausChannel ch = depolarizing_channel(0.23, sub);
    const CMat ref = apply_channel(rho, ch).matrix();
    EXPECT_LT((detail::depolarize(rho.matrix(), 0.23, sub, 3) - ref).norm(), 1e-12);
  }
}

TEST(Channels, Cptp) {
  auto rng = make_rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix rho = random_mixed(3, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const DensityMatrix& out : {amplitude_damping(rho, u(rng), 2), phase_damping(rho, u(rng), 0),
                                     depolarizing(rho, u(rng)), apply_channel(rho, depolarizing_channel(u(rng), {0, 1}))}) {
      EXPECT_NEAR(out.trace(), 1.0, 1e-10);
      EXPECT_GT(out.min_eigenvalue(), -1e-8);
    }
  }
}

TEST(ConjugateObservable, ClosedForms) {
  const KrausChannel ident = custom_channel({CMat::Identity(2, 2)}, {0});
  EXPECT_LT((conjugate_observable(pauli::X(), ident) - pauli::X()).norm(), 1e-15);
  EXPECT_LT((conjugate_observable(pauli::Z(), phase_damping_channel(0.3, 0)) - pauli::Z()).norm(), 1e-14);
  EXPECT_LT((conjugate_observable(pauli::X(), phase_damping_channel(0.3, 0)) - std::exp(-0.6) * pauli::X()).norm(),
            1e-14);
}

TEST(ConjugateObservable, DualityOn200Triples) {
  auto rng = make_rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 3), qubit(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix rho = random_mixed(3, rng);
    const CMat m = random_hermitian(8, rng);
    KrausChannel ch;
    switch (pick(rng)) {
      case 0: ch = amplitude_damping_channel(u(rng), qubit(rng)); break;
      case 1: ch = phase_damping_channel(2.0 * u(rng), qubit(rng)); break;
      case 2: ch = depolarizing_channel(u(rng), {qubit(rng)}); break;
      default: ch = depolarizing_channel(u(rng), {0, 2}); break;
    }
    const double lhs = expectation(apply_channel(rho, ch), m);
    const double rhs = expectation(rho, conjugate_observable(m, ch));
    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
  }
}

TEST(NoisyCircuit, ZeroLevelIsNoiseless) {
  auto rng = make_rng(7);
  Circuit c(3);
  c.add(Gate::rx(0, 0.4, 0)).add(Gate::cnot(0, 1, 0)).add(Gate::rz(2, 1.1, 1)).add(Gate::cnot(2, 1, 1));
  const DensityMatrix rho = random_mixed(3, rng);
  const DensityMatrix clean = run_circuit(rho, c);
  for (auto kind : {ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping, ChannelKind::Depolarizing})
    for (auto place : {Placement::AfterEachGate, Placement::BeforeEachBlock, Placement::PerLayer,
                       Placement::AfterFullProcess})
      EXPECT_LT(trace_distance_frobenius(run_noisy_circuit(rho, c, {kind, 0.0, place}), clean), 1e-12);
}

TEST(NoisyCircuit, SingleGateAfterEachGateMatchesManual) {
  auto rng = make_rng(8);
  const DensityMatrix rho = random_mixed(2, rng);
  Circuit c(2);
  c.add(Gate::cnot(1, 0));
  const DensityMatrix got = run_noisy_circuit(rho, c, {ChannelKind::AmplitudeDamping, 0.2, Placement::AfterEachGate});
  DensityMatrix ref = apply_gate(rho, c.gates[0]);
  ref = amplitude_damping(ref, 0.2, 1);
  ref = amplitude_damping(ref, 0.2, 0);
  EXPECT_LT(trace_distance_frobenius(got, ref), 1e-12);

  const DensityMatrix dep = run_noisy_circuit(rho, c, {ChannelKind::Depolarizing, 0.2, Placement::AfterEachGate});
  EXPECT_LT(trace_distance_frobenius(dep, depolarizing(apply_gate(rho, c.gates[0]), 0.2)), 1e-12);
}

TEST(NoisyCircuit, BlockAndLayerPlacement) {
  auto rng = make_rng(9);
  const DensityMatrix rho = random_mixed(3, rng);
  Circuit c(3);
  c.add(Gate::cnot(0, 1, 0)).add(Gate::rx(1, 0.3, 0)).add(Gate::rz(2, 0.8, 1));
  // before each block: noise on the block's qubits ahead of its first gate
  DensityMatrix ref = apply_channel(rho, depolarizing_channel(0.1, {0, 1}));
  ref = apply_gate(apply_gate(ref, c.gates[0]), c.gates[1]);
  ref = apply_gate(apply_channel(ref, depolarizing_channel(0.1, {2})), c.gates[2]);
  EXPECT_LT(trace_distance_frobenius(
                run_noisy_circuit(rho, c, {ChannelKind::Depolarizing, 0.1, Placement::BeforeEachBlock}), ref),
            1e-12);
  // per layer: whole-register noise after the last gate of each group
  DensityMatrix lay = depolarizing(apply_gate(apply_gate(rho, c.gates[0]), c.gates[1]), 0.1);
  lay = depolarizing(apply_gate(lay, c.gates[2]), 0.1);
  EXPECT_LT(trace_distance_frobenius(run_noisy_circuit(rho, c, {ChannelKind::Depolarizing, 0.1, Placement::PerLayer}),
                                     lay),
            1e-12);
}

TEST(NoisyCircuit, AfterFullProcessMatchesObservableRoute) {
  auto rng = make_rng(10);
  const DensityMatrix rho = random_mixed(3, rng);
  Circuit c(3);
  c.add(Gate::rx(0, 0.7)).add(Gate::cnot(0, 2)).add(Gate::rz(1, -0.4)).add(Gate::cnot(1, 2));
  const DensityMatrix clean = run_circuit(rho, c);
  for (auto kind : {ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping, ChannelKind::Depolarizing}) {
    const DensityMatrix noisy = run_noisy_circuit(rho, c, {kind, 0.15, Placement::AfterFullProcess});
    for (const auto& obs : nearest_neighbour_paulis(3)) {
      const CMat m = obs.dense(3);
      EXPECT_LT(std::abs(expectation(noisy, m) - expectation(clean, conjugate_observable(m, kind, 0.15))), 1e-10);
    }
  }
}

TEST(Placement, StringRoundTrip) {
  for (auto p : {Placement::AfterEachGate, Placement::BeforeEachBlock, Placement::PerLayer,
                 Placement::AfterFullProcess})
    EXPECT_EQ(placement_from_string(to_string(p)), p);
  EXPECT_THROW(placement_from_string("sometimes"), std::invalid_argument);
}
