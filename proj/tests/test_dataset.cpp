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

#include "daem/dataset/construct.hpp"
#include "daem/dataset/ensembles.hpp"
#include "daem/process/qaoa.hpp"
#include "daem/process/swap_test.hpp"
#include "daem/process/vqe.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace daem;

namespace {

std::vector<double> random_angles(std::size_t n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> th(n);
  for (auto& x : th) x = u(rng);
  return th;
}

CMat random_hermitian(Eigen::Index dim, Rng& rng) {
  const CMat g = complex_gaussian(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

QubitExperiment vqe_experiment(std::vector<double> levels, std::uint64_t seed = 7) {
  QubitExperiment e;
  e.name = "vqe";
  for (double g : {0.4, 0.8}) {
    const Circuit c = build_vqe(4, 2, random_angles(24, static_cast<std::uint64_t>(g * 10)), g);
    e.tasks.push_back({c, build_fiducial(c)});
  }
  e.levels = std::move(levels);
  e.measurements = nearest_neighbour_measurements(4);
  e.na_input = ensembles::ginibre(4);
  e.em_input = ensembles::fixed(DensityMatrix::zero_state(4));
  e.n_train = 6;
  e.n_val = 2;
  e.seed = seed;
  return e;
}

std::string dump(const std::vector<DatasetSample>& s) {
  std::ostringstream out;
  write_jsonl(out, s);
  return out.str();
}

}  // namespace

TEST(Fiducial, NoCnotsGivesIdentity) {
  Circuit c(2);
  c.add(Gate::rx(0, 0.3)).add(Gate::rz(1, -1.2)).add(Gate::rx(1, 0.7));
  const FiducialProcess f = build_fiducial(c);
  EXPECT_LT((f.u_eff() - CMat::Identity(4, 4)).norm(), 1e-15);
  EXPECT_EQ(f.circuit().gates.size(), 3u);
  const PauliObservable xz("XZ", {0, 1});
  EXPECT_LT((f.conjugate(xz) - xz.dense(2)).norm(), 1e-15);
}

TEST(Fiducial, QaoaCnotPairsCancel) {
  const std::vector<double> gm = {0.4, 1.1}, bt = {0.3, -0.8};
  const FiducialProcess f = build_fiducial(build_qaoa(Graph::ring(6), 2, gm, bt));
  // dense product of the remaining CNOTs
  CMat u = CMat::Identity(64, 64);
  for (const Gate& g : f.circuit().gates)
    if (g.kind == GateKind::CNOT) u = embed_operator(gates::cnot(), g.qubits, 6) * u;
  EXPECT_LT((u - CMat::Identity(64, 64)).norm(), 1e-12);
  EXPECT_LT((f.u_eff() - u).norm(), 1e-12);
}

TEST(Fiducial, VqeDualityAndTemplate) {
  const Circuit c = build_vqe(4, 2, random_angles(24, 3));
  const FiducialProcess f = build_fiducial(c);
  ASSERT_EQ(f.circuit().gates.size(), c.gates.size());
  CMat u = CMat::Identity(16, 16);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& a = c.gates[i];
    const Gate& b = f.circuit().gates[i];
    EXPECT_EQ(a.qubits, b.qubits);
    EXPECT_EQ(a.group, b.group);
    if (a.kind == GateKind::CNOT) u = embed_operator(gates::cnot(), a.qubits, 4) * u;
    else EXPECT_LT((b.local_matrix() - CMat::Identity(2, 2)).norm(), 1e-15);
  }
  EXPECT_LT((f.u_eff() - u).norm(), 1e-12);
  auto rng = make_rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = random_mixed(4, rng);
    const CMat m = random_hermitian(16, rng);
    const DensityMatrix out = run_circuit(rho, f.circuit());
    EXPECT_NEAR(expectation(out, m), expectation(rho, f.conjugate(m)), 1e-10);
  }
  Circuit raw(2);
  raw.add(Gate::unitary(gates::h(), {0}));
  EXPECT_THROW(build_fiducial(raw), std::invalid_argument);
}

TEST(SymmetricState, EigenspaceAndComplementSymmetry) {
  auto rng = make_rng(42);
  const DensityMatrix one = sample_symmetric_state(1, rng);
  EXPECT_NEAR(one.matrix()(0, 1).real(), 0.5, 1e-12);
  EXPECT_NEAR(one.purity(), 1.0, 1e-12);

  const int n = 3;
  CMat xn = pauli::X();
  for (int q = 1; q < n; ++q) xn = kron(xn, pauli::X());
  CMat gram(8, 5);
  for (int s = 0; s < 5; ++s) {
    const DensityMatrix rho = sample_symmetric_state(n, rng);
    EXPECT_LT((xn * rho.matrix() - rho.matrix()).norm(), 1e-10);
    const RVec p = rho.populations();
    for (int x = 0; x < 8; ++x) EXPECT_NEAR(p(x), p(7 - x), 1e-10);
    Eigen::SelfAdjointEigenSolver<CMat> es(rho.matrix());
    gram.col(s) = es.eigenvectors().col(7);
  }
  // 2^{n-1} + 1 vectors in a 2^{n-1}-dimensional eigenspace
  Eigen::JacobiSVD<CMat> svd(gram);
  EXPECT_LT(svd.singularValues()(4), 1e-10);
  EXPECT_GT(svd.singularValues()(3), 1e-6);
  EXPECT_LT(trace_distance_frobenius(sample_symmetric_state(4, 9u), sample_symmetric_state(4, 9u)), 1e-15);
}

TEST(Dataset, ZeroLevelRowEqualsLabel) {
  const auto samples = construct_dataset(Phase::NoiseAwareness, vqe_experiment({0.0}));
  ASSERT_EQ(samples.size(), 8u * 27u);
  for (const auto& s : samples) {
    ASSERT_EQ(s.P.size(), 1u);
    EXPECT_NEAR(s.P[0][0], s.p0[0], 1e-10);
  }
}

TEST(Dataset, VqeExactModeContractsWithLevel) {
  std::vector<double> grid;
  for (int k = 0; k < 13; ++k) grid.push_back(0.05 + 0.02 * k);
  const auto e = vqe_experiment(grid);
  const auto na = construct_dataset(Phase::NoiseAwareness, e);
  const auto em = construct_dataset(Phase::ErrorMitigation, e);
  ASSERT_EQ(em.size(), 2u * 27u);
  for (const auto* set : {&na, &em}) {
    double near = 0.0, far = 0.0;
    for (const auto& s : *set) {
      ASSERT_EQ(s.P.size(), 13u);
      for (const auto& row : s.P) {
        EXPECT_GE(row[0], -1.0);
        EXPECT_LE(row[0], 1.0);
      }
      near += std::abs(s.P.front()[0] - s.p0[0]);
      far += std::abs(s.P.back()[0] - s.p0[0]);
    }
    EXPECT_LT(near, far);
  }
  EXPECT_EQ(na.front().split, "train");
  EXPECT_EQ(na.back().split, "val");
  EXPECT_EQ(em.front().split, "test");
  EXPECT_EQ(na[0].g, 0.4);
  EXPECT_EQ(na[27].g, 0.8);
  // error-mitigation labels are the ideal target output on |0000>
  const DensityMatrix ideal = run_circuit(DensityMatrix::zero_state(4), e.tasks[1].target);
  EXPECT_NEAR(em[27 + 5].p0[0], expectation(ideal, e.measurements[5].observable), 1e-12);
}

TEST(Dataset, ShotsAndDeterminism) {
  auto e = vqe_experiment({0.05, 0.1, 0.15});
  e.shots = 1000;
  const std::string a = dump(construct_dataset(Phase::NoiseAwareness, e));
  e.threads = 3;
  EXPECT_EQ(dump(construct_dataset(Phase::NoiseAwareness, e)), a);
  e.seed = 8;
  EXPECT_NE(dump(construct_dataset(Phase::NoiseAwareness, e)), a);
  // sampled expectations live on the 2/shots lattice
  for (const auto& s : construct_dataset(Phase::NoiseAwareness, e))
    EXPECT_NEAR(std::remainder(s.P[0][0] * 500.0, 1.0), 0.0, 1e-9);
}

TEST(Dataset, SwapTestCountsAndLabels) {
  const Circuit c = build_swap_test(1);
  QubitExperiment e;
  e.name = "swap-test";
  e.tasks.push_back({c, build_fiducial(c)});
  e.levels = {0.05, 0.08, 0.12, 0.15};
  e.noise = NoiseModel::markovian(ChannelKind::PhaseDamping, Placement::BeforeEachBlock);
  const PauliObservable z("Z", {0});
  e.measurements = {{z, encode_observable(z.local_matrix())}};
  e.na_input = ensembles::swap_pair(1, true);
  e.em_input = ensembles::swap_pair(1, false);
  e.em_per_task = 20;
  const auto na = construct_dataset(Phase::NoiseAwareness, e);
  const auto em = construct_dataset(Phase::ErrorMitigation, e);
  EXPECT_EQ(select_split(na, "train").size(), 100u);
  EXPECT_EQ(select_split(na, "val").size(), 50u);
  EXPECT_EQ(em.size(), 20u);
  for (const auto& s : em) {
    EXPECT_GE(s.p0[0], -1e-12);
    EXPECT_LE(s.p0[0], 1.0 + 1e-12);
    EXPECT_EQ(s.observable.size(), 8u);
  }
}

TEST(Dataset, QaoaDistributions) {
  const Graph ring = Graph::ring(4);
  const std::vector<double> gm = {0.4, 0.9}, bt = {0.3, 0.2};
  const Circuit c = build_qaoa(ring, 2, gm, bt, 1.0);
  QubitExperiment e;
  e.name = "qaoa";
  e.tasks.push_back({c, build_fiducial(c)});
  e.levels = {0.05, 0.1, 0.2};
  e.noise = NoiseModel::markovian(ChannelKind::Depolarizing, Placement::PerLayer);
  e.statistic = Statistic::Distribution;
  e.na_input = ensembles::symmetric(4);
  e.em_input = ensembles::fixed(DensityMatrix::from_pure(plus_state_vector(4)));
  e.n_train = 5;
  e.n_val = 2;
  for (Phase ph : {Phase::NoiseAwareness, Phase::ErrorMitigation})
    for (const auto& s : construct_dataset(ph, e)) {
      EXPECT_EQ(s.p0.size(), 16u);
      double total = 0.0;
      for (double p : s.p0) total += p;
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (std::size_t x = 0; x < 16; ++x) EXPECT_NEAR(s.p0[x], s.p0[15 - x], 1e-10);
      for (const auto& row : s.P) {
        double t = 0.0;
        for (double p : row) t += p;
        EXPECT_NEAR(t, 1.0, 1e-12);
      }
    }
  e.shots = 10000;
  const auto sampled = construct_dataset(Phase::NoiseAwareness, e);
  for (double p : sampled[0].P[0]) EXPECT_NEAR(std::remainder(p * 10000.0, 1.0), 0.0, 1e-6);
}

TEST(Dataset, ErrorsAndJsonRoundTrip) {
  auto e = vqe_experiment({});
  EXPECT_THROW(construct_dataset(Phase::NoiseAwareness, e), std::invalid_argument);
  e.levels = {0.1, 0.05};
  EXPECT_THROW(construct_dataset(Phase::NoiseAwareness, e), std::invalid_argument);
  e.levels = {0.05, 0.1};
  e.em_input = nullptr;
  EXPECT_THROW(construct_dataset(Phase::ErrorMitigation, e), std::invalid_argument);
  e.tasks[0].fiducial = identity_fiducial(3);
  EXPECT_THROW(construct_dataset(Phase::NoiseAwareness, e), std::invalid_argument);

  const auto samples = construct_dataset(Phase::NoiseAwareness, vqe_experiment({0.05, 0.07}));
  std::stringstream io;
  write_jsonl(io, samples);
  const auto back = read_jsonl(io);
  ASSERT_EQ(back.size(), samples.size());
  EXPECT_EQ(dump(back), dump(samples));
  EXPECT_EQ(back[3].label, samples[3].label);
  const std::string line = to_json(samples[0]).dump();
  EXPECT_EQ(line.find("0.05"), std::string::npos);  // no level values in the record
  std::istringstream bad("{\"g\": 1}\n");
  EXPECT_THROW(read_jsonl(bad), std::runtime_error);
}

TEST(Dataset, CvShapesAndLabels) {
  CvExperiment e;
  e.n_records = 3;
  e.n_train_states = 2;
  e.fiducial_times = {0.0, 0.5};
  e.test_horizon = 0.1;
  e.solver.dt = 5e-3;
  const auto na = construct_dataset(Phase::NoiseAwareness, e);
  ASSERT_EQ(na.size(), 6u);
  EXPECT_EQ(select_split(na, "val").size(), 2u);
  const auto recorded = cv_recorded_states(e);
  const cv::WignerTransform wt(15);
  const auto ref = wt(recorded[1]).values;
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(na[2].p0[i], ref[i], 1e-14);
  // t0 = 0 is the identity at every loss rate
  for (const auto& row : na[2].P)
    for (std::size_t i = 0; i < ref.size(); i += 97) EXPECT_NEAR(row[i], ref[i], 1e-12);
  const auto em = construct_dataset(Phase::ErrorMitigation, e);
  ASSERT_EQ(em.size(), 3u);
  EXPECT_EQ(em[2].P.size(), 5u);
  EXPECT_EQ(em[2].p0.size(), 48u * 48u);
  EXPECT_DOUBLE_EQ(em[1].g, 0.05);
}
