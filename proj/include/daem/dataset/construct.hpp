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

// Dataset construction for both phases. Noise-awareness: inputs pass through
// the noisy fiducial process, labels come from measuring the input with the
// conjugated observable. Error-mitigation: inputs pass through the noisy target,
// labels are the simulated ideal statistics and serve evaluation only.

#include "daem/cv/lindblad.hpp"
#include "daem/cv/wigner.hpp"
#include "daem/dataset/fiducial.hpp"
#include "daem/dataset/sample.hpp"
#include "daem/measurement.hpp"
#include "daem/noise/noise_model.hpp"
#include "daem/parallel.hpp"

#include <functional>
#include <optional>

namespace daem {

enum class Statistic { Expectation, Distribution };

struct Measurement {
  PauliObservable observable;
  std::vector<double> encoding;
};

/// Nearest-neighbour two-local Pauli set, encoded as the 4x4 local matrix plus a one-hot pair index.
inline std::vector<Measurement> nearest_neighbour_measurements(int n_qubits) {
  std::vector<Measurement> out;
  for (const auto& p : nearest_neighbour_paulis(n_qubits))
    out.push_back({p, encode_observable(p.local_matrix(), p.qubits[0], n_qubits - 1)});
  return out;
}

struct InputDraw {
  DensityMatrix state;
  std::optional<double> tag;  // overrides the task tag when set
};

using InputSampler = std::function<InputDraw(Rng&, std::size_t index)>;

struct QubitTask {
  Circuit target;
  FiducialProcess fiducial;
};

struct QubitExperiment {
  std::string name;
  std::vector<QubitTask> tasks;
  NoiseModel noise = NoiseModel::markovian(ChannelKind::PhaseDamping, Placement::AfterEachGate);
  std::vector<double> levels;
  Statistic statistic = Statistic::Expectation;
  std::vector<Measurement> measurements;         // expectation mode
  std::vector<double> distribution_encoding{1.0};  // distribution mode
  InputSampler na_input;
  InputSampler em_input;
  std::size_t n_train = 100;
  std::size_t n_val = 50;
  std::size_t em_per_task = 1;
  int shots = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

inline void validate_level_grid(const std::vector<double>& levels) {
  if (levels.empty()) throw std::invalid_argument("noise level grid is empty");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] >= 0.0) || !std::isfinite(levels[k])) throw std::invalid_argument("noise levels must be >= 0");
    if (k > 0 && !(levels[k] > levels[k - 1])) throw std::invalid_argument("noise levels must be strictly increasing");
  }
}

namespace detail {

inline constexpr std::uint64_t kPhaseTag[2] = {0x4e41, 0x454d};

inline std::uint64_t phase_tag(Phase p) { return kPhaseTag[p == Phase::NoiseAwareness ? 0 : 1]; }

inline void check_experiment(const QubitExperiment& e, Phase phase) {
  validate_level_grid(e.levels);
  if (e.tasks.empty()) throw std::invalid_argument("experiment has no target process");
  for (const auto& t : e.tasks)
    if (t.fiducial.n_qubits() != t.target.n_qubits)
      throw std::invalid_argument("fiducial and target processes act on different registers");
  if (e.statistic == Statistic::Expectation && e.measurements.empty())
    throw std::invalid_argument("expectation experiment needs a measurement set");
  if (phase == Phase::NoiseAwareness && !e.na_input) throw std::invalid_argument("no noise-awareness input sampler");
  if (phase == Phase::ErrorMitigation && !e.em_input) throw std::invalid_argument("no error-mitigation input sampler");
  if (e.shots < 0) throw std::invalid_argument("shots must be >= 0");
}

inline double measured_expectation(double exact, int shots, Rng& rng) {
  return std::clamp(sample_pm1_mean(exact, shots, rng), -1.0, 1.0);
}

/// Samples for one input state: one per measurement (or one distribution sample).
inline std::vector<DatasetSample> samples_for_state(const QubitExperiment& e, Phase phase, std::size_t index,
                                                    const QubitTask& task, const InputDraw& in, Rng& shot_rng) {
  const Circuit& circuit = phase == Phase::NoiseAwareness ? task.fiducial.circuit() : task.target;
  std::vector<DensityMatrix> outs;
  outs.reserve(e.levels.size());
  for (double lvl : e.levels) outs.push_back(e.noise.run(in.state, circuit, lvl));

  DatasetSample base;
  base.g = in.tag.value_or(task.target.tag);
  base.experiment = e.name;
  base.phase = phase;
  base.seed = e.seed;
  base.split = phase == Phase::ErrorMitigation ? "test" : (index < e.n_train ? "train" : "val");
  // NA labels are sampled like the data; EM labels are exact simulation
  const int label_shots = phase == Phase::NoiseAwareness ? e.shots : 0;

  std::vector<DatasetSample> out;
  if (e.statistic == Statistic::Distribution) {
    DatasetSample s = base;
    s.observable = e.distribution_encoding;
    s.label = "bitstrings";
    for (const auto& o : outs) s.P.push_back(sample_distribution(o, e.shots, shot_rng));
    DensityMatrix ideal = phase == Phase::NoiseAwareness
                              ? DensityMatrix(task.fiducial.u_eff() * in.state.matrix() * task.fiducial.u_eff().adjoint())
                              : run_circuit(in.state, task.target);
    s.p0 = sample_distribution(ideal, label_shots, shot_rng);
    out.push_back(std::move(s));
    return out;
  }
  std::optional<DensityMatrix> ideal;
  if (phase == Phase::ErrorMitigation) ideal = run_circuit(in.state, task.target);
  for (const auto& m : e.measurements) {
    DatasetSample s = base;
    s.observable = m.encoding;
    s.label = m.observable.label();
    for (const auto& o : outs) s.P.push_back({measured_expectation(expectation(o, m.observable), e.shots, shot_rng)});
    const double label = phase == Phase::NoiseAwareness ? expectation(in.state, task.fiducial.conjugate(m.observable))
                                                        : expectation(*ideal, m.observable);
    s.p0 = {measured_expectation(label, label_shots, shot_rng)};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

/// Task index and input state for state index i of a phase; the same draw the dataset uses.
inline std::pair<std::size_t, InputDraw> draw_input(const QubitExperiment& e, Phase phase, std::size_t i) {
  const std::size_t task = phase == Phase::NoiseAwareness ? i % e.tasks.size() : i / e.em_per_task;
  const std::size_t local = phase == Phase::NoiseAwareness ? i : i % e.em_per_task;
  Rng state_rng = make_rng(e.seed, {detail::phase_tag(phase), i, 0});
  return {task, (phase == Phase::NoiseAwareness ? e.na_input : e.em_input)(state_rng, local)};
}

/// Noise-awareness: n_train + n_val input states, task cycled by state index.
/// Error-mitigation: em_per_task inputs for every task. Ids follow generation order.
inline std::vector<DatasetSample> construct_dataset(Phase phase, const QubitExperiment& e) {
  detail::check_experiment(e, phase);
  const std::uint64_t ptag = detail::phase_tag(phase);
  const std::size_t n_states = phase == Phase::NoiseAwareness ? e.n_train + e.n_val : e.tasks.size() * e.em_per_task;
  std::vector<std::vector<DatasetSample>> per_state(n_states);
  parallel_for(n_states, e.threads, [&](std::size_t i) {
    const auto [task, in] = draw_input(e, phase, i);
    Rng shot_rng = make_rng(e.seed, {ptag, i, 1});
    per_state[i] = detail::samples_for_state(e, phase, i, e.tasks[task], in, shot_rng);
  });
  std::vector<DatasetSample> out;
  for (auto& v : per_state)
    for (auto& s : v) {
      s.id = out.size();
      out.push_back(std::move(s));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Continuous-variable Kerr experiment

struct CvExperiment {
  std::string name = "cv-kerr";
  int n_trunc = 15;
  cplx alpha{1.5, 0.0};
  std::vector<double> levels{0.6, 0.65, 0.7, 0.75, 0.8};
  double record_loss = 0.6;  // loss rate of the trajectory the inputs are recorded from
  double record_step = 0.05;
  std::size_t n_records = 20;
  std::size_t n_train_states = 16;  // remaining recorded states go to validation
  std::vector<double> fiducial_times{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double test_step = 0.05;
  double test_horizon = 1.0;
  cv::GridSpec grid;
  cv::LindbladOptions solver;
  std::uint64_t seed = 0;
  int threads = 1;

  std::vector<double> test_times() const {
    std::vector<double> t;
    const auto steps = static_cast<int>(std::llround(test_horizon / test_step));
    for (int i = 0; i <= steps; ++i) t.push_back(test_step * i);
    return t;
  }
};

/// Noisy Kerr states recorded every record_step along one lossy trajectory.
inline std::vector<DensityMatrix> cv_recorded_states(const CvExperiment& e) {
  std::vector<DensityMatrix> out;
  DensityMatrix rho = cv::coherent_state(e.alpha, e.n_trunc);
  for (std::size_t r = 0; r < e.n_records; ++r) {
    rho = cv::lindblad_evolve(rho, +1, e.record_loss, e.record_step, e.solver);
    out.push_back(rho);
  }
  return out;
}

inline std::vector<DatasetSample> construct_dataset(Phase phase, const CvExperiment& e) {
  validate_level_grid(e.levels);
  if (e.n_train_states > e.n_records) throw std::invalid_argument("more training states than recorded states");
  const cv::WignerTransform wt(e.n_trunc, e.grid);
  const DensityMatrix coherent = cv::coherent_state(e.alpha, e.n_trunc);

  struct Job {
    std::optional<DensityMatrix> input;  // NA: recorded state; EM: none
    double time;
    std::string split;
  };
  std::vector<Job> jobs;
  if (phase == Phase::NoiseAwareness) {
    const auto recorded = cv_recorded_states(e);
    for (std::size_t r = 0; r < recorded.size(); ++r)
      for (double t0 : e.fiducial_times) jobs.push_back({recorded[r], t0, r < e.n_train_states ? "train" : "val"});
  } else {
    for (double t : e.test_times()) jobs.push_back({std::nullopt, t, "test"});
  }

  std::vector<DatasetSample> out(jobs.size());
  parallel_for(jobs.size(), e.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    DatasetSample s;
    s.id = i;
    s.g = job.time;
    s.observable = {1.0, 0.0};
    s.experiment = e.name;
    s.phase = phase;
    s.split = job.split;
    s.label = "wigner";
    s.seed = e.seed;
    for (double loss : e.levels) {
      const DensityMatrix noisy = phase == Phase::NoiseAwareness
                                      ? cv::cv_fiducial_evolve(*job.input, job.time, loss, e.solver)
                                      : cv::lindblad_evolve(coherent, +1, loss, job.time, e.solver);
      s.P.push_back(wt(noisy).values);
    }
    s.p0 = wt(phase == Phase::NoiseAwareness ? *job.input : cv::kerr_exact(coherent, job.time)).values;
    out[i] = std::move(s);
  });
  return out;
}

}  // namespace daem
