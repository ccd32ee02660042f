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

// Fast invariant suites behind the `selftest` verb.

#include "daem/baselines.hpp"
#include "daem/cv/lindblad.hpp"
#include "daem/cv/wigner.hpp"
#include "daem/dataset/construct.hpp"
#include "daem/dataset/ensembles.hpp"
#include "daem/nn/mitigator.hpp"
#include "daem/noise/channels.hpp"
#include "daem/process/vqe.hpp"
#include "daem/states.hpp"

#include <chrono>
#include <functional>

namespace daem::harness {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace suites {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline SuiteResult channels() {
  double worst = 0.0;
  for (double l : {0.0, 0.1, 0.5, 1.0}) {
    worst = std::max({worst, amplitude_damping_channel(l, 0).completeness_error(), phase_damping_channel(l, 0).completeness_error(),
                      depolarizing_channel(l, {0}).completeness_error(), depolarizing_channel(l, {0, 1}).completeness_error()});
  }
  Rng rng = make_rng(11);
  const DensityMatrix rho = random_mixed(1, rng);
  worst = std::max(worst, (amplitude_damping(rho, 1.0, 0).matrix() - DensityMatrix::zero_state(1).matrix()).cwiseAbs().maxCoeff());
  const cplx off = phase_damping(rho, 0.3, 0).matrix()(0, 1);
  worst = std::max(worst, std::abs(off - rho.matrix()(0, 1) * std::exp(-0.6)));
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
  worst = std::max(worst, (depolarizing(mixed, 0.4).matrix() - mixed.matrix()).cwiseAbs().maxCoeff());
  worst = std::max(worst, (depolarizing(rho, 0.75).matrix() - DensityMatrix::maximally_mixed(2).matrix()).cwiseAbs().maxCoeff());
  return {"channels", worst < 1e-10, "max deviation " + sci(worst)};
}

inline SuiteResult duality() {
  Rng rng = make_rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const DensityMatrix rho = random_mixed(2, rng);
    CMat m = complex_gaussian(4, 4, rng);
    m = 0.5 * (m + m.adjoint()).eval();
    const double l = u(rng);
    const int q = t % 2;
    const KrausChannel ch = t % 3 == 0   ? amplitude_damping_channel(l, q)
                            : t % 3 == 1 ? phase_damping_channel(l, q)
                                         : depolarizing_channel(l, {q});
    const cplx lhs = (m * apply_channel(rho, ch).matrix()).trace();
    const cplx rhs = (conjugate_observable(m, ch) * rho.matrix()).trace();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {"duality", worst < 1e-10, "max |tr(M N(rho)) - tr(M~ rho)| " + sci(worst)};
}

inline SuiteResult fiducial_labels() {
  QubitExperiment e;
  e.name = "vqe";
  std::vector<double> theta(3 * 4 * 2);
  Rng rng = make_rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (auto& t : theta) t = u(rng);
  const Circuit c = build_vqe(4, 2, theta, 0.4);
  e.tasks.push_back({c, build_fiducial(c)});
  e.levels = {0.05, 0.15};
  e.measurements = nearest_neighbour_measurements(4);
  e.na_input = ensembles::haar_pure(4);
  e.n_train = 4;
  e.n_val = 2;
  const auto samples = construct_dataset(Phase::NoiseAwareness, e);
  double worst = 0.0;
  for (std::size_t i = 0; i < e.n_train + e.n_val; ++i) {
    const auto [task, in] = draw_input(e, Phase::NoiseAwareness, i);
    const DensityMatrix out = run_circuit(in.state, e.tasks[task].fiducial.circuit());
    for (std::size_t m = 0; m < e.measurements.size(); ++m)
      worst = std::max(worst, std::abs(samples[i * e.measurements.size() + m].p0[0] - expectation(out, e.measurements[m].observable)));
  }
  return {"fiducial-labels", worst < 1e-10, "max label deviation " + sci(worst)};
}

inline SuiteResult zne_oracle() {
  std::vector<double> levels, values;
  for (int k = 0; k < 13; ++k) {
    const double l = 0.05 + 0.02 * k;
    levels.push_back(l);
    values.push_back(0.73 - 1.1 * l + 2.4 * l * l);
  }
  const double err = std::abs(baselines::zne_extrapolate(levels, values) - 0.73);
  return {"zne", err < 1e-9, "intercept error " + sci(err)};
}

inline SuiteResult cv_solver() {
  const DensityMatrix in = cv::coherent_state({1.5, 0.0}, 15);
  const DensityMatrix a = cv::lindblad_evolve(in, +1, 0.0, 1.0);
  const double fid = (a.matrix() * cv::kerr_exact(in, 1.0).matrix()).trace().real();
  const double n0 = cv::mean_photon_number(in);
  const double n1 = cv::mean_photon_number(cv::lindblad_evolve(in, 0, 0.5, 1.0));
  const double decay = std::abs(n1 / n0 - std::exp(-0.5)) / std::exp(-0.5);
  const double norm = std::abs(cv::wigner(in).normalization() - 1.0);
  const bool ok = fid > 1.0 - 1e-6 && decay < 1e-3 && norm < 0.02;
  return {"cv-solver", ok, "Kerr fidelity " + sci(fid) + ", loss decay error " + sci(decay) + ", Wigner norm error " + sci(norm)};
}

inline SuiteResult gradients() {
  Rng rng = make_rng(14);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DatasetSample s;
  s.observable = {0.3, -0.2, 0.5};
  s.P = {{0.2}, {0.1}, {-0.4}};
  s.p0 = {0.25};
  DatasetSample d;
  d.observable = {1.0};
  for (int l = 0; l < 3; ++l) {
    std::vector<double> row(8);
    for (auto& v : row) v = 0.1 + std::abs(u(rng));
    d.P.push_back(row);
  }
  d.p0 = std::vector<double>(8, 0.125);
  double worst = 0.0;
  for (const auto& [sample, head] : {std::pair{s, nn::Head::Tanh}, std::pair{s, nn::Head::Identity}, std::pair{d, nn::Head::Softmax}}) {
    const nn::ModelConfig cfg = nn::mlp_config_for(sample, head, 16, {32, 32});
    worst = std::max(worst, nn::grad_check(cfg, nn::Net<double>(cfg).initialize(5), sample, 100).max_rel_error);
  }
  return {"gradients", worst < 1e-4, "max relative error " + sci(worst)};
}

}  // namespace suites

/// Runs every suite; a throwing suite counts as failed.
inline std::vector<SuiteResult> run_selftest() {
  const std::vector<std::pair<std::string, std::function<SuiteResult()>>> all{
      {"channels", suites::channels},   {"duality", suites::duality},     {"fiducial-labels", suites::fiducial_labels},
      {"zne", suites::zne_oracle},      {"cv-solver", suites::cv_solver}, {"gradients", suites::gradients}};
  std::vector<SuiteResult> out;
  for (const auto& [name, fn] : all) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult r;
    try {
      r = fn();
    } catch (const std::exception& ex) {
      r = {name, false, std::string("exception: ") + ex.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace daem::harness
