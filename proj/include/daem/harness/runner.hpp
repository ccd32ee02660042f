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

// Experiment pipeline: build processes, generate both dataset phases, train the
// mitigator, run baselines, and write reports.

#include "daem/baselines.hpp"
#include "daem/dataset/construct.hpp"
#include "daem/dataset/ensembles.hpp"
#include "daem/harness/config.hpp"
#include "daem/harness/metrics.hpp"
#include "daem/random.hpp"
#include "daem/nn/mitigator.hpp"
#include "daem/process/qaoa.hpp"
#include "daem/process/spin_dynamics.hpp"
#include "daem/process/swap_test.hpp"
#include "daem/process/vqe.hpp"

#include <Eigen/Core>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>

namespace daem::harness {

inline constexpr const char* kVersion = "1.0.0";

namespace fs = std::filesystem;

class Log {
 public:
  explicit Log(std::ostream* out = nullptr) : out_(out), start_(std::chrono::steady_clock::now()) {}
  void operator()(const std::string& msg) const {
    if (!out_) return;
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "[%8.1fs] ", s);
    *out_ << buf << msg << '\n' << std::flush;
  }

 private:
  std::ostream* out_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Experiment construction

inline InputSampler na_sampler(const ExperimentConfig& c) {
  const int n = c.n_qubits();
  const std::string& name = c.dataset.inputs;
  switch (c.experiment) {
    case ExperimentKind::SwapTest:
      if (name == "haar-pairs") return ensembles::swap_pair(c.swap.register_size, true);
      break;
    case ExperimentKind::SpinDynamics:
      if (name == "ising-ground")
        return ensembles::ising_ground(n, c.spin.input_field, c.spin.input_coupling_lo, c.spin.input_coupling_hi);
      break;
    case ExperimentKind::Vqe:
    case ExperimentKind::Qaoa:
      if (name == "haar") return ensembles::haar_pure(n);
      if (name == "ginibre") return ensembles::ginibre(n);
      if (name == "product") return ensembles::product(n);
      if (name == "haar+product") return ensembles::alternating({ensembles::haar_pure(n), ensembles::product(n)});
      if (name == "symmetric") return ensembles::symmetric(n);
      break;
    case ExperimentKind::CvKerr: break;
  }
  throw ConfigError("dataset.inputs '" + name + "' is not available for " + to_string(c.experiment));
}

inline QubitExperiment build_qubit_experiment(const ExperimentConfig& c, const Log& log = Log{}) {
  if (!c.is_circuit() && c.experiment != ExperimentKind::SpinDynamics)
    throw std::invalid_argument("not a qubit experiment");
  QubitExperiment e;
  e.name = to_string(c.experiment);
  e.noise = c.noise.model();
  e.levels = c.noise.levels;
  e.n_train = static_cast<std::size_t>(c.dataset.train);
  e.n_val = static_cast<std::size_t>(c.dataset.val);
  e.em_per_task = static_cast<std::size_t>(c.dataset.test);
  e.shots = c.shots;
  e.seed = c.seed;
  e.threads = c.threads;
  e.na_input = na_sampler(c);
  const int n = c.n_qubits();
  switch (c.experiment) {
    case ExperimentKind::Vqe: {
      for (std::size_t i = 0; i < c.vqe.fields.size(); ++i) {
        const double g = c.vqe.fields[i];
        VqeTrainConfig vc{c.vqe.layers, c.vqe.optimizer_iterations, c.vqe.optimizer_step, c.vqe.optimizer_restarts,
                          make_rng(c.seed, {0x0e, i})()};
        const VqeResult r = train_vqe(IsingSpec{n, c.vqe.coupling, g}, vc);
        log("vqe g=" + num(g) + ": ansatz energy " + num(r.energy));
        const Circuit circuit = build_vqe(n, c.vqe.layers, r.theta, g);
        e.tasks.push_back({circuit, build_fiducial(circuit)});
      }
      e.measurements = nearest_neighbour_measurements(n);
      e.em_input = ensembles::fixed(DensityMatrix::zero_state(n));
      break;
    }
    case ExperimentKind::SwapTest: {
      const Circuit circuit = build_swap_test(c.swap.register_size, 0.0);
      e.tasks.push_back({circuit, build_fiducial(circuit)});
      e.measurements = {{PauliObservable("Z", {0}), encode_observable(pauli::Z(), 0, 1)}};
      e.em_input = ensembles::swap_pair(c.swap.register_size, false);
      break;
    }
    case ExperimentKind::Qaoa: {
      Graph graph = Graph::ring(c.qaoa.vertices);
      if (!c.qaoa.edges.empty()) {
        graph.edges = c.qaoa.edges;
        graph.validate();
      }
      const QaoaParams qp = train_qaoa(graph, c.qaoa.depth, make_rng(c.seed, {0x0a})(), c.qaoa.optimizer_iterations, 0.05,
                                       c.qaoa.optimizer_restarts);
      log("qaoa: expected cut " + num(qp.expected_cut));
      const Circuit circuit = build_qaoa(graph, c.qaoa.depth, qp.gamma, qp.beta, 0.0);
      e.tasks.push_back({circuit, build_fiducial(circuit)});
      e.statistic = Statistic::Distribution;
      CVec plus = plus_state_vector(n);
      e.em_input = ensembles::fixed(DensityMatrix::from_pure(plus));
      break;
    }
    case ExperimentKind::SpinDynamics: {
      const SpinDynamics dyn(IsingSpec{n, c.spin.coupling, c.spin.field}, c.spin.time);
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      Circuit circuit(n, c.spin.field);
      circuit.add(Gate::unitary(dyn.propagator(), all, "ising-propagator"));
      e.tasks.push_back({circuit, identity_fiducial(n, c.spin.field)});
      e.measurements = nearest_neighbour_measurements(n);
      e.em_input = ensembles::ising_ground(n, c.spin.input_field, c.spin.input_coupling_lo, c.spin.input_coupling_hi);
      break;
    }
    case ExperimentKind::CvKerr: break;
  }
  return e;
}

inline CvExperiment build_cv_experiment(const ExperimentConfig& c) {
  CvExperiment e;
  e.n_trunc = c.cv.n_trunc;
  e.alpha = cplx(c.cv.alpha, 0.0);
  e.levels = c.noise.levels;
  e.record_loss = c.cv.record_loss;
  e.record_step = c.cv.record_step;
  e.n_records = static_cast<std::size_t>(c.cv.n_records);
  e.n_train_states = static_cast<std::size_t>(c.cv.n_train_states);
  e.fiducial_times = c.cv.fiducial_times;
  e.test_step = c.cv.test_step;
  e.test_horizon = c.cv.test_horizon;
  e.grid = c.cv.grid;
  e.solver.dt = c.cv.dt;
  e.seed = c.seed;
  e.threads = c.threads;
  return e;
}

struct Datasets {
  std::vector<DatasetSample> na, em;
};

inline Datasets generate_datasets(const ExperimentConfig& c, const QubitExperiment* qe, const Log& log = Log{}) {
  Datasets d;
  if (c.experiment == ExperimentKind::CvKerr) {
    const CvExperiment e = build_cv_experiment(c);
    d.na = construct_dataset(Phase::NoiseAwareness, e);
    log("noise-awareness samples: " + std::to_string(d.na.size()));
    d.em = construct_dataset(Phase::ErrorMitigation, e);
  } else {
    if (!qe) throw std::invalid_argument("qubit experiment required");
    d.na = construct_dataset(Phase::NoiseAwareness, *qe);
    log("noise-awareness samples: " + std::to_string(d.na.size()));
    d.em = construct_dataset(Phase::ErrorMitigation, *qe);
  }
  // error-mitigation ids continue after the noise-awareness ids
  for (auto& s : d.em) s.id += d.na.size();
  log("error-mitigation samples: " + std::to_string(d.em.size()));
  return d;
}

// ---------------------------------------------------------------------------
// Artifacts

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

inline void write_dataset(const fs::path& dir, const ExperimentConfig& c, const Datasets& d) {
  fs::create_directories(dir);
  std::vector<DatasetSample> all = d.na;
  all.insert(all.end(), d.em.begin(), d.em.end());
  save_jsonl((dir / "dataset.jsonl").string(), all);
  const Json meta{{"config_hash", c.hash()},
                  {"experiment", to_string(c.experiment)},
                  {"noise_awareness", d.na.size()},
                  {"error_mitigation", d.em.size()},
                  {"levels", c.noise.levels.size()}};
  write_file(dir / "dataset.meta.json", meta.dump(2) + "\n");
}

/// Reads a dataset written for this exact configuration; a hash mismatch is a hard error.
inline Datasets read_dataset(const fs::path& dir, const ExperimentConfig& c) {
  const Json meta = Json::parse(read_file(dir / "dataset.meta.json"));
  if (meta.at("config_hash").get<std::string>() != c.hash())
    throw ConfigError("dataset in " + dir.string() + " was generated with config hash " +
                      meta.at("config_hash").get<std::string>() + ", current config hashes to " + c.hash());
  Datasets d;
  for (auto& s : load_jsonl((dir / "dataset.jsonl").string()))
    (s.phase == Phase::NoiseAwareness ? d.na : d.em).push_back(std::move(s));
  if (d.na.size() != meta.at("noise_awareness").get<std::size_t>() || d.em.size() != meta.at("error_mitigation").get<std::size_t>())
    throw std::runtime_error("dataset sample counts do not match dataset.meta.json");
  return d;
}

/// SHA-256 and size of every artifact present in the output directory.
inline void write_manifest(const fs::path& dir, const ExperimentConfig& c) {
  Json files = Json::array();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    const std::string content = read_file(p);
    files.push_back({{"name", p.filename().string()}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }
  const Json m{{"config_hash", c.hash()}, {"experiment", to_string(c.experiment)}, {"seed", c.seed}, {"files", files}};
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Training

inline nn::LossKind loss_for(const ExperimentConfig& c) {
  if (c.experiment == ExperimentKind::CvKerr) return nn::LossKind::L1;
  if (c.experiment == ExperimentKind::Qaoa) return nn::LossKind::KL;
  return nn::LossKind::L2;
}

inline nn::ModelConfig model_for(const ExperimentConfig& c, const DatasetSample& s) {
  if (c.experiment == ExperimentKind::CvKerr) return nn::unet_config_for(s, c.model.widths);
  const nn::Head head = c.experiment == ExperimentKind::Qaoa ? nn::Head::Softmax : nn::Head::Tanh;
  return nn::mlp_config_for(s, head, c.model.embed, c.model.hidden);
}

struct TrainOutcome {
  nn::Mitigator mitigator;
  nn::TrainResult result;
};

inline TrainOutcome train_mitigator(const ExperimentConfig& c, const std::vector<DatasetSample>& na, const Log& log = Log{}) {
  const auto train_set = select_split(na, "train");
  const auto val_set = select_split(na, "val");
  if (train_set.empty()) throw std::runtime_error("no training samples in the noise-awareness dataset");
  const nn::ModelConfig mc = model_for(c, train_set.front());
  nn::TrainConfig tc;
  tc.epochs = c.train.epochs;
  tc.batch = c.train.batch;
  tc.adam.lr = c.train.lr;
  tc.cosine_decay = c.train.cosine_decay;
  tc.loss = loss_for(c);
  tc.seed = make_rng(c.seed, {0x7a})();
  log("training " + std::string(mc.kind == nn::ModelKind::Mlp ? "MLP" : "conv") + " model (" +
      std::to_string(nn::Net<float>(mc).num_params()) + " parameters) on " + std::to_string(train_set.size()) +
      " samples, validating on " + std::to_string(val_set.size()));
  const int every = std::max(1, c.train.epochs / 10);
  nn::TrainResult r = nn::train(mc, train_set, val_set, tc, [&](const nn::EpochStats& st) {
    if (st.epoch == 1 || st.epoch % every == 0)
      log("epoch " + std::to_string(st.epoch) + "/" + std::to_string(c.train.epochs) + " train " + num(st.train_loss) +
          " val " + num(st.val_loss));
  });
  log("best validation loss " + num(r.best_val) + " at epoch " + std::to_string(r.best_epoch));
  nn::Mitigator m(mc, r.params, tc.loss, r.adam, c.hash());
  return {std::move(m), std::move(r)};
}

inline Json training_summary(const ExperimentConfig& c, const nn::TrainResult& r) {
  return {{"config_hash", c.hash()},
          {"epochs", r.train_loss.size()},
          {"best_epoch", r.best_epoch},
          {"best_val_loss", r.best_val},
          {"final_train_loss", r.train_loss.back()}};
}

inline std::string history_csv(const nn::TrainResult& r) {
  std::string s = "epoch,train_loss,val_loss\n";
  for (std::size_t i = 0; i < r.train_loss.size(); ++i)
    s += std::to_string(i + 1) + "," + num(r.train_loss[i]) + "," + num(r.val_loss[i]) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

struct Evaluation {
  Json report;
  std::map<std::string, std::string> files;  // CSV name -> content
};

namespace detail {

inline bool gated_check(const Json& checks) {
  for (const auto& [k, v] : checks.items())
    if (!v.get<bool>()) return false;
  return true;
}

/// CDR predictions for every error-mitigation expectation sample, one linear model per (input, observable).
inline std::vector<double> cdr_predictions(const ExperimentConfig& c, const QubitExperiment& qe,
                                           const std::vector<DatasetSample>& em) {
  const std::size_t n_meas = qe.measurements.size();
  const std::size_t n_states = qe.tasks.size() * qe.em_per_task;
  if (em.size() != n_states * n_meas) throw std::runtime_error("error-mitigation samples do not match the experiment layout");
  std::vector<PauliObservable> obs;
  for (const auto& m : qe.measurements) obs.push_back(m.observable);
  std::vector<double> out(em.size());
  for (std::size_t i = 0; i < n_states; ++i) {
    const auto [task, in] = draw_input(qe, Phase::ErrorMitigation, i);
    baselines::CdrData d = baselines::cdr_training_data(qe.tasks[task].target, in.state, obs, qe.noise, qe.levels.front(),
                                                        static_cast<std::size_t>(c.baselines.cdr_variants),
                                                        make_rng(c.seed, {0xcd, i})(), c.threads);
    if (c.shots > 0) {
      Rng rng = make_rng(c.seed, {0xcd5, i});
      for (auto& row : d.noisy)
        for (auto& v : row) v = daem::detail::measured_expectation(v, c.shots, rng);
    }
    for (std::size_t m = 0; m < n_meas; ++m) {
      const baselines::CdrModel model = baselines::cdr_fit(d.noisy[m], d.exact[m]);
      const DatasetSample& s = em[i * n_meas + m];
      out[i * n_meas + m] = model.apply(s.P.front().front());
    }
  }
  return out;
}

}  // namespace detail

inline Json report_header(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = to_string(c.experiment);
  j["config_hash"] = c.hash();
  j["seed"] = c.seed;
  j["versions"] = {{"daem", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  j["noise"] = c.resolved()["noise"];
  j["shots"] = c.shots;
  return j;
}

inline Evaluation evaluate_expectations(const ExperimentConfig& c, const std::vector<DatasetSample>& em,
                                        const std::vector<std::vector<double>>& daem, const QubitExperiment* qe) {
  const std::size_t k = c.noise.levels.size();
  std::vector<double> truth, noisy, mitigated, zne, cdr;
  for (std::size_t i = 0; i < em.size(); ++i) {
    truth.push_back(em[i].p0.front());
    noisy.push_back(em[i].P.front().front());
    mitigated.push_back(daem[i].front());
  }
  const bool use_zne = c.baselines.zne && k >= 3;
  if (use_zne)
    for (const auto& s : em) {
      std::vector<double> vals;
      for (const auto& row : s.P) vals.push_back(row.front());
      zne.push_back(baselines::zne_extrapolate(c.noise.levels, vals));
    }
  const bool use_cdr = c.baselines.cdr && c.is_circuit() && qe;
  if (use_cdr) cdr = detail::cdr_predictions(c, *qe, em);

  Evaluation ev;
  Json& r = ev.report;
  r = report_header(c);
  Json metrics;
  metrics["noisy"] = {{"mae", metric_mae(noisy, truth)}};
  metrics["daem"] = {{"mae", metric_mae(mitigated, truth)}};
  if (use_zne) metrics["zne"] = {{"mae", metric_mae(zne, truth)}};
  if (use_cdr) metrics["cdr"] = {{"mae", metric_mae(cdr, truth)}};
  r["metrics"] = metrics;
  r["notes"] = {{"noisy_reference_level", c.noise.levels.front()},
                {"zne", use_zne ? "quadratic least squares over all levels, evaluated at 0" : "not applicable"},
                {"cdr", use_cdr ? "linear least squares on " + std::to_string(c.baselines.cdr_variants) +
                                      " Clifford variants at the smallest level, per input and observable"
                                : "not applicable"}};

  // per-g table
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < em.size(); ++i) groups[em[i].g].push_back(i);
  Json per_group = Json::array();
  std::string by_g = "g,noisy_mae,daem_mae" + std::string(use_zne ? ",zne_mae" : "") + (use_cdr ? ",cdr_mae" : "") + "\n";
  for (const auto& [g, idx] : groups) {
    auto sub = [&](const std::vector<double>& v) {
      std::vector<double> a, b;
      for (auto i : idx) {
        a.push_back(v[i]);
        b.push_back(truth[i]);
      }
      return metric_mae(a, b);
    };
    Json row{{"g", g}, {"samples", idx.size()}, {"noisy_mae", sub(noisy)}, {"daem_mae", sub(mitigated)}};
    by_g += num(g) + "," + num(sub(noisy)) + "," + num(sub(mitigated));
    if (use_zne) {
      row["zne_mae"] = sub(zne);
      by_g += "," + num(sub(zne));
    }
    if (use_cdr) {
      row["cdr_mae"] = sub(cdr);
      by_g += "," + num(sub(cdr));
    }
    by_g += "\n";
    per_group.push_back(row);
  }
  r["per_g"] = per_group;
  ev.files["plot_mae_by_g.csv"] = by_g;

  // noisy MAE against level
  std::string by_level = "level_index,level,noisy_mae\n";
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<double> v;
    for (const auto& s : em) v.push_back(s.P[l].front());
    by_level += std::to_string(l) + "," + num(c.noise.levels[l]) + "," + num(metric_mae(v, truth)) + "\n";
  }
  ev.files["plot_mae_vs_level.csv"] = by_level;

  std::string pred = "id,g,observable,truth,noisy,daem" + std::string(use_zne ? ",zne" : "") + (use_cdr ? ",cdr" : "") + "\n";
  for (std::size_t i = 0; i < em.size(); ++i) {
    pred += std::to_string(em[i].id) + "," + num(em[i].g) + "," + em[i].label + "," + num(truth[i]) + "," + num(noisy[i]) + "," +
            num(mitigated[i]);
    if (use_zne) pred += "," + num(zne[i]);
    if (use_cdr) pred += "," + num(cdr[i]);
    pred += "\n";
  }
  ev.files["predictions.csv"] = pred;

  const double n_mae = metrics["noisy"]["mae"], d_mae = metrics["daem"]["mae"];
  Json checks;
  if (c.experiment == ExperimentKind::Vqe) checks["daem_mae_below_half_noisy"] = d_mae < 0.5 * n_mae;
  else checks["daem_mae_below_noisy"] = d_mae < n_mae;
  r["checks"] = checks;
  Json compare;
  if (use_zne) compare["daem_beats_zne"] = d_mae < metrics["zne"]["mae"].get<double>();
  if (use_cdr) compare["daem_beats_cdr"] = d_mae < metrics["cdr"]["mae"].get<double>();
  r["comparisons"] = compare;
  return ev;
}

inline Evaluation evaluate_distributions(const ExperimentConfig& c, const std::vector<DatasetSample>& em,
                                         const std::vector<std::vector<double>>& daem) {
  const std::size_t k = c.noise.levels.size();
  const bool use_zne = c.baselines.zne && k >= 3;
  std::vector<double> kl_noisy, kl_daem, kl_zne, mae_noisy, mae_daem, mae_zne;
  Evaluation ev;
  std::string plot = "id,bitstring,ideal,noisy,daem" + std::string(use_zne ? ",zne" : "") + "\n";
  const int n = c.n_qubits();
  for (std::size_t i = 0; i < em.size(); ++i) {
    const auto& s = em[i];
    kl_noisy.push_back(metric_kl(s.P.front(), s.p0));
    kl_daem.push_back(metric_kl(daem[i], s.p0));
    mae_noisy.push_back(metric_mae(s.P.front(), s.p0));
    mae_daem.push_back(metric_mae(daem[i], s.p0));
    std::vector<double> z;
    if (use_zne) {
      for (std::size_t x = 0; x < s.p0.size(); ++x) {
        std::vector<double> vals;
        for (const auto& row : s.P) vals.push_back(row[x]);
        z.push_back(baselines::zne_extrapolate(c.noise.levels, vals));
      }
      z = clip_renormalize(z);
      kl_zne.push_back(metric_kl(z, s.p0));
      mae_zne.push_back(metric_mae(z, s.p0));
    }
    for (std::size_t x = 0; x < s.p0.size(); ++x) {
      std::string bits;
      for (int q = 0; q < n; ++q) bits.push_back((x >> (n - 1 - q)) & 1 ? '1' : '0');
      plot += std::to_string(s.id) + "," + bits + "," + num(s.p0[x]) + "," + num(s.P.front()[x]) + "," + num(daem[i][x]);
      if (use_zne) plot += "," + num(z[x]);
      plot += "\n";
    }
  }
  Json& r = ev.report;
  r = report_header(c);
  r["metrics"] = {{"noisy", {{"kl", mean(kl_noisy)}, {"mae", mean(mae_noisy)}}},
                  {"daem", {{"kl", mean(kl_daem)}, {"mae", mean(mae_daem)}}}};
  if (use_zne) r["metrics"]["zne"] = {{"kl", mean(kl_zne)}, {"mae", mean(mae_zne)}};
  r["notes"] = {{"noisy_reference_level", c.noise.levels.front()},
                {"kl", "KL(method || ideal) with 1e-8 smoothing, averaged over inputs"},
                {"zne", use_zne ? "per-bitstring quadratic extrapolation, clipped at 0 and renormalized" : "not applicable"},
                {"cdr", "not applicable to distributions"}};
  r["checks"] = {{"daem_kl_below_noisy", mean(kl_daem) < mean(kl_noisy)}};
  r["comparisons"] = Json::object();
  if (use_zne) r["comparisons"]["daem_beats_zne"] = mean(kl_daem) < mean(kl_zne);
  ev.files["plot_distribution.csv"] = plot;
  return ev;
}

inline Evaluation evaluate_cv(const ExperimentConfig& c, const std::vector<DatasetSample>& em,
                              const std::vector<std::vector<double>>& daem) {
  Evaluation ev;
  std::vector<double> f_noisy, f_daem, mae_noisy, mae_daem;
  std::string plot = "time,noisy_fidelity,daem_fidelity,noisy_mae,daem_mae\n";
  Json per_time = Json::array();
  bool separated = true;
  std::size_t late = 0;
  for (std::size_t i = 0; i < em.size(); ++i) {
    const auto& s = em[i];
    const double fn = grid_fidelity(c.cv.grid, s.P.front(), s.p0), fd = grid_fidelity(c.cv.grid, daem[i], s.p0);
    const double mn = metric_mae(s.P.front(), s.p0), md = metric_mae(daem[i], s.p0);
    f_noisy.push_back(fn);
    f_daem.push_back(fd);
    mae_noisy.push_back(mn);
    mae_daem.push_back(md);
    if (s.g >= 0.5 - 1e-9) {
      ++late;
      separated = separated && fd > fn;
    }
    per_time.push_back({{"id", s.id}, {"time", s.g}, {"noisy_fidelity", fn}, {"daem_fidelity", fd}});
    plot += num(s.g) + "," + num(fn) + "," + num(fd) + "," + num(mn) + "," + num(md) + "\n";
  }
  Json& r = ev.report;
  r = report_header(c);
  r["metrics"] = {{"noisy", {{"mean_fidelity", mean(f_noisy)}, {"mae", mean(mae_noisy)}}},
                  {"daem", {{"mean_fidelity", mean(f_daem)}, {"mae", mean(mae_daem)}}}};
  r["per_time"] = per_time;
  r["notes"] = {{"noisy_reference_level", c.noise.levels.front()},
                {"fidelity", "Wigner-grid overlap normalized by the larger purity"},
                {"zne", "not applicable"},
                {"cdr", "not applicable"}};
  r["checks"] = {{"daem_fidelity_above_noisy_for_t_ge_0.5", late > 0 && separated}};
  r["comparisons"] = Json::object();
  ev.files["plot_fidelity_vs_time.csv"] = plot;

  // final-time grids for a phase-space plot
  const auto& last = em.back();
  std::string grid = "x,p,ideal,noisy,daem\n";
  const int pts = c.cv.grid.points;
  for (int a = 0; a < pts; ++a)
    for (int b = 0; b < pts; ++b) {
      const auto idx = static_cast<std::size_t>(a * pts + b);
      grid += num(c.cv.grid.coord(a)) + "," + num(c.cv.grid.coord(b)) + "," + num(last.p0[idx]) + "," + num(last.P.front()[idx]) +
              "," + num(daem.back()[idx]) + "\n";
    }
  ev.files["plot_wigner_final.csv"] = grid;
  return ev;
}

inline Evaluation evaluate(const ExperimentConfig& c, const Datasets& d, const nn::Mitigator& m, const QubitExperiment* qe,
                           const Json& training = Json()) {
  if (d.em.empty()) throw std::runtime_error("no error-mitigation samples to evaluate");
  if (m.config_hash() != c.hash())
    throw ConfigError("checkpoint was trained under config hash " + m.config_hash() + ", current config hashes to " + c.hash());
  const auto daem = m.predict(d.em);
  Evaluation ev = c.experiment == ExperimentKind::CvKerr ? evaluate_cv(c, d.em, daem)
                  : c.experiment == ExperimentKind::Qaoa ? evaluate_distributions(c, d.em, daem)
                                                         : evaluate_expectations(c, d.em, daem, qe);
  Json& r = ev.report;
  r["dataset"] = {{"noise_awareness_train", select_split(d.na, "train").size()},
                  {"noise_awareness_val", select_split(d.na, "val").size()},
                  {"error_mitigation", d.em.size()},
                  {"levels", c.noise.levels.size()}};
  if (!training.is_null()) r["training"] = training;
  r["passed"] = detail::gated_check(r["checks"]);

  std::string metrics = "method,metric,value\n";
  for (const auto& [method, vals] : r["metrics"].items())
    for (const auto& [metric, v] : vals.items()) metrics += method + "," + metric + "," + num(v.get<double>()) + "\n";
  ev.files["metrics.csv"] = metrics;
  return ev;
}

inline void write_evaluation(const fs::path& dir, const Evaluation& ev) {
  fs::create_directories(dir);
  write_file(dir / "report.json", ev.report.dump(2) + "\n");
  for (const auto& [name, content] : ev.files) write_file(dir / name, content);
}

// ---------------------------------------------------------------------------
// Verbs

inline std::optional<QubitExperiment> maybe_qubit_experiment(const ExperimentConfig& c, const Log& log) {
  if (c.experiment == ExperimentKind::CvKerr) return std::nullopt;
  return build_qubit_experiment(c, log);
}

inline void write_resolved(const fs::path& dir, const ExperimentConfig& c) {
  fs::create_directories(dir);
  Json j = c.resolved();
  j["config_hash"] = c.hash();
  write_file(dir / "config.resolved.json", j.dump(2) + "\n");
}

inline Datasets run_dataset(const ExperimentConfig& c, const fs::path& dir, const Log& log = Log{}) {
  write_resolved(dir, c);
  const auto qe = maybe_qubit_experiment(c, log);
  Datasets d = generate_datasets(c, qe ? &*qe : nullptr, log);
  write_dataset(dir, c, d);
  write_manifest(dir, c);
  return d;
}

/// Checkpoint, loss history and summary.
inline void write_training(const fs::path& dir, const ExperimentConfig& c, const TrainOutcome& t) {
  t.mitigator.save((dir / "model.ckpt").string());
  write_file(dir / "train_history.csv", history_csv(t.result));
  write_file(dir / "training.json", training_summary(c, t.result).dump(2) + "\n");
}

/// The stored training summary, or null when absent; a foreign hash is a hard error.
inline Json read_training(const fs::path& dir, const ExperimentConfig& c) {
  if (!fs::exists(dir / "training.json")) return Json();
  Json j = Json::parse(read_file(dir / "training.json"));
  if (j.at("config_hash").get<std::string>() != c.hash())
    throw ConfigError("training summary in " + dir.string() + " belongs to config hash " + j.at("config_hash").get<std::string>());
  j.erase("config_hash");
  return j;
}

inline TrainOutcome run_train(const ExperimentConfig& c, const fs::path& dir, const Log& log = Log{}) {
  const Datasets d = read_dataset(dir, c);
  TrainOutcome t = train_mitigator(c, d.na, log);
  write_training(dir, c, t);
  write_manifest(dir, c);
  return t;
}

inline Json run_evaluate(const ExperimentConfig& c, const fs::path& dir, const Log& log = Log{}) {
  const Datasets d = read_dataset(dir, c);
  const nn::Mitigator m = nn::Mitigator::load((dir / "model.ckpt").string());
  const auto qe = maybe_qubit_experiment(c, log);
  log("evaluating on " + std::to_string(d.em.size()) + " error-mitigation samples");
  const Evaluation ev = evaluate(c, d, m, qe ? &*qe : nullptr, read_training(dir, c));
  write_evaluation(dir, ev);
  write_manifest(dir, c);
  return ev.report;
}

/// Full pipeline: datasets, training, evaluation, reports.
inline Json run_experiment(const ExperimentConfig& c, const fs::path& dir, const Log& log = Log{}) {
  write_resolved(dir, c);
  const auto qe = maybe_qubit_experiment(c, log);
  const Datasets d = generate_datasets(c, qe ? &*qe : nullptr, log);
  write_dataset(dir, c, d);
  const TrainOutcome t = train_mitigator(c, d.na, log);
  write_training(dir, c, t);
  const Evaluation ev = evaluate(c, d, t.mitigator, qe ? &*qe : nullptr, read_training(dir, c));
  write_evaluation(dir, ev);
  write_manifest(dir, c);
  return ev.report;
}

}  // namespace daem::harness
