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

// Experiment configuration: JSON with comments, unknown keys rejected,
// defaults filled per experiment.

#include "daem/cv/lindblad.hpp"
#include "daem/dataset/construct.hpp"
#include "daem/cv/wigner.hpp"
#include "daem/noise/noise_model.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace daem::harness {

/// Invalid or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

/// Object reader that records which keys were consumed and rejects the rest.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError("missing required key '" + sub_path(key) + "'");
    return convert<T>(key);
  }

  std::optional<Section> sub(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    return Section(j_.at(key), sub_path(key));
  }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("unknown key '" + sub_path(k) + "'");
  }

  std::string sub_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  template <class T>
  T convert(const std::string& key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("key '" + sub_path(key) + "' has the wrong type");
    }
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

enum class ExperimentKind { Vqe, SwapTest, Qaoa, SpinDynamics, CvKerr };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Vqe: return "vqe";
    case ExperimentKind::SwapTest: return "swap-test";
    case ExperimentKind::Qaoa: return "qaoa";
    case ExperimentKind::SpinDynamics: return "spin-dynamics";
    case ExperimentKind::CvKerr: return "cv-kerr";
  }
  return "?";
}

inline ExperimentKind experiment_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::Vqe, ExperimentKind::SwapTest, ExperimentKind::Qaoa, ExperimentKind::SpinDynamics,
                 ExperimentKind::CvKerr})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown experiment '" + s + "' (expected vqe, swap-test, qaoa, spin-dynamics or cv-kerr)");
}

inline std::vector<double> level_range(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw ConfigError("level range needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(start + step * i);
  return out;
}

struct NoiseConfig {
  std::string kind;  // channel name or "spin-boson"
  Placement placement = Placement::AfterEachGate;
  std::vector<double> levels;
  BathNoiseSpec bath;

  NoiseModel model() const {
    if (kind == "spin-boson") return NoiseModel::spin_boson(bath);
    return NoiseModel::markovian(channel_kind_from_string(kind), placement);
  }
};

struct VqeConfig {
  int qubits = 4;
  int layers = 2;
  double coupling = 1.0;
  std::vector<double> fields{0.4, 0.8, 1.2, 1.6};
  int optimizer_iterations = 500;
  int optimizer_restarts = 4;
  double optimizer_step = 0.05;
};

struct SwapConfig {
  int register_size = 3;
};

struct QaoaConfig {
  int vertices = 6;
  std::vector<std::pair<int, int>> edges;  // empty: ring
  int depth = 2;
  int optimizer_iterations = 500;
  int optimizer_restarts = 4;
};

struct SpinConfig {
  int qubits = 8;
  double coupling = 1.0;
  double field = 2.0;
  double time = 5.0;
  double input_field = 1.0;
  double input_coupling_lo = -2.0;
  double input_coupling_hi = 2.0;
};

struct CvConfig {
  double alpha = 1.5;
  int n_trunc = 15;
  double record_loss = 0.6;
  double record_step = 0.05;
  int n_records = 20;
  int n_train_states = 16;
  std::vector<double> fiducial_times = level_range(0.0, 1.0, 0.1);
  double test_step = 0.05;
  double test_horizon = 1.0;
  cv::GridSpec grid;
  double dt = 1e-3;
};

struct DatasetConfig {
  int train = 100;
  int val = 50;
  int test = 20;  // error-mitigation inputs per target circuit
  std::string inputs;  // noise-awareness input ensemble
};

struct ModelConfigSection {
  int embed = 128;
  std::vector<int> hidden{512, 1024, 1024};
  std::array<int, 3> widths{8, 16, 32};
};

struct TrainSection {
  int epochs = 300;
  int batch = 64;
  double lr = 2e-4;
  bool cosine_decay = true;
};

struct BaselineConfig {
  bool zne = true;
  bool cdr = true;
  int cdr_variants = 100;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Vqe;
  std::uint64_t seed = 0;
  int threads = 1;
  int shots = 0;  // 0: exact statistics
  std::string output = "out";
  double memory_budget_mb = 4096;
  NoiseConfig noise;
  VqeConfig vqe;
  SwapConfig swap;
  QaoaConfig qaoa;
  SpinConfig spin;
  CvConfig cv;
  DatasetConfig dataset;
  ModelConfigSection model;
  TrainSection train;
  BaselineConfig baselines;

  int n_qubits() const {
    switch (experiment) {
      case ExperimentKind::Vqe: return vqe.qubits;
      case ExperimentKind::SwapTest: return 2 * swap.register_size + 1;
      case ExperimentKind::Qaoa: return qaoa.vertices;
      case ExperimentKind::SpinDynamics: return spin.qubits;
      case ExperimentKind::CvKerr: return 0;
    }
    return 0;
  }

  bool is_circuit() const {
    return experiment == ExperimentKind::Vqe || experiment == ExperimentKind::SwapTest || experiment == ExperimentKind::Qaoa;
  }

  /// Every setting that influences results; output path and thread count excluded.
  Json resolved() const {
    Json j;
    j["experiment"] = to_string(experiment);
    j["seed"] = seed;
    j["shots"] = shots;
    Json n{{"kind", noise.kind}, {"placement", to_string(noise.placement)}, {"levels", noise.levels}};
    if (noise.kind == "spin-boson")
      n["bath"] = {{"alpha", noise.bath.bath.alpha}, {"s", noise.bath.bath.s},         {"omega_c", noise.bath.bath.omega_c},
                   {"beta", noise.bath.bath.beta},   {"modes", noise.bath.modes},      {"omega_max", noise.bath.omega_max},
                   {"n_max", noise.bath.n_max}};
    j["noise"] = n;
    switch (experiment) {
      case ExperimentKind::Vqe:
        j["process"] = {{"qubits", vqe.qubits},
                        {"layers", vqe.layers},
                        {"coupling", vqe.coupling},
                        {"fields", vqe.fields},
                        {"optimizer_iterations", vqe.optimizer_iterations},
                        {"optimizer_restarts", vqe.optimizer_restarts},
                        {"optimizer_step", vqe.optimizer_step}};
        break;
      case ExperimentKind::SwapTest: j["process"] = {{"register_size", swap.register_size}}; break;
      case ExperimentKind::Qaoa: {
        Json edges = Json::array();
        for (auto [a, b] : qaoa.edges) edges.push_back({a, b});
        j["process"] = {{"vertices", qaoa.vertices},
                        {"edges", edges},
                        {"depth", qaoa.depth},
                        {"optimizer_iterations", qaoa.optimizer_iterations},
                        {"optimizer_restarts", qaoa.optimizer_restarts}};
        break;
      }
      case ExperimentKind::SpinDynamics:
        j["process"] = {{"qubits", spin.qubits},
                        {"coupling", spin.coupling},
                        {"field", spin.field},
                        {"time", spin.time},
                        {"input_field", spin.input_field},
                        {"input_coupling", {spin.input_coupling_lo, spin.input_coupling_hi}}};
        break;
      case ExperimentKind::CvKerr:
        j["process"] = {{"alpha", cv.alpha},
                        {"n_trunc", cv.n_trunc},
                        {"record_loss", cv.record_loss},
                        {"record_step", cv.record_step},
                        {"n_records", cv.n_records},
                        {"n_train_states", cv.n_train_states},
                        {"fiducial_times", cv.fiducial_times},
                        {"test_step", cv.test_step},
                        {"test_horizon", cv.test_horizon},
                        {"grid", {{"points", cv.grid.points}, {"extent", cv.grid.hi}}},
                        {"dt", cv.dt}};
        break;
    }
    j["dataset"] = {{"train", dataset.train}, {"val", dataset.val}, {"test", dataset.test}, {"inputs", dataset.inputs}};
    if (experiment == ExperimentKind::CvKerr) j["model"] = {{"widths", model.widths}};
    else j["model"] = {{"embed", model.embed}, {"hidden", model.hidden}};
    j["train"] = {{"epochs", train.epochs}, {"batch", train.batch}, {"lr", train.lr}, {"cosine_decay", train.cosine_decay}};
    j["baselines"] = {{"zne", baselines.zne}, {"cdr", baselines.cdr}, {"cdr_variants", baselines.cdr_variants}};
    return j;
  }

  std::string hash() const { return sha256_hex(resolved().dump()); }

  /// Dense-simulation memory estimate in MiB: a few density matrices per worker plus the fiducial unitary.
  double memory_estimate_mb() const {
    if (experiment == ExperimentKind::CvKerr) {
      const double d = cv.n_trunc;
      return 16.0 * d * d * 12 * threads / (1 << 20) + 8.0 * cv.grid.size() * d * d / (1 << 20);
    }
    const double dm = 16.0 * std::pow(4.0, n_qubits());
    return (dm * (static_cast<double>(noise.levels.size()) + 6) * threads + dm) / (1 << 20);
  }
};

namespace detail {

inline std::vector<double> read_levels(const Json& j, const std::string& path) {
  if (j.is_array()) {
    try {
      return j.get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("'" + path + "' must be an array of numbers");
    }
  }
  Section s(j, path);
  const auto start = s.require<double>("start"), stop = s.require<double>("stop"), step = s.require<double>("step");
  s.finish();
  return level_range(start, stop, step);
}

inline void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace detail

/// Parses and validates a configuration document. The seed precedence is
/// override_seed > DAEM_SEED > config value.
inline ExperimentConfig parse_config(const Json& doc, std::optional<std::uint64_t> override_seed = std::nullopt) {
  ExperimentConfig c;
  Section root(doc, "");
  c.experiment = experiment_from_string(root.require<std::string>("experiment"));
  c.seed = root.get<std::uint64_t>("seed", 0);
  c.threads = root.get<int>("threads", 1);
  c.shots = root.get<int>("shots", 0);
  c.output = root.get<std::string>("output", "out/" + to_string(c.experiment));
  c.memory_budget_mb = root.get<double>("memory_budget_mb", 4096.0);

  // experiment defaults
  switch (c.experiment) {
    case ExperimentKind::Vqe:
      c.noise = {"phase-damping", Placement::AfterEachGate, level_range(0.05, 0.29, 0.02), {}};
      c.dataset.inputs = "haar";
      c.dataset.test = 1;
      break;
    case ExperimentKind::SwapTest:
      c.noise = {"phase-damping", Placement::BeforeEachBlock, {0.05, 0.08, 0.12, 0.15}, {}};
      c.dataset.inputs = "haar-pairs";
      break;
    case ExperimentKind::Qaoa:
      c.noise = {"depolarizing", Placement::PerLayer, level_range(0.05, 0.29, 0.02), {}};
      c.dataset.inputs = "symmetric";
      c.dataset.test = 1;
      break;
    case ExperimentKind::SpinDynamics:
      c.noise = {"phase-damping", Placement::AfterFullProcess, level_range(0.05, 0.29, 0.02), {}};
      c.dataset.inputs = "ising-ground";
      break;
    case ExperimentKind::CvKerr:
      c.noise = {"loss", Placement::AfterFullProcess, {0.6, 0.65, 0.7, 0.75, 0.8}, {}};
      c.dataset.inputs = "kerr-trajectory";
      c.train.batch = 32;
      break;
  }

  if (auto n = root.sub("noise")) {
    c.noise.kind = n->get<std::string>("kind", c.noise.kind);
    if (n->has("placement")) {
      try {
        c.noise.placement = placement_from_string(n->require<std::string>("placement"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (n->has("levels")) c.noise.levels = detail::read_levels(n->raw("levels"), "noise.levels");
    if (auto b = n->sub("bath")) {
      c.noise.bath.bath.alpha = b->get<double>("alpha", c.noise.bath.bath.alpha);
      c.noise.bath.bath.s = b->get<double>("s", c.noise.bath.bath.s);
      c.noise.bath.bath.omega_c = b->get<double>("omega_c", c.noise.bath.bath.omega_c);
      c.noise.bath.bath.beta = b->get<double>("beta", c.noise.bath.bath.beta);
      c.noise.bath.modes = b->get<int>("modes", c.noise.bath.modes);
      c.noise.bath.omega_max = b->get<double>("omega_max", c.noise.bath.omega_max);
      c.noise.bath.n_max = b->get<int>("n_max", c.noise.bath.n_max);
      b->finish();
    }
    n->finish();
  }

  if (auto p = root.sub("process")) {
    switch (c.experiment) {
      case ExperimentKind::Vqe:
        c.vqe.qubits = p->get("qubits", c.vqe.qubits);
        c.vqe.layers = p->get("layers", c.vqe.layers);
        c.vqe.coupling = p->get("coupling", c.vqe.coupling);
        c.vqe.fields = p->get("fields", c.vqe.fields);
        c.vqe.optimizer_iterations = p->get("optimizer_iterations", c.vqe.optimizer_iterations);
        c.vqe.optimizer_restarts = p->get("optimizer_restarts", c.vqe.optimizer_restarts);
        c.vqe.optimizer_step = p->get("optimizer_step", c.vqe.optimizer_step);
        break;
      case ExperimentKind::SwapTest: c.swap.register_size = p->get("register_size", c.swap.register_size); break;
      case ExperimentKind::Qaoa:
        c.qaoa.vertices = p->get("vertices", c.qaoa.vertices);
        if (p->has("edges")) {
          for (const auto& e : p->raw("edges")) {
            if (!e.is_array() || e.size() != 2) throw ConfigError("process.edges entries must be [u, v] pairs");
            c.qaoa.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
          }
        }
        c.qaoa.depth = p->get("depth", c.qaoa.depth);
        c.qaoa.optimizer_iterations = p->get("optimizer_iterations", c.qaoa.optimizer_iterations);
        c.qaoa.optimizer_restarts = p->get("optimizer_restarts", c.qaoa.optimizer_restarts);
        break;
      case ExperimentKind::SpinDynamics: {
        c.spin.qubits = p->get("qubits", c.spin.qubits);
        c.spin.coupling = p->get("coupling", c.spin.coupling);
        c.spin.field = p->get("field", c.spin.field);
        c.spin.time = p->get("time", c.spin.time);
        c.spin.input_field = p->get("input_field", c.spin.input_field);
        const auto range = p->get<std::vector<double>>("input_coupling", {c.spin.input_coupling_lo, c.spin.input_coupling_hi});
        detail::check(range.size() == 2 && range[0] < range[1], "process.input_coupling must be [lo, hi] with lo < hi");
        c.spin.input_coupling_lo = range[0];
        c.spin.input_coupling_hi = range[1];
        break;
      }
      case ExperimentKind::CvKerr:
        c.cv.alpha = p->get("alpha", c.cv.alpha);
        c.cv.n_trunc = p->get("n_trunc", c.cv.n_trunc);
        c.cv.record_loss = p->get("record_loss", c.cv.record_loss);
        c.cv.record_step = p->get("record_step", c.cv.record_step);
        c.cv.n_records = p->get("n_records", c.cv.n_records);
        c.cv.n_train_states = p->get("n_train_states", c.cv.n_train_states);
        if (p->has("fiducial_times")) c.cv.fiducial_times = detail::read_levels(p->raw("fiducial_times"), "process.fiducial_times");
        c.cv.test_step = p->get("test_step", c.cv.test_step);
        c.cv.test_horizon = p->get("test_horizon", c.cv.test_horizon);
        if (auto g = p->sub("grid")) {
          c.cv.grid.points = g->get("points", c.cv.grid.points);
          const double ext = g->get("extent", c.cv.grid.hi);
          detail::check(ext > 0, "process.grid.extent must be positive");
          c.cv.grid.lo = -ext;
          c.cv.grid.hi = ext;
          g->finish();
        }
        c.cv.dt = p->get("dt", c.cv.dt);
        break;
    }
    p->finish();
  }

  if (auto d = root.sub("dataset")) {
    c.dataset.train = d->get("train", c.dataset.train);
    c.dataset.val = d->get("val", c.dataset.val);
    c.dataset.test = d->get("test", c.dataset.test);
    c.dataset.inputs = d->get("inputs", c.dataset.inputs);
    d->finish();
  }
  if (auto m = root.sub("model")) {
    if (c.experiment == ExperimentKind::CvKerr) {
      c.model.widths = m->get("widths", c.model.widths);
    } else {
      c.model.embed = m->get("embed", c.model.embed);
      c.model.hidden = m->get("hidden", c.model.hidden);
    }
    m->finish();
  }
  if (auto t = root.sub("train")) {
    c.train.epochs = t->get("epochs", c.train.epochs);
    c.train.batch = t->get("batch", c.train.batch);
    c.train.lr = t->get("lr", c.train.lr);
    c.train.cosine_decay = t->get("cosine_decay", c.train.cosine_decay);
    t->finish();
  }
  if (auto b = root.sub("baselines")) {
    c.baselines.zne = b->get("zne", c.baselines.zne);
    c.baselines.cdr = b->get("cdr", c.baselines.cdr);
    c.baselines.cdr_variants = b->get("cdr_variants", c.baselines.cdr_variants);
    b->finish();
  }
  root.finish();

  if (const char* env = std::getenv("DAEM_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      c.seed = std::stoull(env, &pos);
      if (pos != std::strlen(env)) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError(std::string("DAEM_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  if (override_seed) c.seed = *override_seed;

  // validation
  using detail::check;
  check(c.threads >= 1, "threads must be >= 1");
  check(c.shots >= 0, "shots must be >= 0");
  check(c.memory_budget_mb > 0, "memory_budget_mb must be positive");
  try {
    validate_level_grid(c.noise.levels);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("noise.levels: ") + e.what());
  }
  if (c.experiment == ExperimentKind::CvKerr) {
    check(c.noise.kind == "loss", "cv-kerr noise kind must be 'loss'");
    check(c.cv.n_trunc >= 2 && c.cv.n_records >= 1 && c.cv.n_train_states >= 1 && c.cv.n_train_states <= c.cv.n_records,
          "cv-kerr needs n_trunc >= 2 and 1 <= n_train_states <= n_records");
    check(c.cv.grid.points >= 8 && c.cv.grid.points % 8 == 0, "process.grid.points must be a positive multiple of 8");
    check(c.cv.dt > 0 && c.cv.test_step > 0 && c.cv.test_horizon >= 0 && c.cv.record_step > 0, "cv-kerr times must be positive");
  } else {
    if (c.noise.kind == "spin-boson") {
      try {
        c.noise.bath.bath.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      check(c.is_circuit(), "spin-boson noise applies to circuit experiments only");
      check(c.noise.levels.front() > 0, "spin-boson gate times must be positive");
    } else {
      try {
        (void)channel_kind_from_string(c.noise.kind);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      for (double l : c.noise.levels) check(l <= 1.0, "channel noise levels must lie in [0, 1]");
    }
    check(c.n_qubits() >= 1, "process needs at least one qubit");
    check(c.n_qubits() <= kMaxDenseQubits, "infeasible size: " + std::to_string(c.n_qubits()) + " qubits exceeds the dense limit of " +
                                               std::to_string(kMaxDenseQubits));
    check(c.dataset.train >= 1 && c.dataset.val >= 0 && c.dataset.test >= 1, "dataset sizes must be train >= 1, val >= 0, test >= 1");
  }
  if (c.experiment == ExperimentKind::Vqe) {
    check(c.vqe.layers >= 1 && !c.vqe.fields.empty(), "vqe needs layers >= 1 and at least one field value");
    check(c.vqe.qubits >= 2, "vqe needs at least 2 qubits");
  }
  if (c.experiment == ExperimentKind::SwapTest) check(c.swap.register_size >= 1, "register_size must be >= 1");
  if (c.experiment == ExperimentKind::Qaoa) {
    check(c.qaoa.depth >= 1 && c.qaoa.vertices >= 2, "qaoa needs depth >= 1 and >= 2 vertices");
    for (auto [a, b] : c.qaoa.edges)
      check(a >= 0 && b >= 0 && a < c.qaoa.vertices && b < c.qaoa.vertices && a != b, "qaoa edge out of range");
  }
  if (c.experiment == ExperimentKind::SpinDynamics) check(c.spin.qubits >= 2 && c.spin.time >= 0, "spin-dynamics needs >= 2 qubits and time >= 0");
  check(c.train.epochs >= 1 && c.train.batch >= 1 && c.train.lr > 0, "train needs epochs >= 1, batch >= 1, lr > 0");
  check(c.model.embed >= 0, "model.embed must be >= 0");
  for (int h : c.model.hidden) check(h >= 1, "model.hidden widths must be positive");
  for (int w : c.model.widths) check(w >= 1, "model.widths must be positive");
  check(c.baselines.cdr_variants >= 2, "baselines.cdr_variants must be >= 2");

  const double need = c.memory_estimate_mb();
  if (need > c.memory_budget_mb) {
    std::ostringstream msg;
    msg << "infeasible size: estimated " << std::llround(need) << " MiB exceeds the memory budget of "
        << std::llround(c.memory_budget_mb) << " MiB";
    throw ConfigError(msg.str());
  }
  return c;
}

inline Json parse_jsonc(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> override_seed = std::nullopt) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(parse_jsonc(buf.str(), path), override_seed);
}

}  // namespace daem::harness
