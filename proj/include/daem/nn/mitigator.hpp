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

// Model configuration, sample encoding, training loop, inference, gradient
// check and binary checkpoints for the neural mitigator.

#include "daem/dataset/sample.hpp"
#include "daem/nn/adam.hpp"
#include "daem/nn/loss.hpp"
#include "daem/nn/mlp.hpp"
#include "daem/nn/unet.hpp"
#include "daem/random.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <variant>

namespace daem::nn {

enum class ModelKind { Mlp, UNet };

struct ModelConfig {
  ModelKind kind = ModelKind::Mlp;
  MlpSpec mlp;
  UNetSpec unet;
  double p_scale = 1.0;  // multiplies the noisy statistics on input

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["p_scale"] = p_scale;
    if (kind == ModelKind::Mlp) {
      j["kind"] = "mlp";
      j["g_dim"] = mlp.g_dim;
      j["m_dim"] = mlp.m_dim;
      j["p_dim"] = mlp.p_dim;
      j["embed"] = mlp.embed;
      j["hidden"] = mlp.hidden;
      j["out_dim"] = mlp.out_dim;
      j["head"] = to_string(mlp.head);
      j["residual"] = mlp.residual;
    } else {
      j["kind"] = "unet";
      j["in_channels"] = unet.in_channels;
      j["size"] = unet.size;
      j["widths"] = unet.widths;
    }
    return j;
  }

  static ModelConfig from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.p_scale = j.at("p_scale").get<double>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "mlp") {
      c.kind = ModelKind::Mlp;
      c.mlp.g_dim = j.at("g_dim").get<int>();
      c.mlp.m_dim = j.at("m_dim").get<int>();
      c.mlp.p_dim = j.at("p_dim").get<int>();
      c.mlp.embed = j.at("embed").get<int>();
      c.mlp.hidden = j.at("hidden").get<std::vector<int>>();
      c.mlp.out_dim = j.at("out_dim").get<int>();
      c.mlp.head = head_from_string(j.at("head").get<std::string>());
      c.mlp.residual = j.value("residual", false);
    } else if (kind == "unet") {
      c.kind = ModelKind::UNet;
      c.unet.in_channels = j.at("in_channels").get<int>();
      c.unet.size = j.at("size").get<int>();
      c.unet.widths = j.at("widths").get<std::array<int, 3>>();
    } else {
      throw std::invalid_argument("unknown model kind '" + kind + "'");
    }
    return c;
  }
};

/// MLP sized for a sample; distributions are scaled by their length so a uniform input reads as ones.
inline ModelConfig mlp_config_for(const DatasetSample& s, Head head, int embed = 128,
                                  std::vector<int> hidden = {512, 1024, 1024}) {
  ModelConfig c;
  c.kind = ModelKind::Mlp;
  c.mlp.g_dim = 1;
  c.mlp.m_dim = static_cast<int>(s.observable.size());
  c.mlp.p_dim = static_cast<int>(s.levels() * s.stat_size());
  c.mlp.embed = embed;
  c.mlp.hidden = std::move(hidden);
  c.mlp.out_dim = static_cast<int>(s.stat_size());
  c.mlp.head = head;
  if (head == Head::Softmax) {
    c.p_scale = static_cast<double>(s.stat_size());
    c.mlp.residual = true;
  }
  return c;
}

inline ModelConfig unet_config_for(const DatasetSample& s, std::array<int, 3> widths = {8, 16, 32}) {
  ModelConfig c;
  c.kind = ModelKind::UNet;
  const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.stat_size()))));
  if (static_cast<std::size_t>(side) * static_cast<std::size_t>(side) != s.stat_size())
    throw std::invalid_argument("conv model needs square grids");
  c.unet.in_channels = static_cast<int>(s.levels()) + 1;
  c.unet.size = side;
  c.unet.widths = widths;
  return c;
}

template <class T>
struct BatchCache {
  MlpInput<T> in;
  typename Mlp<T>::Cache mlp;
  std::vector<RowMat<T>> xs;
  std::vector<typename UNet<T>::Cache> unet;
};

/// Network of either kind plus the sample encoding.
template <class T>
class Net {
 public:
  explicit Net(const ModelConfig& cfg) : cfg_(cfg), model_(make(cfg)) {}

  const ModelConfig& config() const { return cfg_; }
  const ParamTable& table() const {
    return std::visit([](const auto& m) -> const ParamTable& { return m.table(); }, model_);
  }
  Eigen::Index num_params() const { return table().total(); }
  int out_dim() const {
    return std::visit([](const auto& m) { return m.out_dim(); }, model_);
  }

  Vec<T> initialize(std::uint64_t seed) const {
    Rng rng = make_rng(seed, {0x1417});
    return table().template initialize<T>(rng);
  }

  Mat<T> labels(const std::vector<const DatasetSample*>& batch) const {
    Mat<T> l(out_dim(), static_cast<Eigen::Index>(batch.size()));
    for (std::size_t j = 0; j < batch.size(); ++j) {
      if (batch[j]->p0.size() != static_cast<std::size_t>(out_dim()))
        throw std::invalid_argument("label width does not match the model output");
      for (std::size_t i = 0; i < batch[j]->p0.size(); ++i)
        l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<T>(batch[j]->p0[i]);
    }
    return l;
  }

  Mat<T> forward(const Vec<T>& p, const std::vector<const DatasetSample*>& batch, BatchCache<T>& cache) const {
    const auto b = static_cast<Eigen::Index>(batch.size());
    if (const auto* mlp = std::get_if<Mlp<T>>(&model_)) {
      const auto& s = mlp->spec();
      cache.in.g.resize(s.g_dim, b);
      cache.in.m.resize(s.m_dim, b);
      cache.in.p.resize(s.p_dim, b);
      for (Eigen::Index j = 0; j < b; ++j) {
        const DatasetSample& x = *batch[static_cast<std::size_t>(j)];
        if (x.observable.size() != static_cast<std::size_t>(s.m_dim) || x.levels() * x.stat_size() != static_cast<std::size_t>(s.p_dim))
          throw std::invalid_argument("sample does not match the MLP input widths");
        cache.in.g(0, j) = static_cast<T>(x.g);
        for (std::size_t i = 0; i < x.observable.size(); ++i) cache.in.m(static_cast<Eigen::Index>(i), j) = static_cast<T>(x.observable[i]);
        Eigen::Index r = 0;
        for (const auto& row : x.P)
          for (double v : row) cache.in.p(r++, j) = static_cast<T>(v * cfg_.p_scale);
      }
      return mlp->forward(p, cache.in, &cache.mlp);
    }
    const auto& net = std::get<UNet<T>>(model_);
    const auto& s = net.spec();
    const Eigen::Index px = static_cast<Eigen::Index>(s.size) * s.size;
    Mat<T> y(px, b);
    cache.xs.resize(static_cast<std::size_t>(b));
    cache.unet.resize(static_cast<std::size_t>(b));
    for (Eigen::Index j = 0; j < b; ++j) {
      const DatasetSample& x = *batch[static_cast<std::size_t>(j)];
      if (static_cast<int>(x.levels()) + 1 != s.in_channels || static_cast<Eigen::Index>(x.stat_size()) != px)
        throw std::invalid_argument("sample does not match the conv model input");
      RowMat<T>& in = cache.xs[static_cast<std::size_t>(j)];
      in.resize(s.in_channels, px);
      in.row(0).setConstant(static_cast<T>(x.g));
      for (std::size_t k = 0; k < x.levels(); ++k)
        for (Eigen::Index i = 0; i < px; ++i) in(static_cast<Eigen::Index>(k) + 1, i) = static_cast<T>(x.P[k][static_cast<std::size_t>(i)] * cfg_.p_scale);
      y.col(j) = net.forward(p, in, &cache.unet[static_cast<std::size_t>(j)]).row(0).transpose();
    }
    return y;
  }

  void backward(const Vec<T>& p, const BatchCache<T>& cache, const Mat<T>& dy, Vec<T>& grad) const {
    if (const auto* mlp = std::get_if<Mlp<T>>(&model_)) {
      mlp->backward(p, cache.in, cache.mlp, dy, grad);
      return;
    }
    const auto& net = std::get<UNet<T>>(model_);
    for (Eigen::Index j = 0; j < dy.cols(); ++j) {
      const RowMat<T> d = dy.col(j).transpose();
      net.backward(p, cache.xs[static_cast<std::size_t>(j)], cache.unet[static_cast<std::size_t>(j)], d, grad);
    }
  }

 private:
  static std::variant<Mlp<T>, UNet<T>> make(const ModelConfig& cfg) {
    if (cfg.kind == ModelKind::Mlp) return Mlp<T>(cfg.mlp);
    return UNet<T>(cfg.unet);
  }

  ModelConfig cfg_;
  std::variant<Mlp<T>, UNet<T>> model_;
};

struct TrainConfig {
  int epochs = 300;
  int batch = 64;
  AdamConfig adam;
  LossKind loss = LossKind::L2;
  std::uint64_t seed = 0;
  bool cosine_decay = true;  // lr(epoch) = lr * (1 + cos(pi * (epoch - 1) / epochs)) / 2

  double lr_at(int epoch) const {
    if (!cosine_decay) return adam.lr;
    return adam.lr * 0.5 * (1.0 + std::cos(std::numbers::pi * (epoch - 1) / epochs));
  }
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  Vec<float> params;  // best-validation snapshot
  AdamState<float> adam;
  int best_epoch = 0;
  double best_val = 0.0;
  std::vector<double> train_loss, val_loss;
};

namespace detail {

inline std::vector<const DatasetSample*> pointers(const std::vector<DatasetSample>& v) {
  std::vector<const DatasetSample*> out;
  for (const auto& s : v) out.push_back(&s);
  return out;
}

template <class T>
double evaluate_loss(const Net<T>& net, const Vec<T>& p, const std::vector<const DatasetSample*>& set, LossKind kind,
                     std::size_t chunk) {
  double total = 0.0;
  BatchCache<T> cache;
  for (std::size_t i = 0; i < set.size(); i += chunk) {
    const std::vector<const DatasetSample*> b(set.begin() + static_cast<std::ptrdiff_t>(i),
                                              set.begin() + static_cast<std::ptrdiff_t>(std::min(set.size(), i + chunk)));
    total += static_cast<double>(loss<T>(kind, net.forward(p, b, cache), net.labels(b))) * static_cast<double>(b.size());
  }
  return total / static_cast<double>(set.size());
}

}  // namespace detail

/// Minibatch Adam; batches drawn without replacement and reshuffled every epoch.
/// Returns the parameters with the lowest validation loss (training loss when
/// no validation set is given). Throws on a non-finite loss or gradient.
inline TrainResult train(const ModelConfig& cfg, const std::vector<DatasetSample>& train_set,
                         const std::vector<DatasetSample>& val_set, const TrainConfig& tc,
                         const std::function<void(const EpochStats&)>& on_epoch = {}) {
  if (train_set.empty()) throw std::invalid_argument("training set is empty");
  if (tc.epochs < 1 || tc.batch < 1 || !(tc.adam.lr > 0.0)) throw std::invalid_argument("invalid training config");
  const Net<float> net(cfg);
  Vec<float> p = net.initialize(tc.seed);
  TrainResult res;
  res.adam.reset(p.size());
  res.best_val = std::numeric_limits<double>::infinity();
  const auto tr = detail::pointers(train_set);
  const auto va = detail::pointers(val_set);
  std::vector<std::size_t> order(tr.size());
  BatchCache<float> cache;
  Vec<float> grad;
  Mat<float> dy;
  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(tc.seed, {0x5348, static_cast<std::uint64_t>(epoch)});
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    AdamConfig step_cfg = tc.adam;
    step_cfg.lr = tc.lr_at(epoch);
    for (std::size_t start = 0, bi = 0; start < order.size(); start += static_cast<std::size_t>(tc.batch), ++bi) {
      std::vector<const DatasetSample*> b;
      for (std::size_t k = start; k < std::min(order.size(), start + static_cast<std::size_t>(tc.batch)); ++k)
        b.push_back(tr[order[k]]);
      const Mat<float> y = net.forward(p, b, cache);
      const float l = loss<float>(tc.loss, y, net.labels(b), &dy);
      grad.setZero(p.size());
      net.backward(p, cache, dy, grad);
      if (!std::isfinite(l) || !grad.allFinite())
        throw std::runtime_error("training diverged: non-finite " + std::string(std::isfinite(l) ? "gradient" : "loss") +
                                 " at epoch " + std::to_string(epoch) + ", batch " + std::to_string(bi) +
                                 " (lr=" + std::to_string(tc.adam.lr) + ", batch size " + std::to_string(b.size()) + ")");
      adam_step(p, grad, res.adam, step_cfg);
      epoch_loss += static_cast<double>(l) * static_cast<double>(b.size());
    }
    EpochStats st{epoch, epoch_loss / static_cast<double>(tr.size()), 0.0};
    st.val_loss = va.empty() ? st.train_loss : detail::evaluate_loss(net, p, va, tc.loss, 64);
    res.train_loss.push_back(st.train_loss);
    res.val_loss.push_back(st.val_loss);
    if (st.val_loss < res.best_val) {
      res.best_val = st.val_loss;
      res.best_epoch = epoch;
      res.params = p;
    }
    if (on_epoch) on_epoch(st);
  }
  return res;
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coordinates = 0;
};

/// Central finite differences of f(p) = sum r . forward(p) against backprop,
/// with r a fixed Gaussian functional. Relative error |a - n| / max(|a|, |n|, floor).
inline GradCheckResult grad_check(const ModelConfig& cfg, const Vec<double>& params, const DatasetSample& sample,
                                  std::size_t coords = 200, double h = 1e-5, std::uint64_t seed = 0,
                                  double floor = 1e-7) {
  const Net<double> net(cfg);
  const std::vector<const DatasetSample*> one{&sample};
  Rng rng = make_rng(seed, {0x4743});
  std::normal_distribution<double> normal;
  Mat<double> r(net.out_dim(), 1);
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = normal(rng);
  BatchCache<double> cache;
  net.forward(params, one, cache);
  Vec<double> grad = Vec<double>::Zero(params.size());
  net.backward(params, cache, r, grad);
  auto f = [&](const Vec<double>& p) {
    BatchCache<double> c;
    return (net.forward(p, one, c).array() * r.array()).sum();
  };
  std::uniform_int_distribution<Eigen::Index> pick(0, params.size() - 1);
  GradCheckResult res;
  Vec<double> p = params;
  for (std::size_t k = 0; k < coords; ++k) {
    const Eigen::Index i = pick(rng);
    const double orig = p(i);
    p(i) = orig + h;
    const double fp = f(p);
    p(i) = orig - h;
    const double fm = f(p);
    p(i) = orig;
    const double num = (fp - fm) / (2.0 * h);
    const double rel = std::abs(num - grad(i)) / std::max({std::abs(num), std::abs(grad(i)), floor});
    res.max_rel_error = std::max(res.max_rel_error, rel);
    ++res.coordinates;
  }
  return res;
}

/// Trained model snapshot: configuration, parameters and optimizer state.
class Mitigator {
 public:
  static constexpr char kMagic[8] = {'D', 'A', 'E', 'M', 'C', 'K', 'P', 'T'};
  static constexpr std::uint32_t kVersion = 1;

  Mitigator(ModelConfig cfg, Vec<float> params, LossKind loss_kind, AdamState<float> adam = {},
            std::string config_hash = {})
      : cfg_(std::move(cfg)),
        net_(std::make_shared<Net<float>>(cfg_)),
        params_(std::move(params)),
        loss_(loss_kind),
        adam_(std::move(adam)),
        hash_(std::move(config_hash)) {
    if (params_.size() != net_->num_params()) throw std::invalid_argument("parameter count does not match the model");
    if (!params_.allFinite()) throw std::invalid_argument("non-finite model parameters");
  }

  const ModelConfig& config() const { return cfg_; }
  const Vec<float>& params() const { return params_; }
  LossKind loss_kind() const { return loss_; }
  const std::string& config_hash() const { return hash_; }
  const AdamState<float>& adam() const { return adam_; }

  /// Stateless batched inference; each sample is processed independently of the others.
  std::vector<std::vector<double>> predict(const std::vector<DatasetSample>& samples, std::size_t chunk = 64) const {
    std::vector<std::vector<double>> out;
    const auto ptrs = detail::pointers(samples);
    BatchCache<float> cache;
    for (std::size_t i = 0; i < ptrs.size(); i += chunk) {
      const std::vector<const DatasetSample*> b(ptrs.begin() + static_cast<std::ptrdiff_t>(i),
                                                ptrs.begin() + static_cast<std::ptrdiff_t>(std::min(ptrs.size(), i + chunk)));
      const Mat<float> y = net_->forward(params_, b, cache);
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        std::vector<double> v(static_cast<std::size_t>(y.rows()));
        for (Eigen::Index k = 0; k < y.rows(); ++k) v[static_cast<std::size_t>(k)] = static_cast<double>(y(k, j));
        out.push_back(std::move(v));
      }
    }
    return out;
  }

  std::vector<double> mitigate(const std::vector<std::vector<double>>& P, double g, const std::vector<double>& observable) const {
    DatasetSample s;
    s.g = g;
    s.observable = observable;
    s.P = P;
    s.p0.assign(P.empty() ? 0 : P.front().size(), 0.0);
    return predict({s}).front();
  }

  void save(std::ostream& out) const {
    out.write(kMagic, sizeof kMagic);
    write_pod(out, kVersion);
    write_string(out, cfg_.to_json().dump());
    write_string(out, to_string(loss_));
    write_string(out, hash_);
    write_vec(out, params_);
    write_pod(out, adam_.step);
    write_vec(out, adam_.m);
    write_vec(out, adam_.v);
    if (!out) throw std::runtime_error("checkpoint write failed");
  }

  static Mitigator load(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || !std::equal(magic, magic + 8, kMagic)) throw std::runtime_error("not a mitigator checkpoint");
    if (read_pod<std::uint32_t>(in) != kVersion) throw std::runtime_error("unsupported checkpoint version");
    ModelConfig cfg = ModelConfig::from_json(nlohmann::json::parse(read_string(in)));
    const LossKind lk = loss_from_string(read_string(in));
    std::string hash = read_string(in);
    Vec<float> params = read_vec(in);
    AdamState<float> adam;
    adam.step = read_pod<std::int64_t>(in);
    adam.m = read_vec(in);
    adam.v = read_vec(in);
    return {std::move(cfg), std::move(params), lk, std::move(adam), std::move(hash)};
  }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    save(f);
  }

  static Mitigator load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    return load(f);
  }

 private:
  template <class P>
  static void write_pod(std::ostream& out, P v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  template <class P>
  static P read_pod(std::istream& in) {
    P v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("truncated checkpoint");
    return v;
  }
  static void write_string(std::ostream& out, const std::string& s) {
    write_pod(out, static_cast<std::uint64_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  static std::string read_string(std::istream& in) {
    const auto n = read_pod<std::uint64_t>(in);
    if (n > (1u << 26)) throw std::runtime_error("corrupt checkpoint string");
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("truncated checkpoint");
    return s;
  }
  static void write_vec(std::ostream& out, const Vec<float>& v) {
    write_pod(out, static_cast<std::int64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
  }
  static Vec<float> read_vec(std::istream& in) {
    const auto n = read_pod<std::int64_t>(in);
    if (n < 0 || n > (std::int64_t{1} << 32)) throw std::runtime_error("corrupt checkpoint vector");
    Vec<float> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * static_cast<std::int64_t>(sizeof(float))));
    if (!in) throw std::runtime_error("truncated checkpoint");
    return v;
  }

  ModelConfig cfg_;
  std::shared_ptr<const Net<float>> net_;
  Vec<float> params_;
  LossKind loss_;
  AdamState<float> adam_;
  std::string hash_;
};

}  // namespace daem::nn
