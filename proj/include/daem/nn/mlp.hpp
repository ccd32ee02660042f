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

// Embedding MLP: each input stream (g, observable encoding, noisy statistics)
// goes through its own affine map + Mish, the embeddings are concatenated and
// passed through Mish hidden layers to a tanh, softmax or identity head.
// embed = 0 skips the embedding (raw inputs concatenated); with no hidden
// layers and an identity head the model is a single affine map.

#include "daem/nn/params.hpp"

namespace daem::nn {

enum class Head { Tanh, Softmax, Identity };

inline std::string to_string(Head h) {
  switch (h) {
    case Head::Tanh: return "tanh";
    case Head::Softmax: return "softmax";
    case Head::Identity: return "identity";
  }
  return "?";
}

inline Head head_from_string(std::string_view s) {
  if (s == "tanh") return Head::Tanh;
  if (s == "softmax") return Head::Softmax;
  if (s == "identity") return Head::Identity;
  throw std::invalid_argument("unknown head '" + std::string(s) + "'");
}

struct MlpSpec {
  int g_dim = 1;
  int m_dim = 1;
  int p_dim = 1;
  int embed = 128;
  std::vector<int> hidden{512, 1024, 1024};
  int out_dim = 1;
  Head head = Head::Tanh;
  // softmax only: logits offset by log of the first out_dim rows of p (the lowest noise level)
  bool residual = false;

  void validate() const {
    if (g_dim < 1 || m_dim < 1 || p_dim < 1 || out_dim < 1 || embed < 0)
      throw std::invalid_argument("MLP dimensions must be positive");
    for (int h : hidden)
      if (h < 1) throw std::invalid_argument("MLP hidden widths must be positive");
    if (head == Head::Softmax && out_dim < 2) throw std::invalid_argument("softmax head needs >= 2 outputs");
    if (residual && (head != Head::Softmax || p_dim < out_dim))
      throw std::invalid_argument("residual head needs softmax and p_dim >= out_dim");
  }
};

/// Columns are samples.
template <class T>
struct MlpInput {
  Mat<T> g, m, p;
  Eigen::Index batch() const { return g.cols(); }
};

inline constexpr double kResidualFloor = 1e-6;

template <class T>
class Mlp {
 public:
  struct Cache {
    std::vector<Mat<T>> z;  // pre-activations per layer (embeddings first)
    std::vector<Mat<T>> h;  // inputs to each dense layer
    Mat<T> y;
  };

  explicit Mlp(MlpSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    int width = spec_.g_dim + spec_.m_dim + spec_.p_dim;
    if (spec_.embed > 0) {
      const int dims[3] = {spec_.g_dim, spec_.m_dim, spec_.p_dim};
      const char* names[3] = {"embed.g", "embed.m", "embed.p"};
      for (int s = 0; s < 3; ++s) {
        embed_w_[s] = table_.add(std::string(names[s]) + ".w", spec_.embed, dims[s], ParamRole::Weight);
        embed_b_[s] = table_.add(std::string(names[s]) + ".b", spec_.embed, 1, ParamRole::Bias);
      }
      width = 3 * spec_.embed;
    }
    std::vector<int> widths = spec_.hidden;
    widths.push_back(spec_.out_dim);
    for (std::size_t l = 0; l < widths.size(); ++l) {
      const std::string n = "dense" + std::to_string(l);
      // a residual head starts as the identity on its skip input
      const bool zero = spec_.residual && l + 1 == widths.size();
      w_.push_back(table_.add(n + ".w", widths[l], width, zero ? ParamRole::ZeroWeight : ParamRole::Weight));
      b_.push_back(table_.add(n + ".b", widths[l], 1, ParamRole::Bias));
      width = widths[l];
    }
  }

  const MlpSpec& spec() const { return spec_; }
  const ParamTable& table() const { return table_; }
  Eigen::Index num_params() const { return table_.total(); }
  int out_dim() const { return spec_.out_dim; }

  Mat<T> forward(const Vec<T>& p, const MlpInput<T>& in, Cache* cache = nullptr) const {
    check(p, in);
    const Eigen::Index b = in.batch();
    Cache local;
    Cache& c = cache ? *cache : local;
    c.z.clear();
    c.h.clear();
    Mat<T> h;
    if (spec_.embed > 0) {
      h.resize(3 * spec_.embed, b);
      const Mat<T>* xs[3] = {&in.g, &in.m, &in.p};
      for (int s = 0; s < 3; ++s) {
        Mat<T> z = table_.view(p, embed_w_[s]) * (*xs[s]);
        z.colwise() += table_.view(p, embed_b_[s]).col(0);
        h.middleRows(s * spec_.embed, spec_.embed) = mish_array(z);
        c.z.push_back(std::move(z));
      }
    } else {
      h.resize(spec_.g_dim + spec_.m_dim + spec_.p_dim, b);
      h << in.g, in.m, in.p;
    }
    for (std::size_t l = 0; l < w_.size(); ++l) {
      Mat<T> z = table_.view(p, w_[l]) * h;
      z.colwise() += table_.view(p, b_[l]).col(0);
      c.h.push_back(std::move(h));
      if (l + 1 < w_.size()) h = mish_array(z);
      c.z.push_back(std::move(z));
    }
    if (spec_.residual) {
      // softmax is shift invariant, so any positive scale on p drops out
      c.z.back().array() += (in.p.topRows(spec_.out_dim).array().max(T(0)) + T(kResidualFloor)).log();
    }
    c.y = apply_head(c.z.back());
    return c.y;
  }

  /// Accumulates d(sum dy . y)/dp into grad (resized and zeroed when empty).
  void backward(const Vec<T>& p, const MlpInput<T>& in, const Cache& c, const Mat<T>& dy, Vec<T>& grad) const {
    if (grad.size() != table_.total()) grad = Vec<T>::Zero(table_.total());
    const int n_embed = spec_.embed > 0 ? 3 : 0;
    Mat<T> dz = head_backward(c.y, dy);
    for (std::size_t l = w_.size(); l-- > 0;) {
      table_.view(grad, w_[l]).noalias() += dz * c.h[l].transpose();
      table_.view(grad, b_[l]).col(0) += dz.rowwise().sum();
      Mat<T> dh = table_.view(p, w_[l]).transpose() * dz;
      if (l == 0) {
        dz = std::move(dh);
        break;
      }
      dz = dh.cwiseProduct(mish_grad_array(c.z[static_cast<std::size_t>(n_embed) + l - 1]));
    }
    if (n_embed == 0) return;
    const Mat<T>* xs[3] = {&in.g, &in.m, &in.p};
    for (int s = 0; s < 3; ++s) {
      const Mat<T> dze = dz.middleRows(s * spec_.embed, spec_.embed).cwiseProduct(mish_grad_array(c.z[static_cast<std::size_t>(s)]));
      table_.view(grad, embed_w_[s]).noalias() += dze * xs[s]->transpose();
      table_.view(grad, embed_b_[s]).col(0) += dze.rowwise().sum();
    }
  }

 private:
  void check(const Vec<T>& p, const MlpInput<T>& in) const {
    if (p.size() != table_.total()) throw std::invalid_argument("parameter vector size does not match the MLP");
    if (in.g.rows() != spec_.g_dim || in.m.rows() != spec_.m_dim || in.p.rows() != spec_.p_dim)
      throw std::invalid_argument("MLP input widths do not match the model spec");
    if (in.m.cols() != in.batch() || in.p.cols() != in.batch()) throw std::invalid_argument("ragged MLP batch");
  }

  Mat<T> apply_head(const Mat<T>& z) const {
    switch (spec_.head) {
      case Head::Tanh: return z.array().tanh().matrix();
      case Head::Identity: return z;
      case Head::Softmax: {
        Mat<T> y = z;
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
          y.col(j).array() = (y.col(j).array() - y.col(j).maxCoeff()).exp();
          y.col(j) /= y.col(j).sum();
        }
        return y;
      }
    }
    return z;
  }

  Mat<T> head_backward(const Mat<T>& y, const Mat<T>& dy) const {
    switch (spec_.head) {
      case Head::Tanh: return dy.cwiseProduct((T(1) - y.array().square()).matrix());
      case Head::Identity: return dy;
      case Head::Softmax: {
        Mat<T> dz(y.rows(), y.cols());
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
          const T dot = y.col(j).dot(dy.col(j));
          dz.col(j) = y.col(j).cwiseProduct((dy.col(j).array() - dot).matrix());
        }
        return dz;
      }
    }
    return dy;
  }

  MlpSpec spec_;
  ParamTable table_;
  std::size_t embed_w_[3] = {0, 0, 0}, embed_b_[3] = {0, 0, 0};
  std::vector<std::size_t> w_, b_;
};

}  // namespace daem::nn
