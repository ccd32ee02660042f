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

// Training losses over (out_dim x batch) predictions.
//   L2: mean squared error over all entries.
//   KL: mean over samples of sum_x p log(p / q), p the prediction, q the label,
//       both smoothed by eps = 1e-8 and renormalized. The direction follows the
//       written cost (prediction first), not the more common KL(label || pred).
//   L1: mean absolute error over all entries.

#include "daem/nn/params.hpp"

namespace daem::nn {

enum class LossKind { L2, KL, L1 };

inline constexpr double kKlEpsilon = 1e-8;

inline std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::L2: return "l2";
    case LossKind::KL: return "kl";
    case LossKind::L1: return "l1";
  }
  return "?";
}

inline LossKind loss_from_string(std::string_view s) {
  if (s == "l2") return LossKind::L2;
  if (s == "kl") return LossKind::KL;
  if (s == "l1") return LossKind::L1;
  throw std::invalid_argument("unknown loss '" + std::string(s) + "'");
}

/// Loss value; writes dL/dy into grad when non-null.
template <class T>
T loss(LossKind kind, const Mat<T>& y, const Mat<T>& label, Mat<T>* grad = nullptr) {
  if (y.rows() != label.rows() || y.cols() != label.cols()) throw std::invalid_argument("prediction/label shape mismatch");
  if (y.size() == 0) throw std::invalid_argument("empty prediction");
  const auto n_all = static_cast<T>(y.size());
  const auto n_samples = static_cast<T>(y.cols());
  switch (kind) {
    case LossKind::L2: {
      const Mat<T> d = y - label;
      if (grad) *grad = (T(2) / n_all) * d;
      return d.squaredNorm() / n_all;
    }
    case LossKind::L1: {
      const Mat<T> d = y - label;
      if (grad) *grad = d.unaryExpr([](T v) { return T((v > 0) - (v < 0)); }) / n_all;
      return d.cwiseAbs().sum() / n_all;
    }
    case LossKind::KL: {
      const T eps = static_cast<T>(kKlEpsilon);
      const auto k = static_cast<T>(y.rows());
      T total = 0;
      if (grad) grad->resize(y.rows(), y.cols());
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        if ((y.col(j).array() < T(0)).any() || (label.col(j).array() < T(0)).any())
          throw std::invalid_argument("KL inputs must be non-negative");
        const T ys = y.col(j).sum() + eps * k, ls = label.col(j).sum() + eps * k;
        T kl = 0;
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
          const T p = (y(i, j) + eps) / ys;
          const T lr = std::log(p / ((label(i, j) + eps) / ls));
          kl += p * lr;
          if (grad) (*grad)(i, j) = lr;
        }
        // d/dy through the renormalization: (log-ratio - KL) / sum
        if (grad) grad->col(j) = (grad->col(j).array() - kl) / (ys * n_samples);
        total += kl;
      }
      return total / n_samples;
    }
  }
  return T(0);
}

inline double loss_l2(const std::vector<double>& pred, const std::vector<double>& label) {
  return loss<double>(LossKind::L2, Eigen::Map<const Vec<double>>(pred.data(), static_cast<Eigen::Index>(pred.size())),
                      Eigen::Map<const Vec<double>>(label.data(), static_cast<Eigen::Index>(label.size())));
}

inline double loss_kl(const std::vector<double>& pred, const std::vector<double>& label) {
  return loss<double>(LossKind::KL, Eigen::Map<const Vec<double>>(pred.data(), static_cast<Eigen::Index>(pred.size())),
                      Eigen::Map<const Vec<double>>(label.data(), static_cast<Eigen::Index>(label.size())));
}

inline double loss_l1(const std::vector<double>& pred, const std::vector<double>& label) {
  return loss<double>(LossKind::L1, Eigen::Map<const Vec<double>>(pred.data(), static_cast<Eigen::Index>(pred.size())),
                      Eigen::Map<const Vec<double>>(label.data(), static_cast<Eigen::Index>(label.size())));
}

}  // namespace daem::nn
