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

// Flat parameter vector plus a shape table; layers read and write through views.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace daem::nn {

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ParamRole { Weight, Bias, Gain, ZeroWeight };

struct ParamShape {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index offset = 0;
  ParamRole role = ParamRole::Weight;

  Eigen::Index size() const { return rows * cols; }
};

class ParamTable {
 public:
  std::size_t add(std::string name, Eigen::Index rows, Eigen::Index cols, ParamRole role) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("parameter '" + name + "' has an empty shape");
    shapes_.push_back({std::move(name), rows, cols, total_, role});
    total_ += rows * cols;
    return shapes_.size() - 1;
  }

  const std::vector<ParamShape>& shapes() const { return shapes_; }
  Eigen::Index total() const { return total_; }
  const ParamShape& operator[](std::size_t i) const { return shapes_[i]; }

  template <class T>
  Eigen::Map<Mat<T>> view(Vec<T>& p, std::size_t i) const {
    const auto& s = shapes_[i];
    return {p.data() + s.offset, s.rows, s.cols};
  }
  template <class T>
  Eigen::Map<const Mat<T>> view(const Vec<T>& p, std::size_t i) const {
    const auto& s = shapes_[i];
    return {p.data() + s.offset, s.rows, s.cols};
  }
  template <class T>
  Eigen::Map<RowMat<T>> row_view(Vec<T>& p, std::size_t i) const {
    const auto& s = shapes_[i];
    return {p.data() + s.offset, s.rows, s.cols};
  }
  template <class T>
  Eigen::Map<const RowMat<T>> row_view(const Vec<T>& p, std::size_t i) const {
    const auto& s = shapes_[i];
    return {p.data() + s.offset, s.rows, s.cols};
  }

  /// Weights U(-1/sqrt(fan_in), 1/sqrt(fan_in)) with fan_in = cols, biases and zero-weights 0, gains 1.
  template <class T>
  Vec<T> initialize(std::mt19937_64& rng) const {
    Vec<T> p(total_);
    for (const auto& s : shapes_) {
      auto seg = p.segment(s.offset, s.size());
      switch (s.role) {
        case ParamRole::Bias:
        case ParamRole::ZeroWeight: seg.setZero(); break;
        case ParamRole::Gain: seg.setOnes(); break;
        case ParamRole::Weight: {
          const double bound = 1.0 / std::sqrt(static_cast<double>(s.cols));
          std::uniform_real_distribution<double> u(-bound, bound);
          for (Eigen::Index i = 0; i < seg.size(); ++i) seg(i) = static_cast<T>(u(rng));
          break;
        }
      }
    }
    return p;
  }

 private:
  std::vector<ParamShape> shapes_;
  Eigen::Index total_ = 0;
};

// mish(x) = x tanh(softplus(x)) = x n / (n + 2) with n = e^x (e^x + 2); identity above 20
template <class T>
inline T mish(T x) {
  if (x > T(20)) return x;
  const T e = std::exp(x), n = e * (e + T(2));
  return x * n / (n + T(2));
}

template <class T>
inline T mish_grad(T x) {
  if (x > T(20)) return T(1);
  const T e = std::exp(x), n = e * (e + T(2)), d = n + T(2);
  return n / d + x * T(4) * e * (e + T(1)) / (d * d);
}

template <class Derived>
inline auto mish_array(const Eigen::MatrixBase<Derived>& z) {
  using T = typename Derived::Scalar;
  using Plain = Eigen::Array<T, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime,
                             Derived::IsRowMajor ? Eigen::RowMajor : Eigen::ColMajor>;
  const Plain x = z.array();
  const Plain e = x.min(T(20)).exp();
  const Plain n = e * (e + T(2));
  return (x > T(20)).select(x, x * n / (n + T(2))).matrix().eval();
}

template <class Derived>
inline auto mish_grad_array(const Eigen::MatrixBase<Derived>& z) {
  using T = typename Derived::Scalar;
  using Plain = Eigen::Array<T, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime,
                             Derived::IsRowMajor ? Eigen::RowMajor : Eigen::ColMajor>;
  const Plain x = z.array();
  const Plain e = x.min(T(20)).exp();
  const Plain n = e * (e + T(2));
  const Plain d = n + T(2);
  return (x > T(20)).select(Plain::Ones(x.rows(), x.cols()), n / d + x * T(4) * e * (e + T(1)) / (d * d)).matrix().eval();
}

}  // namespace daem::nn
