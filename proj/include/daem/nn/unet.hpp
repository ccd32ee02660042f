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

// Conv encoder-decoder for Wigner grids. Feature maps are C x (H*W) row-major.
// Block = 3x3 conv (zero pad) -> Mish -> instance norm with per-channel affine.
// Encoder: embedding (2 blocks) then 3 x [2x2 average pool, 2 blocks].
// Decoder: 3 x [bilinear x2 upsample, concat skip, 2 blocks]. Head: 1x1 conv + tanh.

#include "daem/nn/params.hpp"

#include <array>

namespace daem::nn {

struct UNetSpec {
  int in_channels = 6;
  int size = 48;
  std::array<int, 3> widths{8, 16, 32};

  void validate() const {
    if (in_channels < 1) throw std::invalid_argument("conv model needs input channels");
    if (size < 8 || size % 8 != 0) throw std::invalid_argument("grid size must be a positive multiple of 8");
    for (int w : widths)
      if (w < 1) throw std::invalid_argument("channel widths must be positive");
  }
};

namespace detail {

/// Bilinear x2 upsampling along one axis (half-pixel centres, edge clamped): (2n x n).
template <class T>
Mat<T> upsample_matrix(int n) {
  Mat<T> u = Mat<T>::Zero(2 * n, n);
  for (int i = 0; i < 2 * n; ++i) {
    const double src = std::max(0.0, (i + 0.5) / 2.0 - 0.5);
    const int i0 = std::min(static_cast<int>(src), n - 1);
    const int i1 = std::min(i0 + 1, n - 1);
    const double f = src - i0;
    u(i, i0) += static_cast<T>(1.0 - f);
    u(i, i1) += static_cast<T>(f);
  }
  return u;
}

/// 2x2 average pooling along one axis: (n/2 x n).
template <class T>
Mat<T> pool_matrix(int n) {
  Mat<T> d = Mat<T>::Zero(n / 2, n);
  for (int i = 0; i < n / 2; ++i) d(i, 2 * i) = d(i, 2 * i + 1) = T(0.5);
  return d;
}

/// Per channel: out_c = A X_c B^T where X_c is the channel's (s x s) map.
template <class T>
RowMat<T> separable(const RowMat<T>& x, int s, const Mat<T>& a, const Mat<T>& b) {
  const auto so = a.rows();
  RowMat<T> out(x.rows(), so * so);
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    Eigen::Map<const RowMat<T>> xc(x.row(c).data(), s, s);
    Eigen::Map<RowMat<T>> oc(out.row(c).data(), so, so);
    oc.noalias() = a * xc * b.transpose();
  }
  return out;
}

/// im2col for a 3x3 kernel with zero padding: (C*9) x (s*s).
template <class T>
RowMat<T> im2col(const RowMat<T>& x, int s) {
  const auto c_in = x.rows();
  RowMat<T> col = RowMat<T>::Zero(c_in * 9, static_cast<Eigen::Index>(s) * s);
  for (Eigen::Index c = 0; c < c_in; ++c)
    for (int ky = 0; ky < 3; ++ky)
      for (int kx = 0; kx < 3; ++kx) {
        T* dst = col.row(c * 9 + ky * 3 + kx).data();
        const T* src = x.row(c).data();
        const int dy = ky - 1, dx = kx - 1;
        for (int y = std::max(0, -dy); y < std::min(s, s - dy); ++y) {
          const int x0 = std::max(0, -dx), x1 = std::min(s, s - dx);
          std::copy(src + (y + dy) * s + x0 + dx, src + (y + dy) * s + x1 + dx, dst + y * s + x0);
        }
      }
  return col;
}

template <class T>
RowMat<T> col2im(const RowMat<T>& col, Eigen::Index c_in, int s) {
  RowMat<T> x = RowMat<T>::Zero(c_in, static_cast<Eigen::Index>(s) * s);
  for (Eigen::Index c = 0; c < c_in; ++c)
    for (int ky = 0; ky < 3; ++ky)
      for (int kx = 0; kx < 3; ++kx) {
        const T* src = col.row(c * 9 + ky * 3 + kx).data();
        T* dst = x.row(c).data();
        const int dy = ky - 1, dx = kx - 1;
        for (int y = std::max(0, -dy); y < std::min(s, s - dy); ++y)
          for (int xx = std::max(0, -dx); xx < std::min(s, s - dx); ++xx) dst[(y + dy) * s + xx + dx] += src[y * s + xx];
      }
  return x;
}

}  // namespace detail

template <class T>
class UNet {
 public:
  static constexpr double kNormEps = 1e-5;

  struct BlockCache {
    RowMat<T> col, z, xhat;
    Vec<T> invstd;
  };
  struct Cache {
    std::vector<BlockCache> blocks;
    std::vector<RowMat<T>> outs;  // block outputs
    RowMat<T> y;
  };

  explicit UNet(UNetSpec spec) : spec_(spec) {
    spec_.validate();
    const auto [c1, c2, c3] = spec_.widths;
    // (in, out, resolution level)
    const int plan[14][3] = {{spec_.in_channels, c1, 0}, {c1, c1, 0}, {c1, c2, 1}, {c2, c2, 1}, {c2, c3, 2},
                             {c3, c3, 2},                {c3, c3, 3}, {c3, c3, 3}, {2 * c3, c2, 2}, {c2, c2, 2},
                             {2 * c2, c1, 1},            {c1, c1, 1}, {2 * c1, c1, 0}, {c1, c1, 0}};
    for (int i = 0; i < 14; ++i) {
      const std::string n = "block" + std::to_string(i);
      Block b;
      b.c_in = plan[i][0];
      b.c_out = plan[i][1];
      b.size = spec_.size >> plan[i][2];
      b.w = table_.add(n + ".w", b.c_out, b.c_in * 9, ParamRole::Weight);
      b.b = table_.add(n + ".b", b.c_out, 1, ParamRole::Bias);
      b.gamma = table_.add(n + ".gamma", b.c_out, 1, ParamRole::Gain);
      b.beta = table_.add(n + ".beta", b.c_out, 1, ParamRole::Bias);
      blocks_.push_back(b);
    }
    head_w_ = table_.add("head.w", 1, c1, ParamRole::Weight);
    head_b_ = table_.add("head.b", 1, 1, ParamRole::Bias);
    for (int l = 0; l < 3; ++l) {
      pool_[l] = detail::pool_matrix<T>(spec_.size >> l);
      up_[l] = detail::upsample_matrix<T>(spec_.size >> (l + 1));
    }
  }

  const UNetSpec& spec() const { return spec_; }
  const ParamTable& table() const { return table_; }
  Eigen::Index num_params() const { return table_.total(); }
  int out_dim() const { return spec_.size * spec_.size; }

  /// One sample: in_channels x (size*size) -> 1 x (size*size).
  RowMat<T> forward(const Vec<T>& p, const RowMat<T>& x, Cache* cache = nullptr) const {
    if (p.size() != table_.total()) throw std::invalid_argument("parameter vector size does not match the conv model");
    if (x.rows() != spec_.in_channels || x.cols() != static_cast<Eigen::Index>(spec_.size) * spec_.size)
      throw std::invalid_argument("conv model input has the wrong shape");
    Cache local;
    Cache& c = cache ? *cache : local;
    c.blocks.assign(blocks_.size(), {});
    c.outs.assign(blocks_.size(), {});
    auto run = [&](int i, const RowMat<T>& in) -> const RowMat<T>& {
      c.outs[i] = block_forward(p, blocks_[i], in, c.blocks[i]);
      return c.outs[i];
    };
    run(0, x);
    run(1, c.outs[0]);
    for (int l = 0; l < 3; ++l) {
      const int s = spec_.size >> l;
      run(2 + 2 * l, detail::separable<T>(c.outs[1 + 2 * l], s, pool_[l], pool_[l]));
      run(3 + 2 * l, c.outs[2 + 2 * l]);
    }
    for (int u = 0; u < 3; ++u) {
      const int l = 2 - u;  // target level
      const int s = spec_.size >> (l + 1);
      const RowMat<T> up = detail::separable<T>(c.outs[7 + 2 * u], s, up_[l], up_[l]);
      const RowMat<T>& skip = c.outs[1 + 2 * l];
      RowMat<T> cat(up.rows() + skip.rows(), up.cols());
      cat << up, skip;
      run(8 + 2 * u, cat);
      run(9 + 2 * u, c.outs[8 + 2 * u]);
    }
    RowMat<T> z = table_.view(p, head_w_) * c.outs[13];
    z.array() += table_.view(p, head_b_)(0, 0);
    c.y = z.array().tanh().matrix();
    return c.y;
  }

  void backward(const Vec<T>& p, const RowMat<T>& x, const Cache& c, const RowMat<T>& dy, Vec<T>& grad) const {
    if (grad.size() != table_.total()) grad = Vec<T>::Zero(table_.total());
    const RowMat<T> dz = dy.cwiseProduct((T(1) - c.y.array().square()).matrix());
    table_.view(grad, head_w_).noalias() += dz * c.outs[13].transpose();
    table_.view(grad, head_b_)(0, 0) += dz.sum();
    std::vector<RowMat<T>> d(blocks_.size());  // gradient w.r.t. each block output
    d[13] = table_.view(p, head_w_).transpose() * dz;
    for (int u = 2; u >= 0; --u) {
      const int l = 2 - u;
      const int s = spec_.size >> (l + 1);
      d[8 + 2 * u] = block_backward(p, blocks_[9 + 2 * u], c.blocks[9 + 2 * u], d[9 + 2 * u], grad);
      const RowMat<T> dcat = block_backward(p, blocks_[8 + 2 * u], c.blocks[8 + 2 * u], d[8 + 2 * u], grad);
      const Eigen::Index n_up = c.outs[7 + 2 * u].rows();
      const RowMat<T> dup = dcat.topRows(n_up);
      accumulate(d[1 + 2 * l], dcat.bottomRows(dcat.rows() - n_up));
      accumulate(d[7 + 2 * u], detail::separable<T>(dup, 2 * s, up_[l].transpose(), up_[l].transpose()));
    }
    for (int l = 2; l >= 0; --l) {
      const int s = spec_.size >> l;
      accumulate(d[2 + 2 * l], block_backward(p, blocks_[3 + 2 * l], c.blocks[3 + 2 * l], d[3 + 2 * l], grad));
      const RowMat<T> dpool = block_backward(p, blocks_[2 + 2 * l], c.blocks[2 + 2 * l], d[2 + 2 * l], grad);
      accumulate(d[1 + 2 * l], detail::separable<T>(dpool, s / 2, pool_[l].transpose(), pool_[l].transpose()));
    }
    accumulate(d[0], block_backward(p, blocks_[1], c.blocks[1], d[1], grad));
    block_backward(p, blocks_[0], c.blocks[0], d[0], grad);
    (void)x;
  }

 private:
  struct Block {
    int c_in = 0, c_out = 0, size = 0;
    std::size_t w = 0, b = 0, gamma = 0, beta = 0;
  };

  static void accumulate(RowMat<T>& into, const RowMat<T>& v) {
    if (into.size() == 0) into = v;
    else into += v;
  }

  RowMat<T> block_forward(const Vec<T>& p, const Block& blk, const RowMat<T>& in, BlockCache& bc) const {
    bc.col = detail::im2col<T>(in, blk.size);
    bc.z = table_.view(p, blk.w) * bc.col;
    bc.z.colwise() += table_.view(p, blk.b).col(0);
    const RowMat<T> a = mish_array(bc.z);
    const auto n = static_cast<T>(a.cols());
    const Vec<T> mean = a.rowwise().sum() / n;
    bc.xhat = a.colwise() - mean;
    bc.invstd = ((bc.xhat.array().square().rowwise().sum() / n) + T(kNormEps)).rsqrt().matrix();
    bc.xhat = bc.invstd.asDiagonal() * bc.xhat;
    RowMat<T> out = table_.view(p, blk.gamma).col(0).asDiagonal() * bc.xhat;
    out.colwise() += table_.view(p, blk.beta).col(0);
    return out;
  }

  /// Returns the gradient w.r.t. the block input.
  RowMat<T> block_backward(const Vec<T>& p, const Block& blk, const BlockCache& bc, const RowMat<T>& dout,
                           Vec<T>& grad) const {
    const auto n = static_cast<T>(dout.cols());
    table_.view(grad, blk.gamma).col(0) += dout.cwiseProduct(bc.xhat).rowwise().sum();
    table_.view(grad, blk.beta).col(0) += dout.rowwise().sum();
    const RowMat<T> dxhat = table_.view(p, blk.gamma).col(0).asDiagonal() * dout;
    const Vec<T> s1 = dxhat.rowwise().sum();
    const Vec<T> s2 = dxhat.cwiseProduct(bc.xhat).rowwise().sum();
    RowMat<T> da = (n * dxhat).colwise() - s1;
    da -= s2.asDiagonal() * bc.xhat;
    da = (bc.invstd / n).asDiagonal() * da;
    const RowMat<T> dz = da.cwiseProduct(mish_grad_array(bc.z));
    table_.view(grad, blk.w).noalias() += dz * bc.col.transpose();
    table_.view(grad, blk.b).col(0) += dz.rowwise().sum();
    const RowMat<T> dcol = table_.view(p, blk.w).transpose() * dz;
    return detail::col2im<T>(dcol, blk.c_in, blk.size);
  }

  UNetSpec spec_;
  ParamTable table_;
  std::vector<Block> blocks_;
  std::size_t head_w_ = 0, head_b_ = 0;
  std::array<Mat<T>, 3> pool_, up_;
};

}  // namespace daem::nn
