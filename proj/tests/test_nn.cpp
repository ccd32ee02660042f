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

#include "daem/nn/mitigator.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace daem;
using namespace daem::nn;

namespace {

DatasetSample scalar_sample(Rng& rng, std::size_t k, std::size_t m_dim, double range = 0.9) {
  std::uniform_real_distribution<double> u(-range, range);
  DatasetSample s;
  s.g = u(rng);
  s.observable.resize(m_dim);
  for (auto& v : s.observable) v = u(rng);
  s.P.assign(k, std::vector<double>(1));
  for (auto& row : s.P) row[0] = u(rng);
  s.p0 = {s.P[0][0]};
  return s;
}

DatasetSample distribution_sample(Rng& rng, std::size_t k, std::size_t dim) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  DatasetSample s;
  s.g = 0.3;
  s.observable = {1.0};
  for (std::size_t r = 0; r < k; ++r) {
    std::vector<double> row(dim);
    double tot = 0;
    for (auto& v : row) tot += (v = u(rng));
    for (auto& v : row) v /= tot;
    s.P.push_back(row);
  }
  s.p0 = s.P[0];
  return s;
}

DatasetSample grid_sample(Rng& rng, std::size_t k, int side) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  DatasetSample s;
  s.g = 0.45;
  s.observable = {1.0, 0.0};
  s.P.assign(k, std::vector<double>(static_cast<std::size_t>(side * side)));
  for (auto& row : s.P)
    for (auto& v : row) v = u(rng);
  s.p0 = s.P[0];
  return s;
}

std::vector<DatasetSample> identity_task(std::size_t n, std::uint64_t seed, bool shuffle_labels) {
  Rng rng(seed);
  std::vector<DatasetSample> v;
  // targets kept inside the near-linear part of the tanh head
  for (std::size_t i = 0; i < n; ++i) v.push_back(scalar_sample(rng, 5, 3, 0.7));
  if (shuffle_labels) {
    std::vector<double> labels;
    for (const auto& s : v) labels.push_back(s.p0[0]);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < n; ++i) v[i].p0 = {labels[i]};
  }
  return v;
}

}  // namespace

TEST(Mish, Examples) {
  EXPECT_EQ(mish(0.0), 0.0);
  EXPECT_NEAR(mish(10.0), 10.0, 1e-3);
  EXPECT_NEAR(mish(-20.0), 0.0, 1e-6);
  EXPECT_NEAR(mish(1.0), std::tanh(std::log1p(std::exp(1.0))), 1e-15);
  // derivative against central differences
  for (double x : {-5.0, -1.2, -0.1, 0.0, 0.7, 3.0, 19.0}) {
    const double h = 1e-6;
    EXPECT_NEAR(mish_grad(x), (mish(x + h) - mish(x - h)) / (2 * h), 1e-8) << x;
  }
}

TEST(Loss, Examples) {
  EXPECT_DOUBLE_EQ(loss_l2({0.5}, {0.0}), 0.25);
  EXPECT_NEAR(loss_kl({0.5, 0.5}, {0.75, 0.25}), 0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(0.5 / 0.25), 1e-7);
  EXPECT_NEAR(loss_kl({0.5, 0.5}, {0.75, 0.25}), 0.1438, 5e-5);
  EXPECT_DOUBLE_EQ(loss_l1({0.5, -0.5}, {0.0, 0.0}), 0.5);
  const std::vector<double> p{0.1, 0.2, 0.7};
  EXPECT_EQ(loss_l2(p, p), 0.0);
  EXPECT_EQ(loss_l1(p, p), 0.0);
  EXPECT_NEAR(loss_kl(p, p), 0.0, 1e-15);
  EXPECT_GE(loss_kl({1.0, 0.0}, {0.0, 1.0}), 0.0);
  EXPECT_THROW(loss_kl({-0.1, 1.1}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(loss_l2({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST(Loss, GradientsMatchFiniteDifferences) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (LossKind kind : {LossKind::L2, LossKind::KL, LossKind::L1}) {
    Mat<double> y(4, 3), l(4, 3);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      y(i) = u(rng);
      l(i) = u(rng);
    }
    Mat<double> g;
    loss<double>(kind, y, l, &g);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      Mat<double> a = y, b = y;
      a(i) += 1e-6;
      b(i) -= 1e-6;
      EXPECT_NEAR(g(i), (loss<double>(kind, a, l) - loss<double>(kind, b, l)) / 2e-6, 1e-7) << to_string(kind);
    }
  }
}

TEST(Adam, Examples) {
  Vec<double> p = Vec<double>::LinSpaced(5, -1.0, 1.0);
  const Vec<double> p_orig = p;
  AdamState<double> st;
  adam_step(p, Vec<double>::Zero(5).eval(), st, AdamConfig{});
  EXPECT_EQ(p, p_orig);

  Vec<double> q = Vec<double>::Zero(4);
  AdamState<double> st2;
  const AdamConfig cfg;
  adam_step(q, Vec<double>::Ones(4).eval(), st2, cfg);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(q(i), -cfg.lr, 1e-11);

  Vec<double> x = Vec<double>::Ones(1);
  AdamState<double> st3;
  const AdamConfig big{0.1};
  double prev = x.squaredNorm();
  for (int k = 0; k < 2; ++k) {
    adam_step(x, (2.0 * x).eval(), st3, big);
    EXPECT_LT(x.squaredNorm(), prev);
    prev = x.squaredNorm();
  }
  Vec<double> wrong = Vec<double>::Zero(3);
  EXPECT_THROW(adam_step(wrong, Vec<double>::Zero(2).eval(), st3, cfg), std::invalid_argument);
}

TEST(Forward, ZeroWeightsAndDeterminism) {
  Rng rng(5);
  const DatasetSample s = scalar_sample(rng, 5, 3);
  const Net<float> scalar(mlp_config_for(s, Head::Tanh));
  EXPECT_EQ(scalar.num_params(), 128 * (1 + 3 + 5) + 3 * 128 + 384 * 512 + 512 + 512 * 1024 + 1024 + 1024 * 1024 + 1024 +
                                     1024 + 1);
  BatchCache<float> cache;
  const std::vector<const DatasetSample*> one{&s};
  EXPECT_EQ(scalar.forward(Vec<float>::Zero(scalar.num_params()), one, cache)(0, 0), 0.0f);

  const DatasetSample d = distribution_sample(rng, 3, 8);
  ModelConfig plain_cfg = mlp_config_for(d, Head::Softmax);
  ASSERT_TRUE(plain_cfg.mlp.residual);
  plain_cfg.mlp.residual = false;
  const Net<float> plain(plain_cfg);
  const std::vector<const DatasetSample*> oned{&d};
  const Mat<float> u0 = plain.forward(Vec<float>::Zero(plain.num_params()), oned, cache);
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_FLOAT_EQ(u0(i, 0), 0.125f);

  // residual head with zero weights returns the lowest-level row, renormalized
  const Net<float> dist(mlp_config_for(d, Head::Softmax));
  const Mat<float> y0 = dist.forward(Vec<float>::Zero(dist.num_params()), oned, cache);
  double row_sum = 0.0;
  for (double v : d.P[0]) row_sum += v;
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_NEAR(y0(i, 0), d.P[0][static_cast<std::size_t>(i)] / row_sum, 1e-5);

  const Vec<float> p = dist.initialize(11);
  const Mat<float> a = dist.forward(p, oned, cache);
  const Mat<float> b = dist.forward(p, oned, cache);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a.sum(), 1.0f, 1e-6f);
  EXPECT_EQ(dist.initialize(11), p);
  EXPECT_NE(dist.initialize(12), p);
  const Vec<float> ps = scalar.initialize(2);
  const float v = scalar.forward(ps, one, cache)(0, 0);
  EXPECT_GT(v, -1.0f);
  EXPECT_LT(v, 1.0f);

  const DatasetSample gs = grid_sample(rng, 5, 16);
  const ModelConfig uc = unet_config_for(gs);
  EXPECT_EQ(uc.unet.in_channels, 6);
  const Net<float> conv(uc);
  const std::vector<const DatasetSample*> oneg{&gs};
  const Mat<float> yz = conv.forward(Vec<float>::Zero(conv.num_params()), oneg, cache);
  EXPECT_EQ(yz.rows(), 256);
  EXPECT_EQ(yz.cwiseAbs().maxCoeff(), 0.0f);
  const Vec<float> pc = conv.initialize(4);
  const Mat<float> y1 = conv.forward(pc, oneg, cache), y2 = conv.forward(pc, oneg, cache);
  EXPECT_EQ(y1, y2);
  EXPECT_LT(y1.cwiseAbs().maxCoeff(), 1.0f);
}

TEST(Forward, RejectsMismatchedSamples) {
  Rng rng(6);
  const DatasetSample s = scalar_sample(rng, 5, 3);
  const Net<float> net(mlp_config_for(s, Head::Tanh, 8, {8}));
  const DatasetSample other = scalar_sample(rng, 4, 3);
  BatchCache<float> cache;
  EXPECT_THROW(net.forward(net.initialize(0), {&other}, cache), std::invalid_argument);
  EXPECT_THROW(unet_config_for(distribution_sample(rng, 2, 8)), std::invalid_argument);
  MlpSpec bad;
  bad.hidden = {0};
  EXPECT_THROW(Mlp<float>{bad}, std::invalid_argument);
}

TEST(GradCheck, LinearModel) {
  Rng rng(7);
  const DatasetSample s = scalar_sample(rng, 5, 3);
  ModelConfig cfg = mlp_config_for(s, Head::Identity, 0, {});
  const Net<double> net(cfg);
  EXPECT_EQ(net.num_params(), 1 + 3 + 5 + 1);
  const Vec<double> p = net.initialize(1);
  const auto r = grad_check(cfg, p, s, 200, 1e-5, 1, 1e-12);
  EXPECT_EQ(r.coordinates, 200u);
  EXPECT_LT(r.max_rel_error, 1e-9);
}

TEST(GradCheck, MlpHeads) {
  Rng rng(8);
  const DatasetSample s = scalar_sample(rng, 5, 3);
  for (Head h : {Head::Tanh, Head::Identity}) {
    const ModelConfig cfg = mlp_config_for(s, h);
    const auto r = grad_check(cfg, Net<double>(cfg).initialize(2), s, 200);
    EXPECT_LT(r.max_rel_error, 1e-4) << to_string(h);
  }
  const DatasetSample d = distribution_sample(rng, 13, 64);
  const ModelConfig cfg = mlp_config_for(d, Head::Softmax);
  const auto r = grad_check(cfg, Net<double>(cfg).initialize(3), d, 200);
  EXPECT_LT(r.max_rel_error, 1e-4);
}

TEST(GradCheck, ConvModel) {
  Rng rng(9);
  const DatasetSample s = grid_sample(rng, 5, 48);
  const ModelConfig cfg = unet_config_for(s);
  const Net<double> net(cfg);
  // perturb gains and biases away from their initial values so every path is exercised
  Vec<double> p = net.initialize(4);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) += 0.1 * u(rng);
  const auto r = grad_check(cfg, p, s, 200);
  EXPECT_EQ(r.coordinates, 200u);
  EXPECT_LT(r.max_rel_error, 1e-4);
}

TEST(Train, IdentityTaskAndControl) {
  const auto data = identity_task(150, 21, false);
  const std::vector<DatasetSample> tr(data.begin(), data.begin() + 100), va(data.begin() + 100, data.end());
  const ModelConfig cfg = mlp_config_for(tr[0], Head::Tanh);
  TrainConfig tc;
  tc.seed = 5;
  const TrainResult res = train(cfg, tr, va, tc);
  ASSERT_EQ(res.val_loss.size(), 300u);
  EXPECT_LT(res.best_val, 1e-3);
  EXPECT_LT(res.train_loss.back(), res.train_loss.front());

  const Mitigator m(cfg, res.params, tc.loss);
  const auto pred = m.predict(va);
  double mse = 0;
  for (std::size_t i = 0; i < va.size(); ++i) mse += std::pow(pred[i][0] - va[i].P[0][0], 2);
  EXPECT_LT(mse / static_cast<double>(va.size()), 1e-3);
  EXPECT_NEAR(m.mitigate(va[0].P, va[0].g, va[0].observable)[0], pred[0][0], 1e-6);

  // same seed, same losses
  TrainConfig short_tc = tc;
  short_tc.epochs = 3;
  EXPECT_EQ(train(cfg, tr, va, short_tc).train_loss, train(cfg, tr, va, short_tc).train_loss);

  const auto shuffled = identity_task(150, 21, true);
  const std::vector<DatasetSample> str(shuffled.begin(), shuffled.begin() + 100),
      sva(shuffled.begin() + 100, shuffled.end());
  const TrainResult ctl = train(cfg, str, sva, tc);
  EXPECT_GT(ctl.train_loss.back(), res.train_loss.back());
  EXPECT_GT(ctl.best_val, 10 * res.best_val);
}

TEST(Train, DivergenceAborts) {
  const auto data = identity_task(20, 2, false);
  const ModelConfig cfg = mlp_config_for(data[0], Head::Identity, 8, {8});
  TrainConfig tc;
  tc.adam.lr = 1e30;
  tc.epochs = 50;
  try {
    train(cfg, data, {}, tc);
    FAIL() << "expected divergence";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite"), std::string::npos);
  }
  EXPECT_THROW(train(cfg, {}, {}, TrainConfig{}), std::invalid_argument);
}

TEST(Mitigator, PermutationBatchAndCheckpoint) {
  Rng rng(10);
  std::vector<DatasetSample> batch;
  for (int i = 0; i < 20; ++i) batch.push_back(distribution_sample(rng, 4, 16));
  const ModelConfig cfg = mlp_config_for(batch[0], Head::Softmax, 32, {64, 64});
  const Mitigator m(cfg, Net<float>(cfg).initialize(9), LossKind::KL, {}, "abc");

  const auto all = m.predict(batch);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto single = m.predict({batch[i]});
    for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(single[0][k], all[i][k], 1e-6);
    EXPECT_NEAR(std::accumulate(all[i].begin(), all[i].end(), 0.0), 1.0, 1e-5);
  }

  DatasetSample perm = batch[0];
  std::reverse(perm.P.begin(), perm.P.end());
  const auto pp = m.predict({perm});
  EXPECT_NE(pp[0], all[0]);

  std::stringstream buf;
  m.save(buf);
  const Mitigator back = Mitigator::load(buf);
  EXPECT_EQ(back.params(), m.params());
  EXPECT_EQ(back.config_hash(), "abc");
  EXPECT_EQ(back.loss_kind(), LossKind::KL);
  EXPECT_EQ(back.config().to_json(), cfg.to_json());
  EXPECT_TRUE(back.config().mlp.residual);
  EXPECT_EQ(back.predict(batch), all);

  std::string bytes = buf.str();
  bytes[0] = 'X';
  std::stringstream bad(bytes);
  EXPECT_THROW(Mitigator::load(bad), std::runtime_error);
  std::stringstream cut(buf.str().substr(0, 40));
  EXPECT_THROW(Mitigator::load(cut), std::runtime_error);

  const DatasetSample g = grid_sample(rng, 5, 16);
  const ModelConfig uc = unet_config_for(g);
  const Mitigator cm(uc, Net<float>(uc).initialize(1), LossKind::L1);
  std::stringstream cb;
  cm.save(cb);
  EXPECT_EQ(Mitigator::load(cb).predict({g}), cm.predict({g}));
}
