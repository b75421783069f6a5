// Copyright 2026 The Bidcraft Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bidcraft/forecaster.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bidcraft/error.h"
#include "bidcraft/market_model.h"
#include "bidcraft/metrics.h"
#include "gradcheck.h"

namespace bidcraft::landscape {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

ForecasterParams zero_params(int e, int d, int l) {
  auto p = init_forecaster(Vocabulary({"a:1"}), e, d, l, 0);
  for (auto& block : param_blocks(p)) {
    std::fill(block.values.begin(), block.values.end(), 0.0);
  }
  return p;
}

TEST(RnnStep, ZeroWeightsHalveState) {
  const auto p = zero_params(3, 4, 5);
  const VectorXd x = VectorXd::Random(3);
  const VectorXd h = VectorXd::Random(4);
  const VectorXd out = rnn_step(x, h, p);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(out(i), 0.5 * h(i));
  EXPECT_EQ(rnn_step(VectorXd::Zero(3), VectorXd::Zero(4), p), VectorXd::Zero(4));
}

TEST(RnnStep, DimensionMismatchRejected) {
  const auto p = zero_params(3, 4, 5);
  EXPECT_THROW(rnn_step(VectorXd::Zero(2), VectorXd::Zero(4), p), ConfigError);
  EXPECT_THROW(rnn_step(VectorXd::Zero(3), VectorXd::Zero(5), p), ConfigError);
}

TEST(ForwardPredict, ZeroOutputGivesUniform) {
  auto p = init_forecaster(Vocabulary({"a:1", "b:2"}), 3, 4, 7, 4);
  p.w_out.setZero();
  p.b_out.setZero();
  bidlog::BidRecord r;
  r.features = {"a:1", "zz:9"};
  const auto f = forward_predict(r, VectorXd::Zero(4), p);
  for (int z = 0; z < 7; ++z) EXPECT_DOUBLE_EQ(f.distribution[z], 1.0 / 7);
}

TEST(ForwardPredict, Deterministic) {
  const auto p = init_forecaster(Vocabulary({"a:1", "b:2"}), 3, 4, 7, 4, 1.0);
  bidlog::BidRecord r;
  r.features = {"b:2"};
  const VectorXd h = VectorXd::Constant(4, 0.3);
  const auto f1 = forward_predict(r, h, p);
  const auto f2 = forward_predict(r, h, p);
  EXPECT_EQ(f1.distribution, f2.distribution);
  EXPECT_EQ(f1.hidden, f2.hidden);
}

TEST(ForwardPredict, UnknownTokensUseFallbackRow) {
  const auto p = init_forecaster(Vocabulary({"a:1"}), 3, 4, 7, 4, 1.0);
  EXPECT_EQ(p.vocab.row("never:seen"), 0);
  EXPECT_EQ(p.vocab.row("a:1"), 1);
  const std::vector<std::string> unseen = {"q:1"};
  EXPECT_EQ(embed_features(unseen, p), VectorXd(p.embedding.row(0).transpose()));
}

TEST(LossMse, HandCases) {
  const std::vector<PriceDistribution> x = {PriceDistribution::point_mass(2, 0)};
  const std::vector<PriceDistribution> xhat = {PriceDistribution::uniform(2)};
  EXPECT_DOUBLE_EQ(loss_mse(xhat, x), 0.5);
  EXPECT_DOUBLE_EQ(loss_mse(x, x), 0.0);
  EXPECT_THROW(loss_mse({}, {}), ConfigError);
}

TEST(LossMse, PermutationInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PriceDistribution> a, b;
  for (int t = 0; t < 6; ++t) {
    a.push_back(PriceDistribution::from_weights({u(rng), u(rng), u(rng)}));
    b.push_back(PriceDistribution::from_weights({u(rng), u(rng), u(rng)}));
  }
  const double base = loss_mse(a, b);
  std::vector<int> idx = {5, 2, 0, 4, 1, 3};
  std::vector<PriceDistribution> pa, pb;
  for (int i : idx) {
    pa.push_back(a[static_cast<std::size_t>(i)]);
    pb.push_back(b[static_cast<std::size_t>(i)]);
  }
  EXPECT_NEAR(loss_mse(pa, pb), base, 1e-15);
}

TEST(LossTotal, ZeroWeightsEqualLoss) {
  const auto p = init_forecaster(Vocabulary({"a:1"}), 2, 2, 3, 1, 1.0);
  EXPECT_EQ(loss_total(0.37, p, 0.0, 0.0, 5.0, 0.0), 0.37);
}

TEST(LossTotal, FrobeniusPenalty) {
  auto p = zero_params(1, 1, 2);
  p.w_update(0, 0) = 3.0;
  p.w_update(0, 1) = 4.0;
  EXPECT_DOUBLE_EQ(loss_total(0.0, p, 1.0, 0.0, 0.0, 0.0), 25.0);
  // Output weights are governed by lambda2 only.
  p.w_out(0, 0) = 2.0;
  EXPECT_DOUBLE_EQ(loss_total(0.0, p, 1.0, 0.0, 0.0, 0.0), 25.0);
  EXPECT_DOUBLE_EQ(loss_total(0.0, p, 0.0, 1.0, 0.0, 0.0), 4.0);
  // Biases are unpenalized.
  p.b_out(0) = 10.0;
  EXPECT_DOUBLE_EQ(loss_total(0.0, p, 1.0, 1.0, 0.0, 0.0), 29.0);
}

TEST(CensoredTerm, FullTailIsZero) {
  const auto d = PriceDistribution::from_weights({0.0, 0.0, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(censored_term(d, 2, 1e-12), 0.0);
  EXPECT_NEAR(censored_term(PriceDistribution::point_mass(4, 0), 2, 1e-12),
              -std::log(1e-12), 1e-9);
}

TEST(SgdStep, Arithmetic) {
  auto p = zero_params(1, 1, 1);
  auto g = p.zeros_like();
  EXPECT_EQ(sgd_step(p, g, 0.1, 0.0, 0.0), p);

  p.w_update(0, 0) = 1.0;
  g.w_update(0, 0) = 0.5;
  EXPECT_DOUBLE_EQ(sgd_step(p, g, 0.1, 0.0, 0.0).w_update(0, 0), 0.95);
  g.w_update(0, 0) = 0.0;
  EXPECT_DOUBLE_EQ(sgd_step(p, g, 0.1, 0.1, 0.0).w_update(0, 0), 0.98);
}

TEST(SgdStep, PlainDescentWithoutPenalty) {
  const auto p = init_forecaster(Vocabulary({"a:1", "b:1"}), 2, 3, 4, 2, 1.0);
  const auto g = init_forecaster(Vocabulary({"a:1", "b:1"}), 2, 3, 4, 9, 1.0);
  const auto next = sgd_step(p, g, 0.3, 0.0, 0.0);
  const auto a = param_blocks(p), b = param_blocks(g), c = param_blocks(next);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].values.size(); ++k) {
      EXPECT_DOUBLE_EQ(c[i].values[k], a[i].values[k] - 0.3 * b[i].values[k]);
    }
  }
}

TEST(SgdStep, NonFiniteGradientNamesBlock) {
  const auto p = zero_params(1, 1, 2);
  auto g = p.zeros_like();
  g.w_reset(0, 0) = std::nan("");
  try {
    sgd_step(p, g, 0.1, 0.0, 0.0);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("w_reset"), std::string::npos);
  }
}

TEST(Gradients, MatchFiniteDifferencesOnRandomShapes) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const auto instance = testing::random_gradcheck_instance(rng);
    const auto report = testing::gradient_check(instance);
    for (const auto& b : report.blocks) {
      EXPECT_LE(b.max_relative_error, 1e-4)
          << "trial " << trial << " block " << b.name;
    }
  }
}

bidlog::CampaignDataset point_data(std::size_t n, std::uint64_t seed) {
  bidlog::SyntheticConfig c;
  c.n = n;
  c.price_law = bidlog::PointLaw{42};
  c.feature_vocab = {5};
  c.seed = seed;
  return bidlog::generate_synthetic(c);
}

TEST(Train, ZeroEpochsReturnsInitialization) {
  const auto ds = point_data(100, 1);
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.embed_dim = 3;
  cfg.hidden_dim = 4;
  cfg.seed = 7;
  auto init = init_forecaster(Vocabulary::build(ds), 3, 4, 301, 7);
  init.window = cfg.minibatch;
  const auto result = train(ds, cfg);
  EXPECT_EQ(result.params, init);
  EXPECT_TRUE(result.history.empty());
}

TEST(Train, SmallStepDoesNotIncreaseObjective) {
  const auto ds = point_data(10, 2);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.minibatch = 10;
  cfg.learning_rate = 1e-4;
  cfg.embed_dim = 3;
  cfg.hidden_dim = 4;
  cfg.seed = 3;
  const auto before = init_forecaster(Vocabulary::build(ds), 3, 4, 301, 3);
  const auto after = train(ds, cfg).params;
  const double l0 = sequence_loss(before, ds.records, cfg).total;
  const double l1 = sequence_loss(after, ds.records, cfg).total;
  EXPECT_LE(l1, l0);
}

TEST(Train, Deterministic) {
  const auto ds = point_data(300, 4);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.embed_dim = 3;
  cfg.hidden_dim = 4;
  cfg.seed = 11;
  const auto a = train(ds, cfg);
  const auto b = train(ds, cfg);
  EXPECT_EQ(a.params, b.params);
  ASSERT_EQ(a.history.size(), 2u);
  EXPECT_EQ(a.history[1].loss, b.history[1].loss);
}

TEST(Train, LearnsPointMass) {
  const auto [train_set, test_set] =
      bidlog::train_test_split(point_data(2000, 5), 0.8, 5);
  TrainConfig cfg = testing::smoke_train_config();
  const auto model = MarketModel::fit_forecaster(train_set, cfg);
  EXPECT_LT(metrics::anlp(model, test_set), std::log(301.0) / 2.0);
}

TEST(Train, InvalidConfigRejected) {
  TrainConfig cfg;
  cfg.epsilon = 1e-3;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = TrainConfig{};
  cfg.learning_rate = 0.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  EXPECT_THROW(train(bidlog::CampaignDataset{}, TrainConfig{}), DataError);
}

}  // namespace
}  // namespace bidcraft::landscape
