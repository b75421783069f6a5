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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "bidcraft/error.h"
#include "bidcraft/market_model.h"
#include "bidcraft/price_distribution.h"
#include "bidcraft/survival.h"
#include "oracles.h"

namespace bidcraft::landscape {
namespace {

using bidlog::BidRecord;
using bidlog::CampaignDataset;

BidRecord won(int price) {
  BidRecord r;
  r.market_price = price;
  r.logged_bid = price + 1;
  return r;
}

BidRecord lost(int lower_bound) {
  BidRecord r;
  r.lower_bound = lower_bound;
  r.logged_bid = lower_bound;
  return r;
}

CampaignDataset dataset(std::vector<BidRecord> records, int levels = 10) {
  CampaignDataset ds;
  ds.records = std::move(records);
  ds.price_levels = levels;
  return ds;
}

TEST(PriceDistribution, RejectsInvalidPmf) {
  EXPECT_THROW(PriceDistribution({0.5, 0.6}), ConfigError);
  EXPECT_THROW(PriceDistribution({-0.1, 1.1}), ConfigError);
  EXPECT_THROW(PriceDistribution({}), ConfigError);
  EXPECT_THROW(PriceDistribution::from_weights({0.0, 0.0}), ConfigError);
}

TEST(PriceDistribution, CumulativeQueries) {
  const auto d = PriceDistribution::uniform(4);
  EXPECT_DOUBLE_EQ(d.mass_below(2), 0.5);
  EXPECT_DOUBLE_EQ(d.mass_below(-3), 0.0);
  EXPECT_DOUBLE_EQ(d.mass_below(99), 1.0);
  EXPECT_DOUBLE_EQ(d.mass_at_or_above(3), 0.25);
  EXPECT_DOUBLE_EQ(d.mean(), 1.5);
  EXPECT_NEAR(d.entropy(), std::log(4.0), 1e-12);
}

TEST(KaplanMeier, SingleAtom) {
  std::vector<BidRecord> rs(6, won(5));
  const auto curve = km_fit(dataset(rs));
  for (int z = 0; z < 5; ++z) EXPECT_EQ(curve.at(z), 1.0);
  EXPECT_EQ(curve.at(5), 0.0);
  EXPECT_EQ(survival_to_distribution(curve), PriceDistribution::point_mass(10, 5));
}

TEST(KaplanMeier, HandComputedCensoredCase) {
  const auto curve = km_fit(dataset({won(1), won(2), lost(2)}));
  EXPECT_EQ(curve.at(0), 1.0);
  EXPECT_EQ(curve.at(1), 2.0 / 3.0);
  EXPECT_EQ(curve.at(2), 1.0 / 3.0);
  EXPECT_EQ(curve.at(9), 1.0 / 3.0);

  const auto pmf = survival_to_distribution(curve);
  EXPECT_NEAR(pmf[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(pmf[2], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(pmf[9], 1.0 / 3.0, 1e-15);
}

TEST(KaplanMeier, UncensoredEqualsEmpiricalSurvivalExactly) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> len(1, 20), price(0, 11);
    std::vector<int> ps(static_cast<std::size_t>(len(rng)));
    std::vector<BidRecord> rs;
    for (auto& p : ps) {
      p = price(rng);
      rs.push_back(won(p));
    }
    const auto curve = km_fit(dataset(rs, 12));
    for (int z = 0; z < 12; ++z) {
      ASSERT_EQ(curve.at(z), testing::empirical_survival(ps, z))
          << "trial " << trial << " z " << z;
    }
  }
}

TEST(KaplanMeier, Nonincreasing) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> price(0, 29), coin(0, 2);
    std::vector<BidRecord> rs;
    for (int i = 0; i < 40; ++i) rs.push_back(coin(rng) ? won(price(rng)) : lost(price(rng)));
    rs.push_back(won(3));
    const auto curve = km_fit(dataset(rs, 30));
    EXPECT_NO_THROW(validate(curve));
    double prev = 1.0;
    for (int z = 0; z < 30; ++z) {
      EXPECT_LE(curve.at(z), prev);
      EXPECT_GE(curve.at(z), 0.0);
      prev = curve.at(z);
    }
    const auto pmf = survival_to_distribution(curve);
    const auto p = pmf.pmf();
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(KaplanMeier, FullyCensoredRejected) {
  try {
    km_fit(dataset({lost(1), lost(2)}));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("fully censored"), std::string::npos);
  }
}

TEST(KaplanMeier, ConstantCurvePutsMassAtTop) {
  SurvivalCurve curve;
  curve.price_levels = 6;
  EXPECT_EQ(survival_to_distribution(curve), PriceDistribution::point_mass(6, 5));
}

TEST(Gamma, MethodOfMomentsByHand) {
  const auto p = gamma_fit(dataset({won(1), won(2), won(3), won(4)}));
  EXPECT_NEAR(p.shape, 5.0, 1e-12);
  EXPECT_NEAR(p.scale, 0.5, 1e-12);
}

TEST(Gamma, DegenerateRejected) {
  EXPECT_THROW(gamma_fit(dataset({won(3), won(3), won(3)})), DataError);
  EXPECT_THROW(gamma_fit(dataset({won(3)})), DataError);
}

bidlog::CampaignDataset gamma_data(std::size_t n, std::uint64_t seed) {
  bidlog::SyntheticConfig c;
  c.n = n;
  c.price_law = bidlog::GammaLaw{5.0, 10.0};
  c.seed = seed;
  return bidlog::generate_synthetic(c);
}

TEST(Gamma, RecoversShapeFromSamples) {
  const auto p = gamma_fit(gamma_data(10000, 17));
  EXPECT_NEAR(p.shape, 5.0, 0.5);
}

TEST(Gamma, ConsistencyImprovesWithSampleSize) {
  // Integer flooring biases the fitted law; compare to its large-n limit.
  const auto ref = gamma_fit(gamma_data(1000000, 99));
  const auto small = gamma_fit(gamma_data(1000, 3));
  const auto large = gamma_fit(gamma_data(100000, 3));
  EXPECT_LT(std::abs(large.shape - ref.shape), std::abs(small.shape - ref.shape));
  EXPECT_LT(std::abs(large.scale - ref.scale), std::abs(small.scale - ref.scale));
}

TEST(Gamma, DiscretizationMatchesQuadrature) {
  const GammaParams params{5.0, 10.0};
  const auto pmf = gamma_discretize(params, 301);
  const auto ref = testing::gamma_pmf_by_quadrature(5.0, 10.0, 301);
  double sum = 0.0, ref_mean = 0.0;
  for (int z = 0; z < 301; ++z) {
    EXPECT_NEAR(pmf[z], ref[static_cast<std::size_t>(z)], 1e-9) << z;
    sum += pmf[z];
    ref_mean += z * ref[static_cast<std::size_t>(z)];
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_NEAR(pmf.mean(), ref_mean, 1e-6);
  // Bucketing on [z, z+1) lowers the mean by about half a unit.
  EXPECT_LT(std::abs(pmf.mean() - 50.0), 1.0);

  const auto p = pmf.pmf();
  const auto mode = std::max_element(p.begin(), p.end()) - p.begin();
  EXPECT_LE(std::abs(mode - 40), 1);
}

TEST(Gamma, AnyParamsNormalized) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 50.0);
  for (int i = 0; i < 100; ++i) {
    const auto pmf = gamma_discretize({u(rng), u(rng)}, 50);
    const auto p = pmf.pmf();
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    for (double v : p) EXPECT_GE(v, 0.0);
  }
}

TEST(MarketModel, KmOnPointMassDataIsPointMass) {
  std::vector<BidRecord> rs(20, won(7));
  const auto m = MarketModel::fit_km(dataset(rs));
  EXPECT_EQ(m.kind(), ModelKind::kKm);
  EXPECT_EQ(m.unconditional(), PriceDistribution::point_mass(10, 7));
}

TEST(MarketModel, UnfittedRejected) {
  const MarketModel m;
  PredictionState s;
  EXPECT_THROW(predict_distribution(m, won(1), s), ConfigError);
  EXPECT_THROW(m.unconditional(), ConfigError);
}

TEST(MarketModel, KindNamesRoundTrip) {
  for (auto k : {ModelKind::kUniform, ModelKind::kKm, ModelKind::kGamma,
                 ModelKind::kForecaster}) {
    EXPECT_EQ(model_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(model_kind_from_string("lstm"), ConfigError);
}

TEST(MarketModel, ForecasterWithZeroOutputIsUniform) {
  const auto ds = gamma_data(50, 1);
  auto params = init_forecaster(Vocabulary::build(ds), 3, 4, 301, 5);
  params.w_out.setZero();
  params.b_out.setZero();
  const MarketModel m(ForecasterModel{params});
  for (const auto& d : predict_all(m, ds.records)) {
    for (int z = 0; z < 301; ++z) ASSERT_NEAR(d[z], 1.0 / 301, 1e-15);
  }
}

TEST(MarketModel, EveryPredictionNormalized) {
  const auto ds = gamma_data(200, 2);
  std::vector<MarketModel> models = {MarketModel::fit_km(ds),
                                     MarketModel::fit_gamma(ds),
                                     MarketModel::uniform(301)};
  models.emplace_back(ForecasterModel{
      init_forecaster(Vocabulary::build(ds), 3, 4, 301, 1, 2.0)});
  for (const auto& m : models) {
    for (const auto& d : predict_all(m, ds.records)) {
      const auto p = d.pmf();
      ASSERT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    }
  }
}

}  // namespace
}  // namespace bidcraft::landscape
