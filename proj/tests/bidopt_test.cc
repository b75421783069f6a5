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

#include "bidcraft/bidopt.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bidcraft/error.h"
#include "oracles.h"

namespace bidcraft::bidopt {
namespace {

TransitionModel coin_model(double ctr = 1.0) {
  return {PriceDistribution::uniform(2), ctr};
}

SolverConfig clicks(int budget, int horizon) {
  SolverConfig c;
  c.budget = budget;
  c.horizon = horizon;
  return c;
}

TEST(WinProb, HandCases) {
  EXPECT_EQ(win_prob(0, PriceDistribution::uniform(4)), 0.0);
  EXPECT_EQ(win_prob(6, PriceDistribution::point_mass(10, 5)), 1.0);
  EXPECT_DOUBLE_EQ(win_prob(2, PriceDistribution::uniform(4)), 0.5);
}

TEST(ExpectedPayment, HandCases) {
  EXPECT_EQ(expected_payment_on_win(3, PriceDistribution::point_mass(4, 0)), 0.0);
  EXPECT_DOUBLE_EQ(expected_payment_on_win(2, PriceDistribution::uniform(4)), 0.5);
  EXPECT_THROW(expected_payment_on_win(0, PriceDistribution::uniform(4)), DataError);
}

TEST(ImmediateValue, HandCases) {
  const TransitionModel m{PriceDistribution::uniform(4), 0.1};
  SolverConfig c = clicks(10, 1);
  EXPECT_EQ(immediate_value(0, 10, 1, m, c), 0.0);
  EXPECT_DOUBLE_EQ(immediate_value(2, 10, 1, m, c), 0.05);
  c.objective = Objective::kSurplus;
  c.click_value = 40.0;
  EXPECT_EQ(immediate_value(0, 10, 1, m, c), 0.0);
  EXPECT_DOUBLE_EQ(immediate_value(2, 10, 1, m, c), 1.75);
}

TEST(SolveExact, BellmanHandCase) {
  const auto table = solve_exact(coin_model(), clicks(1, 2));
  EXPECT_EQ(table.value(1, 1), 0.5);
  EXPECT_EQ(table.value(1, 2), 1.0);
  EXPECT_EQ(optimal_bid(table, 1, 1), 1);
}

TEST(SolveExact, BoundaryRowsAreZero) {
  const auto zero_t = solve_exact(coin_model(), clicks(5, 0));
  for (int b = 0; b <= 5; ++b) EXPECT_EQ(zero_t.value(b, 0), 0.0);
  const auto table = solve_exact(coin_model(), clicks(5, 4));
  for (int t = 0; t <= 4; ++t) {
    EXPECT_EQ(table.value(0, t), 0.0);
    EXPECT_EQ(optimal_bid(table, 0, t), 0);
    EXPECT_EQ(optimal_bid(table, 3, 0), 0);
  }
}

TEST(SolveExact, RangeErrors) {
  const auto table = solve_exact(coin_model(), clicks(3, 2));
  EXPECT_THROW(table.value(4, 1), ConfigError);
  EXPECT_THROW(table.value(1, 3), ConfigError);
  EXPECT_THROW(table.policy(-1, 1), ConfigError);
}

TEST(SolveExact, SmallestBidWinsTies) {
  // Prices never above 0: any positive bid wins, so bid 1 is the tie winner.
  const TransitionModel m{PriceDistribution::point_mass(4, 0), 0.5};
  const auto table = solve_exact(m, clicks(6, 3));
  for (int t = 1; t <= 3; ++t) {
    for (int b = 1; b <= 6; ++b) EXPECT_EQ(table.policy(b, t), 1);
  }
}

TEST(SolveTruncated, FullCapEqualsExact) {
  SolverConfig c = clicks(7, 4);
  const TransitionModel m{PriceDistribution::uniform(4), 0.3};
  const auto exact = solve_exact(m, c);
  c.truncation = 7;
  const auto trunc = solve_truncated(m, c);
  for (int t = 0; t <= 4; ++t) {
    for (int b = 0; b <= 7; ++b) {
      EXPECT_EQ(trunc.value(b, t), exact.value(b, t));
      EXPECT_EQ(trunc.policy(b, t), exact.policy(b, t));
    }
  }
}

TEST(SolveTruncated, ClampsAboveCap) {
  SolverConfig c = clicks(2, 1);
  c.truncation = 1;
  const auto trunc = solve_truncated(coin_model(), c);
  EXPECT_TRUE(trunc.truncated());
  EXPECT_EQ(trunc.value(2, 1), 0.5);
  EXPECT_EQ(trunc.value(2, 1), trunc.value(1, 1));
  EXPECT_EQ(trunc.value(1000, 1), 0.5);
}

TEST(BruteForce, HandCasesAndRefusal) {
  EXPECT_EQ(brute_force_oracle(coin_model(), clicks(1, 0)), 0.0);
  EXPECT_EQ(brute_force_oracle(coin_model(), clicks(1, 2)), 1.0);
  EXPECT_THROW(brute_force_oracle(coin_model(), clicks(11, 2)), ConfigError);
  EXPECT_THROW(brute_force_oracle(coin_model(), clicks(3, 6)), ConfigError);
  EXPECT_THROW(brute_force_oracle({PriceDistribution::uniform(5), 0.1}, clicks(3, 2)),
               ConfigError);
}

struct TinyInstance {
  TransitionModel model;
  SolverConfig config;
};

TinyInstance random_tiny(std::mt19937_64& rng, bool any_mode) {
  std::uniform_int_distribution<int> levels(1, 4), horizon(0, 5), budget(0, 10),
      pick(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TinyInstance inst{{testing::random_distribution(rng, levels(rng)), u(rng)},
                    clicks(budget(rng), horizon(rng))};
  if (any_mode) {
    inst.config.payment = static_cast<Payment>(pick(rng));
    if (pick(rng) == 0) {
      inst.config.objective = Objective::kSurplus;
      inst.config.click_value = 10.0 * u(rng);
    }
    inst.config.discount = 0.5 + 0.5 * u(rng);
  }
  return inst;
}

TEST(SolveExact, MatchesBruteForceAcrossModes) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_tiny(rng, true);
    const auto table = solve_exact(inst.model, inst.config);
    ASSERT_NEAR(table.value(inst.config.budget, inst.config.horizon),
                brute_force_oracle(inst.model, inst.config), 1e-9)
        << "trial " << trial;
  }
}

TEST(SolveExact, DominatesFixedBidSequences) {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = random_tiny(rng, true);
    inst.config.horizon = std::max(1, std::min(inst.config.horizon, 4));
    const auto table = solve_exact(inst.model, inst.config);
    const double v = table.value(inst.config.budget, inst.config.horizon);
    std::uniform_int_distribution<int> bid(0, 5);
    for (int s = 0; s < 50; ++s) {
      std::vector<int> bids(static_cast<std::size_t>(inst.config.horizon));
      for (auto& b : bids) b = bid(rng);
      EXPECT_LE(testing::fixed_sequence_value(inst.model, inst.config, bids, 0,
                                              inst.config.budget),
                v + 1e-12);
    }
  }
}

TEST(Monotonicity, ValueInBudgetAndHorizon) {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> levels(2, 40), budget(0, 60), horizon(0, 30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const TransitionModel m{testing::random_distribution(rng, levels(rng)), u(rng)};
    const auto c = clicks(budget(rng), horizon(rng));
    const auto table = solve_exact(m, c);
    for (int t = 0; t <= c.horizon; ++t) {
      for (int b = 0; b <= c.budget; ++b) {
        const double v = table.value(b, t);
        ASSERT_GE(v, 0.0);
        if (b > 0) ASSERT_GE(v, table.value(b - 1, t));
        if (t > 0) ASSERT_GE(v, table.value(b, t - 1));
        ASSERT_LE(table.policy(b, t), std::min(b, bid_cap(m)));
      }
    }
  }
}

TEST(Monotonicity, WinProbInBid) {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = testing::random_distribution(rng, 1 + trial % 50);
    for (int x = -2; x < d.levels() + 3; ++x) {
      ASSERT_LE(win_prob(x, d), win_prob(x + 1, d));
    }
  }
}

TEST(Monotonicity, TruncatedNeverExceedsExact) {
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> levels(2, 30), budget(1, 60), horizon(0, 25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const TransitionModel m{testing::random_distribution(rng, levels(rng)), u(rng)};
    auto c = clicks(budget(rng), horizon(rng));
    const auto exact = solve_exact(m, c);
    c.truncation = std::uniform_int_distribution<int>(1, c.budget)(rng);
    const auto trunc = solve_truncated(m, c);
    for (int t = 0; t <= c.horizon; ++t) {
      for (int b = 0; b <= c.budget; ++b) {
        ASSERT_LE(trunc.value(b, t), exact.value(b, t));
      }
    }
  }
}

TEST(ContextualBid, MatchesTableAtMeanCtr) {
  const TransitionModel m{PriceDistribution::uniform(6), 0.2};
  const auto table = solve_exact(m, clicks(12, 5));
  for (int t = 0; t <= 5; ++t) {
    for (int b = 0; b <= 12; ++b) {
      EXPECT_EQ(contextual_bid(table, m, b, t, 0.2), table.policy(b, t));
    }
  }
}

TEST(BidRules, HandCases) {
  EXPECT_EQ(adjust_bid(5, 10, 300), 5);
  EXPECT_EQ(adjust_bid(5, 3, 300), 3);
  EXPECT_EQ(adjust_bid(500, 1000, 300), 300);
  EXPECT_EQ(adjust_bid(-4, 10, 300), 0);

  EXPECT_EQ(mcpc_bid(0.0, 1000.0, 300), 0);
  EXPECT_EQ(mcpc_bid(0.0005, 100000.0, 300), 50);

  EXPECT_EQ(linear_bid(0.01, 40.0, 0.01, 300), 40);
  EXPECT_EQ(linear_bid(0.02, 40.0, 0.01, 300), 80);
  EXPECT_EQ(linear_bid(0.0, 40.0, 0.01, 300), 0);
  EXPECT_THROW(linear_bid(0.5, 40.0, 0.0, 300), ConfigError);
}

TEST(AdjustBid, NeverExceedsBudget) {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> u(-100, 1000);
  for (int i = 0; i < 10000; ++i) {
    const int budget = std::abs(u(rng));
    const int x = adjust_bid(u(rng), budget, 300);
    ASSERT_LE(x, budget);
    ASSERT_LE(x, 300);
    ASSERT_GE(x, 0);
  }
}

TEST(Config, NamesAndValidation) {
  for (auto p : {Payment::kSecondPrice, Payment::kFirstPrice, Payment::kLiteralBid}) {
    EXPECT_EQ(payment_from_string(to_string(p)), p);
  }
  EXPECT_EQ(objective_from_string("surplus"), Objective::kSurplus);
  EXPECT_THROW(objective_from_string("impressions"), ConfigError);
  SolverConfig c = clicks(5, 5);
  c.discount = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = clicks(5, 5);
  c.truncation = 6;
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_THROW(solve_exact(coin_model(), clicks(1 << 20, 1 << 10)), ConfigError);
}

}  // namespace
}  // namespace bidcraft::bidopt
