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

#include <algorithm>
#include <cmath>
#include <limits>

#include "bidcraft/error.h"

namespace bidcraft::bidopt {
namespace {

// Tables above this many cells are refused rather than allocated.
constexpr long long kMaxCells = 1LL << 28;

bool pays_bid(Payment payment) { return payment != Payment::kSecondPrice; }

struct Choice {
  int bid = 0;
  double value = 0.0;
};

// Scans x = 0..min(b, cap) against the previous row `prev` (V(., t-1) over
// budgets 0..prev.size()-1, clamped beyond). Strict improvement is required
// to move off a smaller bid.
Choice best_action(const PriceDistribution& dist, double ctr,
                   const SolverConfig& config, int b,
                   std::span<const double> prev) {
  const int top_row = static_cast<int>(prev.size()) - 1;
  const auto prev_at = [&](int budget) {
    return prev[static_cast<std::size_t>(std::min(budget, top_row))];
  };
  const int x_max = std::min(b, dist.levels() - 1);
  const double stay = prev_at(b);
  const double gamma = config.discount;
  const bool clicks = config.objective == Objective::kClicks;
  const double value_per_win = ctr * config.click_value;

  Choice best{0, gamma * stay};
  double win = 0.0;     // P(m < x)
  double future = 0.0;  // sum_{m<x} pmf(m) V(b - pay, t-1)
  double paid = 0.0;    // sum_{m<x} pmf(m) pay
  for (int x = 1; x <= x_max; ++x) {
    const int m = x - 1;
    const double p = dist[m];
    win += p;
    if (pays_bid(config.payment)) {
      future = win * prev_at(b - x);
      paid = win * x;
    } else {
      future += p * prev_at(b - m);
      paid += p * m;
    }
    const double reward = clicks ? win * ctr : win * value_per_win - paid;
    const double q = reward + gamma * (future + (1.0 - win) * stay);
    if (q > best.value) best = {x, q};
  }
  return best;
}

ValueTable run_backward_induction(const TransitionModel& model,
                                  const SolverConfig& config,
                                  int stored_budget) {
  validate(model);
  validate(config);
  const long long cells = (static_cast<long long>(stored_budget) + 1) *
                          (static_cast<long long>(config.horizon) + 1);
  if (cells > kMaxCells) {
    throw ConfigError("value table of " + std::to_string(cells) +
                      " cells exceeds the memory budget; use --bmax");
  }
  ValueTable table(config, stored_budget);
  for (int t = 1; t <= config.horizon; ++t) {
    const auto prev = table.values_at(t - 1);
    auto values = table.mutable_values_at(t);
    auto policy = table.mutable_policy_at(t);
    for (int b = 0; b <= stored_budget; ++b) {
      const Choice c = best_action(model.distribution, model.ctr, config, b, prev);
      values[static_cast<std::size_t>(b)] = c.value;
      policy[static_cast<std::size_t>(b)] = c.bid;
    }
  }
  return table;
}

double brute_force(const PriceDistribution& dist, double ctr,
                   const SolverConfig& config, int b, int t) {
  if (t == 0) return 0.0;
  const int x_max = std::min(b, dist.levels() - 1);
  double best = -std::numeric_limits<double>::infinity();
  for (int x = 0; x <= x_max; ++x) {
    double expected = 0.0;
    for (int m = 0; m < dist.levels(); ++m) {
      const double p = dist[m];
      if (p == 0.0) continue;
      if (x > m) {
        const int pay = pays_bid(config.payment) ? x : m;
        const double reward = config.objective == Objective::kClicks
                                  ? ctr
                                  : ctr * config.click_value - pay;
        expected += p * (reward + config.discount *
                                      brute_force(dist, ctr, config, b - pay, t - 1));
      } else {
        expected += p * config.discount * brute_force(dist, ctr, config, b, t - 1);
      }
    }
    best = std::max(best, expected);
  }
  return best;
}

}  // namespace

std::string to_string(Objective objective) {
  return objective == Objective::kClicks ? "clicks" : "surplus";
}

std::string to_string(Payment payment) {
  switch (payment) {
    case Payment::kSecondPrice: return "second_price";
    case Payment::kFirstPrice: return "first_price";
    case Payment::kLiteralBid: return "literal_bid";
  }
  return "unknown";
}

Objective objective_from_string(const std::string& name) {
  if (name == "clicks") return Objective::kClicks;
  if (name == "surplus") return Objective::kSurplus;
  throw ConfigError("unknown objective '" + name + "'");
}

Payment payment_from_string(const std::string& name) {
  if (name == "second_price") return Payment::kSecondPrice;
  if (name == "first_price") return Payment::kFirstPrice;
  if (name == "literal_bid") return Payment::kLiteralBid;
  throw ConfigError("unknown payment mode '" + name + "'");
}

void validate(const SolverConfig& c) {
  if (c.budget < 0) throw ConfigError("budget must be >= 0");
  if (c.horizon < 0) throw ConfigError("horizon must be >= 0");
  if (!(c.discount > 0.0 && c.discount <= 1.0)) {
    throw ConfigError("discount must lie in (0, 1]");
  }
  if (!std::isfinite(c.click_value)) throw ConfigError("click_value must be finite");
  if (c.truncation && (*c.truncation < 0 || *c.truncation > c.budget)) {
    throw ConfigError("truncation must lie in 0..budget");
  }
}

void validate(const TransitionModel& model) {
  if (!(model.ctr >= 0.0 && model.ctr <= 1.0)) {
    throw ConfigError("transition ctr must lie in [0, 1]");
  }
}

double win_prob(int x, const PriceDistribution& dist) {
  return dist.mass_below(x);
}

double expected_payment_on_win(int x, const PriceDistribution& dist) {
  const double win = win_prob(x, dist);
  if (!(win > 0.0)) throw DataError("expected payment undefined: P(win) = 0");
  double paid = 0.0;
  for (int m = 0; m < std::min(x, dist.levels()); ++m) paid += dist[m] * m;
  return paid / win;
}

double immediate_value(int x, int b, int /*t*/, const TransitionModel& model,
                       const SolverConfig& config) {
  if (x < 0 || x > std::min(b, bid_cap(model))) {
    throw ConfigError("bid outside 0..min(budget, cap)");
  }
  const double win = win_prob(x, model.distribution);
  if (config.objective == Objective::kClicks) return win * model.ctr;
  if (win == 0.0) return 0.0;
  const double pay = pays_bid(config.payment)
                         ? static_cast<double>(x)
                         : expected_payment_on_win(x, model.distribution);
  return win * (model.ctr * config.click_value - pay);
}

// ---------------------------------------------------------------------------

ValueTable::ValueTable(SolverConfig config, int stored_budget)
    : config_(std::move(config)), stored_budget_(stored_budget) {
  if (stored_budget_ < 0 || stored_budget_ > config_.budget) {
    throw ConfigError("stored budget must lie in 0..budget");
  }
  const auto cells = static_cast<std::size_t>(stored_budget_ + 1) *
                     static_cast<std::size_t>(config_.horizon + 1);
  values_.assign(cells, 0.0);
  policy_.assign(cells, 0);
}

int ValueTable::row(int b) const {
  if (b < 0) throw ConfigError("budget index must be >= 0");
  if (truncated()) return std::min(b, stored_budget_);
  if (b > config_.budget) {
    throw ConfigError("budget " + std::to_string(b) + " outside exact table 0.." +
                      std::to_string(config_.budget));
  }
  return b;
}

void ValueTable::check_t(int t) const {
  if (t < 0 || t > config_.horizon) {
    throw ConfigError("horizon index " + std::to_string(t) + " outside 0.." +
                      std::to_string(config_.horizon));
  }
}

double ValueTable::value(int b, int t) const {
  check_t(t);
  return values_at(t)[static_cast<std::size_t>(row(b))];
}

int ValueTable::policy(int b, int t) const {
  check_t(t);
  return policy_at(t)[static_cast<std::size_t>(row(b))];
}

std::span<const double> ValueTable::values_at(int t) const {
  check_t(t);
  const auto width = static_cast<std::size_t>(stored_budget_ + 1);
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(t) * width,
                                                  width);
}

std::span<double> ValueTable::mutable_values_at(int t) {
  check_t(t);
  const auto width = static_cast<std::size_t>(stored_budget_ + 1);
  return std::span<double>(values_).subspan(static_cast<std::size_t>(t) * width, width);
}

std::span<const int> ValueTable::policy_at(int t) const {
  check_t(t);
  const auto width = static_cast<std::size_t>(stored_budget_ + 1);
  return std::span<const int>(policy_).subspan(static_cast<std::size_t>(t) * width,
                                               width);
}

std::span<int> ValueTable::mutable_policy_at(int t) {
  check_t(t);
  const auto width = static_cast<std::size_t>(stored_budget_ + 1);
  return std::span<int>(policy_).subspan(static_cast<std::size_t>(t) * width, width);
}

ValueTable solve_exact(const TransitionModel& model, const SolverConfig& config) {
  SolverConfig exact = config;
  exact.truncation.reset();
  return run_backward_induction(model, exact, exact.budget);
}

ValueTable solve_truncated(const TransitionModel& model,
                           const SolverConfig& config) {
  if (!config.truncation || *config.truncation <= 0 ||
      *config.truncation > config.budget) {
    throw ConfigError("truncated solve needs 0 < b_max <= budget");
  }
  if (*config.truncation == config.budget) return solve_exact(model, config);
  return run_backward_induction(model, config, *config.truncation);
}

ValueTable solve(const TransitionModel& model, const SolverConfig& config) {
  return config.truncation ? solve_truncated(model, config)
                           : solve_exact(model, config);
}

int optimal_bid(const ValueTable& table, int b, int t) { return table.policy(b, t); }

int contextual_bid(const ValueTable& table, const TransitionModel& model, int b,
                   int t, double pctr) {
  if (t == 0 || b == 0) return table.policy(b, t);
  if (table.truncated()) b = std::min(b, table.stored_budget());
  table.value(b, t);  // range check
  return best_action(model.distribution, pctr, table.config(), b,
                     table.values_at(t - 1))
      .bid;
}

int adjust_bid(int x, int remaining_budget, int cap) {
  return std::max(0, std::min({x, remaining_budget, cap}));
}

int mcpc_bid(double pctr, double max_cpc, int cap) {
  const double raw = max_cpc * pctr;
  if (!std::isfinite(raw)) throw ConfigError("mcpc bid is not finite");
  return static_cast<int>(std::clamp<long long>(std::llround(raw), 0, cap));
}

int linear_bid(double pctr, double base_bid, double avg_ctr, int cap) {
  if (!(avg_ctr > 0.0)) throw ConfigError("linear bid needs avg_ctr > 0");
  const double raw = base_bid * pctr / avg_ctr;
  if (!std::isfinite(raw)) throw ConfigError("linear bid is not finite");
  return static_cast<int>(std::clamp<long long>(std::llround(raw), 0, cap));
}

double brute_force_oracle(const TransitionModel& model,
                          const SolverConfig& config) {
  validate(model);
  validate(config);
  if (config.horizon > 5 || config.budget > 10 ||
      model.distribution.levels() > 4) {
    throw ConfigError(
        "instance too large for brute force (needs T <= 5, B_0 <= 10, L <= 4)");
  }
  return brute_force(model.distribution, model.ctr, config, config.budget,
                     config.horizon);
}

}  // namespace bidcraft::bidopt
