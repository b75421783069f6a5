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

// Budget-constrained bidding as a finite-horizon MDP over (remaining budget b,
// remaining auctions t). One auction per step; the bid x is restricted to
// 0..min(b, L-1), and an auction is won iff x > market price m:
//
//   V(b, 0) = 0
//   V(b, t) = max_x  r(x) + gamma * [ sum_{m<x} pmf(m) V(b - pay(m, x), t-1)
//                                     + P(m >= x) V(b, t-1) ]
//
// pay(m, x) is m under second price and x under first price / literal bid.
// r(x) is P(win) * ctr for the clicks objective and
// P(win) * (ctr * click_value - E[pay | win]) for the surplus objective.

#ifndef BIDCRAFT_BIDOPT_H_
#define BIDCRAFT_BIDOPT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bidcraft/price_distribution.h"

namespace bidcraft::bidopt {

enum class Objective { kClicks, kSurplus };
// kLiteralBid charges the bid on a win, like kFirstPrice; it exists to run
// the budget update exactly as b - x.
enum class Payment { kSecondPrice, kFirstPrice, kLiteralBid };

std::string to_string(Objective objective);
std::string to_string(Payment payment);
Objective objective_from_string(const std::string& name);
Payment payment_from_string(const std::string& name);

struct SolverConfig {
  int budget = 0;   // B_0
  int horizon = 0;  // T, auctions per episode
  Objective objective = Objective::kClicks;
  double click_value = 0.0;  // surplus objective only
  Payment payment = Payment::kSecondPrice;
  double discount = 1.0;
  std::optional<int> truncation;  // b_max

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

void validate(const SolverConfig& config);

struct TransitionModel {
  PriceDistribution distribution;
  double ctr = 0.0;  // expected pctr per auction
};

void validate(const TransitionModel& model);

// P(m < x). 0 for x <= 0, 1 for x >= L.
double win_prob(int x, const PriceDistribution& dist);

// E[m | m < x]. DataError when P(m < x) = 0.
double expected_payment_on_win(int x, const PriceDistribution& dist);

// r(x) above at the model's ctr. ConfigError if x > min(b, L - 1).
double immediate_value(int x, int b, int t, const TransitionModel& model,
                       const SolverConfig& config);

inline int bid_cap(const TransitionModel& model) {
  return model.distribution.levels() - 1;
}

// V and the greedy policy over b in 0..B_0, t in 0..T. A truncated table
// solves b <= b_max exactly and answers every b > b_max with row b_max.
class ValueTable {
 public:
  ValueTable(SolverConfig config, int stored_budget);

  const SolverConfig& config() const { return config_; }
  int budget() const { return config_.budget; }
  int horizon() const { return config_.horizon; }
  // Highest budget row solved exactly: b_max, or B_0 for exact tables.
  int stored_budget() const { return stored_budget_; }
  bool truncated() const { return stored_budget_ < config_.budget; }

  // For b > B_0 or t outside 0..T: ConfigError on exact tables. Truncated
  // tables clamp any b > b_max to b_max.
  double value(int b, int t) const;
  int policy(int b, int t) const;

  // Row t of V over stored budgets 0..stored_budget().
  std::span<const double> values_at(int t) const;
  std::span<double> mutable_values_at(int t);
  std::span<int> mutable_policy_at(int t);
  std::span<const int> policy_at(int t) const;

  friend bool operator==(const ValueTable&, const ValueTable&) = default;

 private:
  int row(int b) const;
  void check_t(int t) const;

  SolverConfig config_;
  int stored_budget_;
  // t-major: entry (b, t) lives at t * (stored_budget_ + 1) + b.
  std::vector<double> values_;
  std::vector<int> policy_;
};

// Backward induction from t = 0. Ties in the max go to the smaller bid.
// config.truncation is ignored.
ValueTable solve_exact(const TransitionModel& model, const SolverConfig& config);

// Requires 0 < config.truncation <= B_0. With b_max = B_0 the result is
// identical to solve_exact.
ValueTable solve_truncated(const TransitionModel& model,
                           const SolverConfig& config);

// Dispatches on config.truncation.
ValueTable solve(const TransitionModel& model, const SolverConfig& config);

int optimal_bid(const ValueTable& table, int b, int t);

// The bid maximizing the one-step Bellman lookahead with this auction's own
// pctr in place of the model ctr, against V(., t-1) from `table`. Equals
// optimal_bid when pctr == model.ctr.
int contextual_bid(const ValueTable& table, const TransitionModel& model,
                   int b, int t, double pctr);

// min(x, remaining_budget, cap).
int adjust_bid(int x, int remaining_budget, int cap);

// round(max_cpc * pctr), clamped to [0, cap].
int mcpc_bid(double pctr, double max_cpc, int cap);

// round(base_bid * pctr / avg_ctr), clamped to [0, cap]. ConfigError when
// avg_ctr <= 0.
int linear_bid(double pctr, double base_bid, double avg_ctr, int cap);

// Expected value of V(B_0, T) by exhaustive enumeration of every bid and
// every price outcome at every step, with no memoization. Refuses instances
// beyond T <= 5, B_0 <= 10, L <= 4.
double brute_force_oracle(const TransitionModel& model,
                          const SolverConfig& config);

}  // namespace bidcraft::bidopt

#endif  // BIDCRAFT_BIDOPT_H_
