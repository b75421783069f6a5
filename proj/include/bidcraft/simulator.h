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

// Log replay of second-price (or first-price) auctions under a per-episode
// budget. Replay does not feed back into the market: the logged market price
// is the price to beat regardless of what we bid.

#ifndef BIDCRAFT_SIMULATOR_H_
#define BIDCRAFT_SIMULATOR_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bidcraft/bidlog.h"
#include "bidcraft/bidopt.h"

namespace bidcraft::sim {

struct BidContext {
  int remaining_budget = 0;
  int remaining_auctions = 0;
  const bidlog::BidRecord& record;
};

using Bidder = std::function<int(const BidContext&)>;

struct EpisodeConfig {
  int episode_length = 1000;           // N
  double budget_fraction = 1.0 / 16;   // c_0
  std::optional<int> budget_override;  // explicit B_0
  bidopt::Payment payment = bidopt::Payment::kSecondPrice;
};

void validate(const EpisodeConfig& config);

struct CampaignReport {
  long long auctions = 0;
  long long impressions = 0;
  long long clicks = 0;
  long long cost = 0;

  // The optimization objective is clicks.
  long long objective() const { return clicks; }

  CampaignReport& operator+=(const CampaignReport& other);
  friend bool operator==(const CampaignReport&, const CampaignReport&) = default;
};

// Derived report columns. nullopt marks a zero denominator.
struct ReportMetrics {
  std::optional<double> win_rate;  // impressions / auctions
  std::optional<double> cpm;       // cost / impressions
  std::optional<double> ecpc;      // cost / clicks / 1000
};

ReportMetrics derive_report_metrics(long long auctions, long long impressions,
                                    long long clicks, long long cost);
ReportMetrics derive_report_metrics(const CampaignReport& report);

// round(c_0 * N * mean observed price of the training wins), or the override.
// DataError when the training log has no uncensored record.
int compute_episode_budget(const bidlog::CampaignDataset& train,
                           const EpisodeConfig& config);

// Replays up to one episode. Every bid goes through adjust_bid, so spend
// never exceeds `budget`. DataError on a censored record.
CampaignReport run_episode(std::span<const bidlog::BidRecord> records,
                           const Bidder& bidder, int budget,
                           bidopt::Payment payment, int cap);

// Consecutive episodes of N auctions with a fresh budget each; a final
// partial episode of n < N auctions gets round(budget * n / N).
std::vector<CampaignReport> run_episodes(const bidlog::CampaignDataset& dataset,
                                         const Bidder& bidder,
                                         const EpisodeConfig& config, int budget);

CampaignReport run_campaign(const bidlog::CampaignDataset& dataset,
                            const Bidder& bidder, const EpisodeConfig& config,
                            int budget);

// ---------------------------------------------------------------------------
// Bidders.

Bidder constant_bidder(int bid);
Bidder mcpc_bidder(double max_cpc, int cap);
Bidder linear_bidder(double base_bid, double avg_ctr, int cap);

// Bids by the value table, re-running the one-step Bellman choice with each
// auction's own pctr.
Bidder dp_bidder(std::shared_ptr<const bidopt::ValueTable> table,
                 bidopt::TransitionModel model);

// Total observed cost over total clicks of the uncensored training records;
// the default MCPC limit. DataError when there are no clicks.
double historical_cpc(const bidlog::CampaignDataset& train);

// Base bid in 1..cap that maximizes clicks (lowest cost on ties) when the
// linear bidder replays `train` under the episode budget.
int tune_linear_base_bid(const bidlog::CampaignDataset& train, double avg_ctr,
                         const EpisodeConfig& config, int budget, int cap);

}  // namespace bidcraft::sim

#endif  // BIDCRAFT_SIMULATOR_H_
