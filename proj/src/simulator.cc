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

#include "bidcraft/simulator.h"

#include <cmath>
#include <stdexcept>

#include "bidcraft/error.h"

namespace bidcraft::sim {

void validate(const EpisodeConfig& config) {
  if (config.episode_length < 1) throw ConfigError("episode length must be >= 1");
  if (!(config.budget_fraction > 0.0) || !std::isfinite(config.budget_fraction)) {
    throw ConfigError("budget fraction c0 must be > 0");
  }
  if (config.budget_override && *config.budget_override < 0) {
    throw ConfigError("budget override must be >= 0");
  }
}

CampaignReport& CampaignReport::operator+=(const CampaignReport& other) {
  auctions += other.auctions;
  impressions += other.impressions;
  clicks += other.clicks;
  cost += other.cost;
  return *this;
}

ReportMetrics derive_report_metrics(long long auctions, long long impressions,
                                    long long clicks, long long cost) {
  ReportMetrics m;
  if (auctions > 0) {
    m.win_rate = static_cast<double>(impressions) / static_cast<double>(auctions);
  }
  if (impressions > 0) {
    m.cpm = static_cast<double>(cost) / static_cast<double>(impressions);
  }
  if (clicks > 0) {
    m.ecpc = static_cast<double>(cost) / static_cast<double>(clicks) / 1000.0;
  }
  return m;
}

ReportMetrics derive_report_metrics(const CampaignReport& r) {
  return derive_report_metrics(r.auctions, r.impressions, r.clicks, r.cost);
}

int compute_episode_budget(const bidlog::CampaignDataset& train,
                           const EpisodeConfig& config) {
  validate(config);
  if (config.budget_override) return *config.budget_override;
  long long wins = 0, cost = 0;
  for (const auto& r : train.records) {
    if (r.censored()) continue;
    ++wins;
    cost += *r.market_price;
  }
  if (wins == 0) {
    throw DataError("episode budget needs at least one uncensored training win");
  }
  const double mean_price = static_cast<double>(cost) / static_cast<double>(wins);
  return static_cast<int>(
      std::llround(config.budget_fraction * config.episode_length * mean_price));
}

CampaignReport run_episode(std::span<const bidlog::BidRecord> records,
                           const Bidder& bidder, int budget,
                           bidopt::Payment payment, int cap) {
  if (budget < 0) throw ConfigError("episode budget must be >= 0");
  CampaignReport report;
  int remaining = budget;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.censored()) {
      throw DataError("replay requires uncensored logs");
    }
    const BidContext context{remaining, static_cast<int>(records.size() - i), r};
    const int bid = bidopt::adjust_bid(bidder(context), remaining, cap);
    ++report.auctions;
    if (bid > *r.market_price) {
      const int pay =
          payment == bidopt::Payment::kSecondPrice ? *r.market_price : bid;
      remaining -= pay;
      report.cost += pay;
      ++report.impressions;
      if (r.click) ++report.clicks;
    }
    if (remaining < 0 || report.cost > budget) {
      throw std::logic_error("episode spend exceeded its budget");
    }
  }
  return report;
}

std::vector<CampaignReport> run_episodes(const bidlog::CampaignDataset& dataset,
                                         const Bidder& bidder,
                                         const EpisodeConfig& config, int budget) {
  validate(config);
  const std::span<const bidlog::BidRecord> records(dataset.records);
  const auto n = static_cast<std::size_t>(config.episode_length);
  const int cap = dataset.price_levels - 1;
  std::vector<CampaignReport> reports;
  for (std::size_t start = 0; start < records.size(); start += n) {
    const std::size_t len = std::min(n, records.size() - start);
    const int episode_budget =
        len == n ? budget
                 : static_cast<int>(std::llround(static_cast<double>(budget) *
                                                 static_cast<double>(len) /
                                                 static_cast<double>(n)));
    reports.push_back(run_episode(records.subspan(start, len), bidder,
                                  episode_budget, config.payment, cap));
  }
  return reports;
}

CampaignReport run_campaign(const bidlog::CampaignDataset& dataset,
                            const Bidder& bidder, const EpisodeConfig& config,
                            int budget) {
  CampaignReport total;
  for (const auto& r : run_episodes(dataset, bidder, config, budget)) total += r;
  return total;
}

// ---------------------------------------------------------------------------

Bidder constant_bidder(int bid) {
  return [bid](const BidContext&) { return bid; };
}

Bidder mcpc_bidder(double max_cpc, int cap) {
  if (!(max_cpc >= 0.0)) throw ConfigError("max_cpc must be >= 0");
  return [max_cpc, cap](const BidContext& c) {
    return bidopt::mcpc_bid(c.record.pctr, max_cpc, cap);
  };
}

Bidder linear_bidder(double base_bid, double avg_ctr, int cap) {
  if (!(avg_ctr > 0.0)) throw ConfigError("linear bidder needs avg_ctr > 0");
  return [base_bid, avg_ctr, cap](const BidContext& c) {
    return bidopt::linear_bid(c.record.pctr, base_bid, avg_ctr, cap);
  };
}

Bidder dp_bidder(std::shared_ptr<const bidopt::ValueTable> table,
                 bidopt::TransitionModel model) {
  if (!table) throw ConfigError("dp bidder needs a value table");
  return [table = std::move(table), model = std::move(model)](const BidContext& c) {
    const int t = std::min(c.remaining_auctions, table->horizon());
    const int b = table->truncated()
                      ? c.remaining_budget
                      : std::min(c.remaining_budget, table->budget());
    return bidopt::contextual_bid(*table, model, b, t, c.record.pctr);
  };
}

double historical_cpc(const bidlog::CampaignDataset& train) {
  long long cost = 0, clicks = 0;
  for (const auto& r : train.records) {
    if (r.censored()) continue;
    cost += *r.market_price;
    if (r.click) ++clicks;
  }
  if (clicks == 0) throw DataError("historical CPC needs at least one click");
  return static_cast<double>(cost) / static_cast<double>(clicks);
}

int tune_linear_base_bid(const bidlog::CampaignDataset& train, double avg_ctr,
                         const EpisodeConfig& config, int budget, int cap) {
  int best_bid = 1;
  CampaignReport best;
  bool have = false;
  for (int base = 1; base <= std::max(1, cap); ++base) {
    const auto report =
        run_campaign(train, linear_bidder(base, avg_ctr, cap), config, budget);
    if (!have || report.clicks > best.clicks ||
        (report.clicks == best.clicks && report.cost < best.cost)) {
      best = report;
      best_bid = base;
      have = true;
    }
  }
  return best_bid;
}

}  // namespace bidcraft::sim
