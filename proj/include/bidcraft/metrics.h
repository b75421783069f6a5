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

// Evaluation metrics for market-price models.

#ifndef BIDCRAFT_METRICS_H_
#define BIDCRAFT_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "bidcraft/bidlog.h"
#include "bidcraft/market_model.h"
#include "bidcraft/price_distribution.h"

namespace bidcraft::metrics {

inline constexpr double kDefaultEpsilon = 1e-12;

// Mann-Whitney AUC: P(random positive scores above random negative), ties
// count one half. O(n log n) via midranks. DataError("undefined AUC") when
// only one class is present.
double auc(std::span<const double> scores, const std::vector<bool>& labels);

// -(1/n) sum [y ln(max(eps, p)) + (1 - y) ln(max(eps, 1 - p))].
double log_loss(std::span<const double> probs, const std::vector<bool>& labels,
                double epsilon = kDefaultEpsilon);

// -(1/n) sum ln(max(eps, pmf_i(z_i))).
double anlp(std::span<const PriceDistribution> distributions,
            std::span<const int> true_prices, double epsilon = kDefaultEpsilon);

// ANLP of a model over a log. Every record must be uncensored; DataError
// otherwise.
double anlp(const landscape::MarketModel& model,
            const bidlog::CampaignDataset& dataset,
            double epsilon = kDefaultEpsilon);

struct WinInputs {
  std::vector<double> scores;  // predicted P(win) at the logged bid
  std::vector<bool> labels;    // realized win at the logged bid
};

// score_i = sum_{z < logged_bid_i} pmf_i(z). A record is a realized win when
// it is uncensored and logged_bid > market_price.
WinInputs win_auc_inputs(const landscape::MarketModel& model,
                         const bidlog::CampaignDataset& dataset);

// One Algorithm / AUC / Log Loss / ANLP row. AUC is NaN when the log holds a
// single win/lose class; ANLP covers the uncensored records only.
struct PdfReportRow {
  std::string algorithm;
  double auc = 0.0;
  double log_loss = 0.0;
  double anlp = 0.0;
};

PdfReportRow evaluate_model(const std::string& algorithm,
                            const landscape::MarketModel& model,
                            const bidlog::CampaignDataset& dataset,
                            double epsilon = kDefaultEpsilon);

}  // namespace bidcraft::metrics

#endif  // BIDCRAFT_METRICS_H_
