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

#include "bidcraft/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "bidcraft/error.h"

namespace bidcraft::metrics {

double auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw ConfigError("auc needs one label per score");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the midrank keeps everything integral until the final division.
  std::int64_t positives = 0;
  std::int64_t rank_sum_x2 = 0;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    const auto rank_x2 = static_cast<std::int64_t>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      if (labels[order[k]]) {
        ++positives;
        rank_sum_x2 += rank_x2;
      }
    }
    start = end;
  }
  const std::int64_t negatives = static_cast<std::int64_t>(n) - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("undefined AUC: labels contain a single class");
  }
  const std::int64_t u_x2 = rank_sum_x2 - positives * (positives + 1);
  return static_cast<double>(u_x2) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double log_loss(std::span<const double> probs, const std::vector<bool>& labels,
                double epsilon) {
  if (probs.empty() || probs.size() != labels.size()) {
    throw ConfigError("log_loss needs equal-length, nonempty inputs");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    sum += labels[i] ? std::log(std::max(epsilon, p))
                     : std::log(std::max(epsilon, 1.0 - p));
  }
  return -sum / static_cast<double>(probs.size());
}

double anlp(std::span<const PriceDistribution> distributions,
            std::span<const int> true_prices, double epsilon) {
  if (distributions.empty() || distributions.size() != true_prices.size()) {
    throw ConfigError("anlp needs equal-length, nonempty inputs");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < distributions.size(); ++i) {
    const int z = true_prices[i];
    if (z < 0 || z >= distributions[i].levels()) {
      throw ConfigError("anlp true price outside the grid");
    }
    sum += std::log(std::max(epsilon, distributions[i][z]));
  }
  return -sum / static_cast<double>(distributions.size());
}

double anlp(const landscape::MarketModel& model,
            const bidlog::CampaignDataset& dataset, double epsilon) {
  if (dataset.empty()) throw ConfigError("anlp needs a nonempty dataset");
  if (model.price_levels() != dataset.price_levels) {
    throw ConfigError("model and dataset disagree on the price grid");
  }
  auto state = landscape::initial_state(model);
  double sum = 0.0;
  for (const auto& r : dataset.records) {
    if (r.censored()) {
      throw DataError("anlp is defined on uncensored records only");
    }
    const auto dist = landscape::predict_distribution(model, r, state);
    sum += std::log(std::max(epsilon, dist[*r.market_price]));
  }
  return -sum / static_cast<double>(dataset.size());
}

WinInputs win_auc_inputs(const landscape::MarketModel& model,
                         const bidlog::CampaignDataset& dataset) {
  if (model.price_levels() != dataset.price_levels) {
    throw ConfigError("model and dataset disagree on the price grid");
  }
  WinInputs out;
  out.scores.reserve(dataset.size());
  out.labels.reserve(dataset.size());
  auto state = landscape::initial_state(model);
  for (const auto& r : dataset.records) {
    const auto dist = landscape::predict_distribution(model, r, state);
    out.scores.push_back(dist.mass_below(r.logged_bid));
    out.labels.push_back(!r.censored() && r.logged_bid > *r.market_price);
  }
  return out;
}

PdfReportRow evaluate_model(const std::string& algorithm,
                            const landscape::MarketModel& model,
                            const bidlog::CampaignDataset& dataset,
                            double epsilon) {
  if (dataset.empty()) throw ConfigError("cannot evaluate on an empty dataset");
  if (model.price_levels() != dataset.price_levels) {
    throw ConfigError("model and dataset disagree on the price grid");
  }
  PdfReportRow row;
  row.algorithm = algorithm;

  std::vector<double> scores;
  std::vector<bool> labels;
  double nll = 0.0;
  std::size_t observed = 0;
  auto state = landscape::initial_state(model);
  for (const auto& r : dataset.records) {
    const auto dist = landscape::predict_distribution(model, r, state);
    scores.push_back(dist.mass_below(r.logged_bid));
    labels.push_back(!r.censored() && r.logged_bid > *r.market_price);
    if (!r.censored()) {
      nll -= std::log(std::max(epsilon, dist[*r.market_price]));
      ++observed;
    }
  }
  const bool both = std::find(labels.begin(), labels.end(), true) != labels.end() &&
                    std::find(labels.begin(), labels.end(), false) != labels.end();
  row.auc = both ? auc(scores, labels) : std::numeric_limits<double>::quiet_NaN();
  row.log_loss = log_loss(scores, labels, epsilon);
  row.anlp = observed > 0 ? nll / static_cast<double>(observed)
                          : std::numeric_limits<double>::quiet_NaN();
  return row;
}

}  // namespace bidcraft::metrics
