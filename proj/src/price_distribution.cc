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

#include "bidcraft/price_distribution.h"

#include <cmath>
#include <numeric>

#include "bidcraft/error.h"

namespace bidcraft {

PriceDistribution::PriceDistribution(std::vector<double> pmf)
    : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw ConfigError("price distribution needs >= 1 level");
  cumulative_.assign(pmf_.size() + 1, 0.0);
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    if (!std::isfinite(pmf_[i]) || pmf_[i] < 0.0) {
      throw ConfigError("pmf entries must be finite and nonnegative");
    }
    cumulative_[i + 1] = cumulative_[i] + pmf_[i];
  }
  if (std::abs(cumulative_.back() - 1.0) > kPmfTolerance) {
    throw ConfigError("pmf must sum to 1");
  }
}

PriceDistribution PriceDistribution::from_weights(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ConfigError("weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("weights have zero total mass");
  for (double& w : weights) w /= total;
  return PriceDistribution(std::move(weights));
}

PriceDistribution PriceDistribution::uniform(int levels) {
  if (levels < 1) throw ConfigError("price distribution needs >= 1 level");
  return PriceDistribution(std::vector<double>(
      static_cast<std::size_t>(levels), 1.0 / static_cast<double>(levels)));
}

PriceDistribution PriceDistribution::point_mass(int levels, int price) {
  if (levels < 1 || price < 0 || price >= levels) {
    throw ConfigError("point mass outside the price grid");
  }
  std::vector<double> pmf(static_cast<std::size_t>(levels), 0.0);
  pmf[static_cast<std::size_t>(price)] = 1.0;
  return PriceDistribution(std::move(pmf));
}

double PriceDistribution::mass_below(int x) const {
  if (x <= 0) return 0.0;
  if (x >= levels()) return cumulative_.back();
  return cumulative_[static_cast<std::size_t>(x)];
}

double PriceDistribution::mass_at_or_above(int z) const {
  if (z <= 0) return cumulative_.back();
  if (z >= levels()) return 0.0;
  // Summed directly so tail probabilities keep their relative precision.
  double tail = 0.0;
  for (std::size_t i = static_cast<std::size_t>(z); i < pmf_.size(); ++i) {
    tail += pmf_[i];
  }
  return tail;
}

double PriceDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    m += static_cast<double>(i) * pmf_[i];
  }
  return m;
}

double PriceDistribution::entropy() const {
  double h = 0.0;
  for (double p : pmf_) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace bidcraft
