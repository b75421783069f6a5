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

// Unconditional market-price models: Kaplan-Meier on right-censored logs and
// a method-of-moments Gamma fit.

#ifndef BIDCRAFT_SURVIVAL_H_
#define BIDCRAFT_SURVIVAL_H_

#include <vector>

#include "bidcraft/bidlog.h"
#include "bidcraft/price_distribution.h"

namespace bidcraft::landscape {

// Step function S(z) = P(market price > z), stored at its jump points (the
// distinct observed prices, ascending). S is 1 before the first point.
struct SurvivalPoint {
  int price = 0;
  double survival = 1.0;

  friend bool operator==(const SurvivalPoint&, const SurvivalPoint&) = default;
};

struct SurvivalCurve {
  std::vector<SurvivalPoint> points;
  int price_levels = bidlog::kDefaultPriceLevels;

  double at(int price) const;

  friend bool operator==(const SurvivalCurve&, const SurvivalCurve&) = default;
};

// Throws ConfigError on non-monotone or out-of-range curves.
void validate(const SurvivalCurve& curve);

// Product-limit estimator. A record censored at z is still at risk for an
// event at z (its true price is >= z). The product is accumulated in exact
// rational arithmetic and rounded once per point. Throws DataError when there
// are no uncensored records.
SurvivalCurve km_fit(const bidlog::CampaignDataset& dataset);

// pmf(z) = S(z-1) - S(z) at each jump; the mass left after the last jump
// goes to level L-1.
PriceDistribution survival_to_distribution(const SurvivalCurve& curve);

struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;

  friend bool operator==(const GammaParams&, const GammaParams&) = default;
};

void validate(const GammaParams& params);

// Method of moments on the uncensored prices with population variance:
// shape = mean^2 / var, scale = var / mean. DataError on fewer than two
// observations or zero variance.
GammaParams gamma_fit(const bidlog::CampaignDataset& dataset);

// pmf(z) proportional to F(z+1) - F(z) for z < L-1, with the whole tail
// 1 - F(L-1) in the last bucket.
PriceDistribution gamma_discretize(const GammaParams& params, int price_levels);

}  // namespace bidcraft::landscape

#endif  // BIDCRAFT_SURVIVAL_H_
