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

#ifndef BIDCRAFT_PRICE_DISTRIBUTION_H_
#define BIDCRAFT_PRICE_DISTRIBUTION_H_

#include <span>
#include <vector>

namespace bidcraft {

inline constexpr double kPmfTolerance = 1e-9;

// Probability mass function over integer price levels 0..L-1. Always valid:
// entries are finite, nonnegative and sum to 1 within kPmfTolerance.
class PriceDistribution {
 public:
  // Validates `pmf` as is; throws ConfigError otherwise.
  explicit PriceDistribution(std::vector<double> pmf);

  // Scales nonnegative weights to unit mass. Zero total mass is rejected.
  static PriceDistribution from_weights(std::vector<double> weights);
  static PriceDistribution uniform(int levels);
  static PriceDistribution point_mass(int levels, int price);

  int levels() const { return static_cast<int>(pmf_.size()); }
  double operator[](int price) const { return pmf_[static_cast<std::size_t>(price)]; }
  std::span<const double> pmf() const { return pmf_; }

  // P(m < x). x may be anything; below 0 gives 0, above L-1 gives 1.
  double mass_below(int x) const;
  // P(m >= z).
  double mass_at_or_above(int z) const;
  double mean() const;
  // -sum p ln p.
  double entropy() const;

  friend bool operator==(const PriceDistribution&,
                         const PriceDistribution&) = default;

 private:
  std::vector<double> pmf_;
  std::vector<double> cumulative_;  // cumulative_[x] = P(m < x), size L+1
};

}  // namespace bidcraft

#endif  // BIDCRAFT_PRICE_DISTRIBUTION_H_
