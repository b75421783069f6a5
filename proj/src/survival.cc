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

#include "bidcraft/survival.h"

#include <cmath>
#include <cstdint>

#include <boost/math/distributions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "bidcraft/error.h"

namespace bidcraft::landscape {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Correctly rounded whenever numerator and denominator fit in a double's
// mantissa; otherwise 64 significant quotient bits are kept before rounding.
double to_double(const cpp_rational& value) {
  const cpp_int num = boost::multiprecision::numerator(value);
  const cpp_int den = boost::multiprecision::denominator(value);
  const cpp_int limit = cpp_int(1) << 53;
  if (num < limit && den < limit) {
    return static_cast<double>(num.convert_to<std::int64_t>()) /
           static_cast<double>(den.convert_to<std::int64_t>());
  }
  if (num == 0) return 0.0;
  const long shift = static_cast<long>(boost::multiprecision::msb(den)) -
                     static_cast<long>(boost::multiprecision::msb(num)) + 64;
  cpp_int scaled;
  if (shift >= 0) {
    scaled = (num << shift) / den;
  } else {
    scaled = (num >> -shift) / den;
  }
  return std::ldexp(scaled.convert_to<double>(), static_cast<int>(-shift));
}

}  // namespace

double SurvivalCurve::at(int price) const {
  double s = 1.0;
  for (const auto& p : points) {
    if (p.price > price) break;
    s = p.survival;
  }
  return s;
}

void validate(const SurvivalCurve& curve) {
  if (curve.price_levels < 1) throw ConfigError("price_levels must be >= 1");
  double prev_s = 1.0;
  int prev_z = -1;
  for (const auto& p : curve.points) {
    if (p.price <= prev_z || p.price >= curve.price_levels) {
      throw ConfigError("survival points must be strictly ascending on the grid");
    }
    if (!(p.survival >= 0.0 && p.survival <= prev_s)) {
      throw ConfigError("survival must be nonincreasing within [0, 1]");
    }
    prev_s = p.survival;
    prev_z = p.price;
  }
}

SurvivalCurve km_fit(const bidlog::CampaignDataset& dataset) {
  const auto levels = static_cast<std::size_t>(dataset.price_levels);
  std::vector<std::int64_t> events(levels, 0);
  std::vector<std::int64_t> censored(levels, 0);
  std::int64_t num_events = 0;
  for (const auto& r : dataset.records) {
    if (r.censored()) {
      ++censored.at(static_cast<std::size_t>(*r.lower_bound));
    } else {
      ++events.at(static_cast<std::size_t>(*r.market_price));
      ++num_events;
    }
  }
  if (dataset.empty()) throw DataError("cannot fit Kaplan-Meier on no records");
  if (num_events == 0) {
    throw DataError("fully censored: Kaplan-Meier needs uncensored records");
  }

  SurvivalCurve curve;
  curve.price_levels = dataset.price_levels;
  auto at_risk = static_cast<std::int64_t>(dataset.size());
  cpp_rational survival(1);
  for (std::size_t z = 0; z < levels; ++z) {
    if (events[z] > 0) {
      survival *= cpp_rational(at_risk - events[z], at_risk);
      curve.points.push_back({static_cast<int>(z), to_double(survival)});
    }
    at_risk -= events[z] + censored[z];
  }
  return curve;
}

PriceDistribution survival_to_distribution(const SurvivalCurve& curve) {
  validate(curve);
  std::vector<double> pmf(static_cast<std::size_t>(curve.price_levels), 0.0);
  double prev = 1.0;
  for (const auto& p : curve.points) {
    pmf[static_cast<std::size_t>(p.price)] += prev - p.survival;
    prev = p.survival;
  }
  pmf.back() += prev;
  return PriceDistribution::from_weights(std::move(pmf));
}

void validate(const GammaParams& params) {
  if (!(params.shape > 0.0) || !(params.scale > 0.0) ||
      !std::isfinite(params.shape) || !std::isfinite(params.scale)) {
    throw ConfigError("gamma parameters must be finite and > 0");
  }
}

GammaParams gamma_fit(const bidlog::CampaignDataset& dataset) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : dataset.records) {
    if (r.censored()) continue;
    sum += *r.market_price;
    ++n;
  }
  if (n < 2) throw DataError("degenerate gamma fit: fewer than 2 observations");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& r : dataset.records) {
    if (r.censored()) continue;
    const double d = *r.market_price - mean;
    ss += d * d;
  }
  const double variance = ss / static_cast<double>(n);
  if (!(variance > 0.0) || !(mean > 0.0)) {
    throw DataError("degenerate gamma fit: zero variance or zero mean");
  }
  return {mean * mean / variance, variance / mean};
}

PriceDistribution gamma_discretize(const GammaParams& params, int price_levels) {
  validate(params);
  if (price_levels < 1) throw ConfigError("price_levels must be >= 1");
  const boost::math::gamma_distribution<double> law(params.shape, params.scale);
  std::vector<double> pmf(static_cast<std::size_t>(price_levels), 0.0);
  double lower = 0.0;  // F(0) = 0 for a continuous law on (0, inf)
  for (int z = 0; z + 1 < price_levels; ++z) {
    const double upper = boost::math::cdf(law, static_cast<double>(z + 1));
    pmf[static_cast<std::size_t>(z)] = upper - lower;
    lower = upper;
  }
  pmf.back() = boost::math::cdf(boost::math::complement(
      law, static_cast<double>(price_levels - 1)));
  return PriceDistribution::from_weights(std::move(pmf));
}

}  // namespace bidcraft::landscape
