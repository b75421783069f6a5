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

// Bid log data model: records, datasets, TSV ingestion, a synthetic
// generator with known market-price laws, and the censoring transform.

#ifndef BIDCRAFT_BIDLOG_H_
#define BIDCRAFT_BIDLOG_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bidcraft::bidlog {

inline constexpr int kDefaultPriceLevels = 301;

// One auction observation. Exactly one of market_price / lower_bound is set:
// an observed (won) auction carries the market price, a lost auction only
// knows that the market price is >= lower_bound.
struct BidRecord {
  std::string campaign_id;
  std::int64_t timestamp = 0;
  std::vector<std::string> features;
  int logged_bid = 0;
  std::optional<int> market_price;
  std::optional<int> lower_bound;
  bool click = false;
  double pctr = 0.0;

  bool censored() const { return !market_price.has_value(); }

  friend bool operator==(const BidRecord&, const BidRecord&) = default;
};

// Throws ConfigError if the record violates its invariants on a grid of
// `price_levels` levels.
void validate(const BidRecord& record, int price_levels);

struct CampaignDataset {
  std::vector<BidRecord> records;
  int price_levels = kDefaultPriceLevels;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  std::size_t num_censored() const;
  double mean_pctr() const;

  friend bool operator==(const CampaignDataset&, const CampaignDataset&) =
      default;
};

void validate(const CampaignDataset& dataset);

// Uncensored subset, order preserved.
CampaignDataset observed_only(const CampaignDataset& dataset);

// ---------------------------------------------------------------------------
// TSV ingestion.

// Column indices (0-based) of a tab-separated log. `bid`, `pay` and `click`
// are required. A censored line has an empty or "-" pay cell plus a
// lower-bound cell. Feature tokens are stored as "<name>:<cell>", where the
// name defaults to "c<column>".
struct LogSchema {
  int bid = -1;
  int pay = -1;
  int click = -1;
  std::vector<int> features;
  std::vector<std::string> feature_names;
  std::optional<int> timestamp;
  std::optional<int> pctr;
  std::optional<int> lower_bound;
  std::optional<int> campaign;
  std::optional<int> price_levels;

  std::string feature_name(std::size_t i) const;
};

// Parses {"bid": 1, "pay": 2, "click": 3, "features": [4, 5], ...}.
LogSchema parse_schema_json(const std::string& text);
std::string schema_to_json(const LogSchema& schema);

struct ParseOptions {
  int price_levels = kDefaultPriceLevels;
  // Strict: a malformed line aborts with ParseError. Lenient: it is skipped
  // and counted.
  bool strict = true;
  // Used for every record when the schema has no pctr column and the log
  // has no clicks to estimate it from.
  double default_pctr = 0.0;
};

struct ParseResult {
  CampaignDataset dataset;
  std::size_t clamped = 0;  // price cells moved into 0..L-1
  std::size_t skipped = 0;  // malformed lines dropped in lenient mode
};

// Without a pctr column every record gets the log's empirical click rate.
ParseResult parse_log(std::istream& in, const LogSchema& schema,
                      const ParseOptions& options = {});

// Schema that write_log emits and parse_log reads back losslessly.
LogSchema canonical_schema(std::size_t num_features,
                           std::vector<std::string> feature_names = {});

// Serializes with `schema`; every column the dataset needs must be mapped.
void write_log(std::ostream& out, const CampaignDataset& dataset,
               const LogSchema& schema);

// ---------------------------------------------------------------------------
// Synthetic logs.

struct GammaLaw {
  double shape = 5.0;
  double scale = 10.0;
};
struct UniformLaw {
  int lo = 0;
  int hi = 0;
};
struct PointLaw {
  int price = 0;
};
using PriceLaw = std::variant<GammaLaw, UniformLaw, PointLaw>;

struct SyntheticConfig {
  std::size_t n = 0;
  PriceLaw price_law = GammaLaw{};
  // Logged bids are drawn independently from this law; defaults to the price
  // law itself.
  std::optional<PriceLaw> bid_law;
  double mean_ctr = 0.001;
  // pctr is uniform on mean_ctr * [1 - spread, 1 + spread]; 0 gives every
  // record the same pctr.
  double pctr_spread = 1.0;
  std::vector<int> feature_vocab;
  std::uint64_t seed = 0;
  int price_levels = kDefaultPriceLevels;
  std::string campaign_id = "synthetic";
};

void validate(const SyntheticConfig& config);

// Market prices i.i.d. from the price law rounded and clamped to the grid.
// pctr ~ U(0, 2 * mean_ctr) clipped to 1, click ~ Bernoulli(pctr).
CampaignDataset generate_synthetic(const SyntheticConfig& config);

// Replays `policy_bid` against each record: win iff bid > market price.
// Losers become censored at lower_bound = bid. Already censored records are
// passed through unchanged.
CampaignDataset apply_censoring(const CampaignDataset& dataset,
                                std::span<const int> policy_bid);

// Censoring at each record's own logged bid.
CampaignDataset censor_at_logged_bids(const CampaignDataset& dataset);

// Random partition, `fraction` of the records (rounded) in the first part.
std::pair<CampaignDataset, CampaignDataset> train_test_split(
    const CampaignDataset& dataset, double fraction, std::uint64_t seed);

}  // namespace bidcraft::bidlog

#endif  // BIDCRAFT_BIDLOG_H_
