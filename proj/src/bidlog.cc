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

#include "bidcraft/bidlog.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <string_view>
#include <system_error>

#include "bidcraft/error.h"
#include "json.hpp"

namespace bidcraft::bidlog {
namespace {

using nlohmann::json;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cells;
}

template <typename T>
std::optional<T> parse_number(std::string_view cell) {
  T value{};
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) return std::nullopt;
  return value;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "-"; }

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

int draw_price(const PriceLaw& law, std::mt19937_64& rng, int price_levels) {
  const int top = price_levels - 1;
  return std::visit(
      [&](const auto& l) -> int {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GammaLaw>) {
          std::gamma_distribution<double> gamma(l.shape, l.scale);
          const long rounded = std::lround(gamma(rng));
          return static_cast<int>(std::clamp<long>(rounded, 0, top));
        } else if constexpr (std::is_same_v<L, UniformLaw>) {
          std::uniform_int_distribution<int> uniform(l.lo, l.hi);
          return uniform(rng);
        } else {
          return l.price;
        }
      },
      law);
}

void validate_law(const PriceLaw& law, int price_levels) {
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GammaLaw>) {
          if (!(l.shape > 0.0) || !(l.scale > 0.0) || !std::isfinite(l.shape) ||
              !std::isfinite(l.scale)) {
            throw ConfigError("gamma law needs shape > 0 and scale > 0");
          }
        } else if constexpr (std::is_same_v<L, UniformLaw>) {
          if (l.lo < 0 || l.lo > l.hi || l.hi >= price_levels) {
            throw ConfigError("uniform law needs 0 <= lo <= hi < L");
          }
        } else {
          if (l.price < 0 || l.price >= price_levels) {
            throw ConfigError("point law price must lie on the grid");
          }
        }
      },
      law);
}

}  // namespace

void validate(const BidRecord& record, int price_levels) {
  if (record.market_price.has_value() == record.lower_bound.has_value()) {
    throw ConfigError(
        "record must carry exactly one of market_price and lower_bound");
  }
  const auto on_grid = [&](int v) { return v >= 0 && v < price_levels; };
  if (record.market_price && !on_grid(*record.market_price)) {
    throw ConfigError("market_price outside the price grid");
  }
  if (record.lower_bound && !on_grid(*record.lower_bound)) {
    throw ConfigError("lower_bound outside the price grid");
  }
  if (record.logged_bid < 0) throw ConfigError("logged_bid must be >= 0");
  if (!(record.pctr >= 0.0 && record.pctr <= 1.0)) {
    throw ConfigError("pctr must lie in [0, 1]");
  }
}

std::size_t CampaignDataset::num_censored() const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(),
      [](const BidRecord& r) { return r.censored(); }));
}

double CampaignDataset::mean_pctr() const {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) sum += r.pctr;
  return sum / static_cast<double>(records.size());
}

void validate(const CampaignDataset& dataset) {
  if (dataset.price_levels < 1) throw ConfigError("price_levels must be >= 1");
  for (const auto& r : dataset.records) validate(r, dataset.price_levels);
}

CampaignDataset observed_only(const CampaignDataset& dataset) {
  CampaignDataset out;
  out.price_levels = dataset.price_levels;
  for (const auto& r : dataset.records) {
    if (!r.censored()) out.records.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string LogSchema::feature_name(std::size_t i) const {
  if (i < feature_names.size()) return feature_names[i];
  return "c" + std::to_string(features.at(i));
}

LogSchema parse_schema_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("schema must be a JSON object");
  LogSchema schema;
  const auto required = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
      throw ConfigError(std::string("schema is missing required column '") +
                        key + "'");
    }
    return doc[key].get<int>();
  };
  const auto optional_col = [&](const char* key) -> std::optional<int> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_number_integer()) {
      throw ConfigError(std::string("schema column '") + key +
                        "' must be an integer");
    }
    return doc[key].get<int>();
  };
  try {
    schema.bid = required("bid");
    schema.pay = required("pay");
    schema.click = required("click");
    if (doc.contains("features")) {
      schema.features = doc["features"].get<std::vector<int>>();
    }
    if (doc.contains("feature_names")) {
      schema.feature_names =
          doc["feature_names"].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad schema: ") + e.what());
  }
  schema.timestamp = optional_col("timestamp");
  schema.pctr = optional_col("pctr");
  schema.lower_bound = optional_col("lower_bound");
  schema.campaign = optional_col("campaign");
  schema.price_levels = optional_col("price_levels");

  std::vector<int> cols = {schema.bid, schema.pay, schema.click};
  cols.insert(cols.end(), schema.features.begin(), schema.features.end());
  for (const auto& c : {schema.timestamp, schema.pctr, schema.lower_bound,
                        schema.campaign}) {
    if (c) cols.push_back(*c);
  }
  for (int c : cols) {
    if (c < 0) throw ConfigError("schema column indices must be >= 0");
  }
  if (!schema.feature_names.empty() &&
      schema.feature_names.size() != schema.features.size()) {
    throw ConfigError("feature_names must match features in length");
  }
  if (schema.price_levels && *schema.price_levels < 1) {
    throw ConfigError("schema price_levels must be >= 1");
  }
  return schema;
}

std::string schema_to_json(const LogSchema& schema) {
  json doc;
  doc["bid"] = schema.bid;
  doc["pay"] = schema.pay;
  doc["click"] = schema.click;
  doc["features"] = schema.features;
  if (!schema.feature_names.empty()) doc["feature_names"] = schema.feature_names;
  if (schema.timestamp) doc["timestamp"] = *schema.timestamp;
  if (schema.pctr) doc["pctr"] = *schema.pctr;
  if (schema.lower_bound) doc["lower_bound"] = *schema.lower_bound;
  if (schema.campaign) doc["campaign"] = *schema.campaign;
  if (schema.price_levels) doc["price_levels"] = *schema.price_levels;
  return doc.dump(2);
}

ParseResult parse_log(std::istream& in, const LogSchema& schema,
                      const ParseOptions& options) {
  if (schema.bid < 0 || schema.pay < 0 || schema.click < 0) {
    throw ConfigError("schema must name bid, pay and click columns");
  }
  if (options.price_levels < 1) throw ConfigError("price_levels must be >= 1");

  ParseResult result;
  result.dataset.price_levels = options.price_levels;
  const int top = options.price_levels - 1;

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto cells = split_tabs(line);
    std::size_t clamped_here = 0;
    const auto cell = [&](int col, const char* what) -> std::string_view {
      if (static_cast<std::size_t>(col) >= cells.size()) {
        throw ParseError(line_number, std::string("missing ") + what +
                                          " column " + std::to_string(col));
      }
      return cells[static_cast<std::size_t>(col)];
    };
    const auto price = [&](int col, const char* what) {
      const auto value = parse_number<long long>(cell(col, what));
      if (!value || *value < 0) {
        throw ParseError(line_number, std::string("bad ") + what + " '" +
                                          std::string(cell(col, what)) + "'");
      }
      if (*value > top) {
        ++clamped_here;
        return top;
      }
      return static_cast<int>(*value);
    };

    try {
      BidRecord record;
      record.logged_bid = price(schema.bid, "bid");
      const auto pay_cell = cell(schema.pay, "pay");
      if (is_missing(pay_cell)) {
        if (!schema.lower_bound) {
          throw ParseError(line_number,
                           "empty pay cell and no lower_bound column");
        }
        record.lower_bound = price(*schema.lower_bound, "lower_bound");
      } else {
        record.market_price = price(schema.pay, "pay");
      }
      const auto click = parse_number<long long>(cell(schema.click, "click"));
      if (!click || *click < 0) {
        throw ParseError(line_number, "bad click '" +
                                          std::string(cell(schema.click, "click")) +
                                          "'");
      }
      record.click = *click > 0;
      if (schema.pctr) {
        const auto p = parse_number<double>(cell(*schema.pctr, "pctr"));
        if (!p || !(*p >= 0.0 && *p <= 1.0)) {
          throw ParseError(line_number, "bad pctr '" +
                                            std::string(cell(*schema.pctr, "pctr")) +
                                            "'");
        }
        record.pctr = *p;
      }
      if (schema.timestamp) {
        const auto ts =
            parse_number<std::int64_t>(cell(*schema.timestamp, "timestamp"));
        if (!ts) throw ParseError(line_number, "bad timestamp");
        record.timestamp = *ts;
      } else {
        record.timestamp =
            static_cast<std::int64_t>(result.dataset.records.size());
      }
      if (schema.campaign) {
        record.campaign_id = std::string(cell(*schema.campaign, "campaign"));
      }
      record.features.reserve(schema.features.size());
      for (std::size_t i = 0; i < schema.features.size(); ++i) {
        record.features.push_back(schema.feature_name(i) + ":" +
                                  std::string(cell(schema.features[i], "feature")));
      }
      result.clamped += clamped_here;
      result.dataset.records.push_back(std::move(record));
    } catch (const ParseError&) {
      if (options.strict) throw;
      ++result.skipped;
    }
  }

  if (!schema.pctr) {
    auto& records = result.dataset.records;
    const auto clicks = std::count_if(records.begin(), records.end(),
                                      [](const BidRecord& r) { return r.click; });
    const double ctr = clicks > 0 ? static_cast<double>(clicks) /
                                        static_cast<double>(records.size())
                                  : options.default_pctr;
    for (auto& r : records) r.pctr = ctr;
  }
  return result;
}

LogSchema canonical_schema(std::size_t num_features,
                           std::vector<std::string> feature_names) {
  LogSchema schema;
  schema.campaign = 0;
  schema.timestamp = 1;
  schema.bid = 2;
  schema.pay = 3;
  schema.lower_bound = 4;
  schema.click = 5;
  schema.pctr = 6;
  for (std::size_t i = 0; i < num_features; ++i) {
    schema.features.push_back(static_cast<int>(7 + i));
  }
  if (feature_names.empty()) {
    for (std::size_t i = 0; i < num_features; ++i) {
      feature_names.push_back("f" + std::to_string(i));
    }
  }
  schema.feature_names = std::move(feature_names);
  return schema;
}

void write_log(std::ostream& out, const CampaignDataset& dataset,
               const LogSchema& schema) {
  std::vector<int> cols = {schema.bid, schema.pay, schema.click};
  cols.insert(cols.end(), schema.features.begin(), schema.features.end());
  for (const auto& c : {schema.timestamp, schema.pctr, schema.lower_bound,
                        schema.campaign}) {
    if (c) cols.push_back(*c);
  }
  const int width = *std::max_element(cols.begin(), cols.end()) + 1;
  if (!schema.lower_bound && dataset.num_censored() > 0) {
    throw ConfigError("schema has no lower_bound column for censored records");
  }

  std::vector<std::string> row(static_cast<std::size_t>(width));
  for (const auto& r : dataset.records) {
    std::fill(row.begin(), row.end(), std::string());
    const auto put = [&](std::optional<int> col, std::string value) {
      if (col) row[static_cast<std::size_t>(*col)] = std::move(value);
    };
    put(schema.campaign, r.campaign_id);
    put(schema.timestamp, std::to_string(r.timestamp));
    put(schema.bid, std::to_string(r.logged_bid));
    put(schema.pay, r.market_price ? std::to_string(*r.market_price) : "-");
    put(schema.lower_bound,
        r.lower_bound ? std::to_string(*r.lower_bound) : "-");
    put(schema.click, r.click ? "1" : "0");
    put(schema.pctr, format_double(r.pctr));
    if (r.features.size() != schema.features.size()) {
      throw ConfigError("record feature count does not match the schema");
    }
    for (std::size_t i = 0; i < r.features.size(); ++i) {
      const std::string prefix = schema.feature_name(i) + ":";
      const std::string& token = r.features[i];
      if (token.compare(0, prefix.size(), prefix) != 0) {
        throw ConfigError("feature token '" + token +
                          "' does not match schema field '" +
                          schema.feature_name(i) + "'");
      }
      row[static_cast<std::size_t>(schema.features[i])] =
          token.substr(prefix.size());
    }
    for (int c = 0; c < width; ++c) {
      if (c > 0) out << '\t';
      out << row[static_cast<std::size_t>(c)];
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

void validate(const SyntheticConfig& config) {
  if (config.price_levels < 1) throw ConfigError("price_levels must be >= 1");
  validate_law(config.price_law, config.price_levels);
  if (config.bid_law) validate_law(*config.bid_law, config.price_levels);
  if (!(config.mean_ctr >= 0.0 && config.mean_ctr <= 1.0)) {
    throw ConfigError("mean_ctr must lie in [0, 1]");
  }
  if (!(config.pctr_spread >= 0.0 && config.pctr_spread <= 1.0)) {
    throw ConfigError("pctr_spread must lie in [0, 1]");
  }
  for (int v : config.feature_vocab) {
    if (v < 1) throw ConfigError("feature vocabulary sizes must be >= 1");
  }
}

CampaignDataset generate_synthetic(const SyntheticConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PriceLaw& bid_law = config.bid_law ? *config.bid_law : config.price_law;

  CampaignDataset dataset;
  dataset.price_levels = config.price_levels;
  dataset.records.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    BidRecord r;
    r.campaign_id = config.campaign_id;
    r.timestamp = static_cast<std::int64_t>(i);
    r.market_price = draw_price(config.price_law, rng, config.price_levels);
    r.logged_bid = draw_price(bid_law, rng, config.price_levels);
    const double spread = config.pctr_spread * (2.0 * unit(rng) - 1.0);
    r.pctr = std::clamp(config.mean_ctr * (1.0 + spread), 0.0, 1.0);
    r.click = unit(rng) < r.pctr;
    r.features.reserve(config.feature_vocab.size());
    for (std::size_t f = 0; f < config.feature_vocab.size(); ++f) {
      std::uniform_int_distribution<int> pick(0, config.feature_vocab[f] - 1);
      r.features.push_back("f" + std::to_string(f) + ":" +
                           std::to_string(pick(rng)));
    }
    dataset.records.push_back(std::move(r));
  }
  return dataset;
}

CampaignDataset apply_censoring(const CampaignDataset& dataset,
                                std::span<const int> policy_bid) {
  if (policy_bid.size() != dataset.size()) {
    throw ConfigError("policy_bid must provide one bid per record");
  }
  CampaignDataset out = dataset;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    BidRecord& r = out.records[i];
    if (r.censored()) continue;
    const int bid = policy_bid[i];
    if (bid < 0) throw ConfigError("policy bids must be >= 0");
    if (bid > *r.market_price) continue;
    r.market_price.reset();
    // A lower bound at or above the grid top still means "price >= top".
    r.lower_bound = std::min(bid, dataset.price_levels - 1);
  }
  return out;
}

CampaignDataset censor_at_logged_bids(const CampaignDataset& dataset) {
  std::vector<int> bids;
  bids.reserve(dataset.size());
  for (const auto& r : dataset.records) bids.push_back(r.logged_bid);
  return apply_censoring(dataset, bids);
}

std::pair<CampaignDataset, CampaignDataset> train_test_split(
    const CampaignDataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("split fraction must lie in (0, 1)");
  }
  if (dataset.empty()) throw DataError("cannot split an empty dataset");

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto first_size = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(dataset.size())));

  std::vector<std::size_t> first(order.begin(), order.begin() + first_size);
  std::vector<std::size_t> second(order.begin() + first_size, order.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());

  const auto gather = [&](const std::vector<std::size_t>& idx) {
    CampaignDataset part;
    part.price_levels = dataset.price_levels;
    part.records.reserve(idx.size());
    for (std::size_t i : idx) part.records.push_back(dataset.records[i]);
    return part;
  };
  return {gather(first), gather(second)};
}

}  // namespace bidcraft::bidlog
