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

#include "bidcraft/serialization.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "bidcraft/error.h"

namespace bidcraft::io {
namespace {

namespace fs = std::filesystem;
using landscape::MarketModel;

bidlog::CampaignDataset gamma_data(std::size_t n) {
  bidlog::SyntheticConfig c;
  c.n = n;
  c.feature_vocab = {3, 2};
  c.seed = 8;
  return bidlog::generate_synthetic(c);
}

TEST(ModelJson, RoundTripsEveryKind) {
  const auto ds = gamma_data(300);
  std::vector<MarketModel> models = {MarketModel::uniform(301),
                                     MarketModel::fit_km(ds),
                                     MarketModel::fit_gamma(ds)};
  models.emplace_back(landscape::ForecasterModel{landscape::init_forecaster(
      landscape::Vocabulary::build(ds), 3, 4, 301, 2)});
  for (const auto& m : models) {
    const std::string text = model_to_json(m);
    const MarketModel back = model_from_json(text);
    EXPECT_EQ(back.kind(), m.kind());
    EXPECT_EQ(back.price_levels(), 301);
    EXPECT_EQ(model_to_json(back), text);
    const auto a = landscape::predict_all(m, ds.records);
    const auto b = landscape::predict_all(back, ds.records);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]);
  }
}

TEST(ModelJson, MalformedRejected) {
  EXPECT_THROW(model_from_json("{"), ConfigError);
  EXPECT_THROW(model_from_json(R"({"kind": "gamma", "price_levels": 10})"),
               ConfigError);
  EXPECT_THROW(model_from_json(R"({"kind": "lstm", "price_levels": 10})"),
               ConfigError);
  EXPECT_THROW(model_to_json(MarketModel{}), ConfigError);
}

TEST(ValueTableJson, RoundTrip) {
  const bidopt::TransitionModel m{PriceDistribution::uniform(5), 0.2};
  bidopt::SolverConfig c;
  c.budget = 9;
  c.horizon = 6;
  c.truncation = 4;
  c.payment = bidopt::Payment::kFirstPrice;
  const auto table = bidopt::solve(m, c);
  EXPECT_EQ(value_table_from_json(value_table_to_json(table)), table);
  c.truncation.reset();
  const auto exact = bidopt::solve(m, c);
  EXPECT_EQ(value_table_from_json(value_table_to_json(exact)), exact);
}

TEST(Csv, LossHistory) {
  const std::vector<landscape::EpochLoss> h = {{0, 0.5, 0.75}, {1, 0.25, 0.5}};
  const std::string csv = loss_history_csv(h);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,L,L_total");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Csv, PdfReport) {
  const std::vector<metrics::PdfReportRow> rows = {
      {"KM", 0.8125, 0.5, 3.25}, {"Uniform", std::nan(""), 0.69314718, 5.7}};
  EXPECT_EQ(pdf_report_csv(rows),
            "Algorithm,AUC,Log Loss,ANLP\n"
            "KM,0.812500,0.500000,3.250000\n"
            "Uniform,NA,0.693147,5.700000\n");
}

TEST(Csv, CampaignReportFormatsReferenceRow) {
  const std::vector<CampaignRow> rows = {
      {"2259", "RLB", {350000, 67731, 18, 2016836}},
      {"2259", "MCPC", {350000, 0, 0, 0}}};
  EXPECT_EQ(campaign_report_csv(rows),
            "Campaign,Algorithm,Objective,Auction,Impression,Clicks,Cost,"
            "Win Rate,CPM,E-CPC\n"
            "2259,RLB,18,350000,67731,18,2016836,19.35%,29.78,112.05\n"
            "2259,MCPC,0,350000,0,0,0,0.00%,NA,NA\n");
  const std::string j = campaign_report_json(rows);
  EXPECT_NE(j.find("2016836"), std::string::npos);
}

TEST(Files, AtomicWriteAndReadBack) {
  const fs::path dir = fs::temp_directory_path() / "bidcraft_io_test";
  fs::create_directories(dir);
  const fs::path file = dir / "out.txt";
  write_file_atomic(file, "hello\n");
  write_file_atomic(file, "second\n");
  EXPECT_EQ(read_file(file), "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  fs::remove_all(dir);
}

TEST(Files, MissingFileNamesPath) {
  try {
    read_file("/nonexistent/bidcraft/input.tsv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/bidcraft/input.tsv"),
              std::string::npos);
  }
}

}  // namespace
}  // namespace bidcraft::io
