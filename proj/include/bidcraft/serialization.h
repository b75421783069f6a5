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

// On-disk formats: model and value-table JSON, report CSV/JSON.

#ifndef BIDCRAFT_SERIALIZATION_H_
#define BIDCRAFT_SERIALIZATION_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bidcraft/bidopt.h"
#include "bidcraft/forecaster.h"
#include "bidcraft/market_model.h"
#include "bidcraft/metrics.h"
#include "bidcraft/simulator.h"

namespace bidcraft::io {

// {"kind": "km" | "gamma" | "uniform" | "forecaster", "price_levels": L, ...}
std::string model_to_json(const landscape::MarketModel& model);
landscape::MarketModel model_from_json(const std::string& text);

// {"budget", "horizon", "stored_budget", "config": {...},
//  "values": [...], "policy": [...]}; values and policy are row-major over
// (b, t) with b in 0..stored_budget and t in 0..horizon.
std::string value_table_to_json(const bidopt::ValueTable& table);
bidopt::ValueTable value_table_from_json(const std::string& text);

// epoch,L,L_total
std::string loss_history_csv(std::span<const landscape::EpochLoss> history);

// Algorithm,AUC,Log Loss,ANLP
std::string pdf_report_csv(std::span<const metrics::PdfReportRow> rows);

struct CampaignRow {
  std::string campaign;
  std::string algorithm;
  sim::CampaignReport report;
};

// Campaign,Algorithm,Objective,Auction,Impression,Clicks,Cost,Win Rate,CPM,
// E-CPC. Win rate as a percentage, money columns to 2 decimals, "NA" for a
// zero denominator.
std::string campaign_report_csv(std::span<const CampaignRow> rows);
std::string campaign_report_json(std::span<const CampaignRow> rows);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace bidcraft::io

#endif  // BIDCRAFT_SERIALIZATION_H_
