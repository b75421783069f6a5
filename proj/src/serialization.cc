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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "bidcraft/error.h"
#include "json.hpp"

namespace bidcraft::io {
namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* name) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ConfigError(std::string("model block ") + name +
                      " has inconsistent dimensions");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
    }
  }
  return m;
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fixed6(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string model_to_json(const landscape::MarketModel& model) {
  using landscape::ModelKind;
  json doc;
  doc["kind"] = landscape::to_string(model.kind());
  switch (model.kind()) {
    case ModelKind::kUnfitted:
      throw ConfigError("cannot serialize an unfitted model");
    case ModelKind::kUniform:
      doc["price_levels"] = model.price_levels();
      break;
    case ModelKind::kKm: {
      const auto& curve = model.km()->curve;
      doc["price_levels"] = curve.price_levels;
      json points = json::array();
      for (const auto& p : curve.points) points.push_back({p.price, p.survival});
      doc["curve"] = std::move(points);
      break;
    }
    case ModelKind::kGamma:
      doc["price_levels"] = model.price_levels();
      doc["shape"] = model.gamma()->params.shape;
      doc["scale"] = model.gamma()->params.scale;
      break;
    case ModelKind::kForecaster: {
      const auto& p = model.forecaster()->params;
      doc["price_levels"] = p.price_levels;
      doc["embed_dim"] = p.embed_dim;
      doc["hidden_dim"] = p.hidden_dim;
      doc["window"] = p.window;
      doc["vocab"] = p.vocab.tokens();
      json blocks;
      blocks["embedding"] = matrix_to_json(p.embedding);
      blocks["w_update"] = matrix_to_json(p.w_update);
      blocks["b_update"] = matrix_to_json(p.b_update);
      blocks["w_reset"] = matrix_to_json(p.w_reset);
      blocks["b_reset"] = matrix_to_json(p.b_reset);
      blocks["w_candidate"] = matrix_to_json(p.w_candidate);
      blocks["b_candidate"] = matrix_to_json(p.b_candidate);
      blocks["w_out"] = matrix_to_json(p.w_out);
      blocks["b_out"] = matrix_to_json(p.b_out);
      doc["blocks"] = std::move(blocks);
      break;
    }
  }
  return doc.dump(1);
}

landscape::MarketModel model_from_json(const std::string& text) {
  using namespace landscape;
  const json doc = parse_json(text, "model file");
  try {
    const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const int levels = doc.at("price_levels").get<int>();
    switch (kind) {
      case ModelKind::kUniform:
        return MarketModel::uniform(levels);
      case ModelKind::kKm: {
        SurvivalCurve curve;
        curve.price_levels = levels;
        for (const auto& p : doc.at("curve")) {
          curve.points.push_back({p.at(0).get<int>(), p.at(1).get<double>()});
        }
        PriceDistribution dist = survival_to_distribution(curve);
        return MarketModel(KmModel{std::move(curve), std::move(dist)});
      }
      case ModelKind::kGamma: {
        const GammaParams params{doc.at("shape").get<double>(),
                                 doc.at("scale").get<double>()};
        return MarketModel(GammaModel{params, gamma_discretize(params, levels)});
      }
      case ModelKind::kForecaster: {
        ForecasterParams p;
        p.price_levels = levels;
        p.embed_dim = doc.at("embed_dim").get<int>();
        p.hidden_dim = doc.at("hidden_dim").get<int>();
        p.window = doc.at("window").get<int>();
        p.vocab = Vocabulary(doc.at("vocab").get<std::vector<std::string>>());
        const json& b = doc.at("blocks");
        p.embedding = matrix_from_json(b.at("embedding"), "embedding");
        p.w_update = matrix_from_json(b.at("w_update"), "w_update");
        p.b_update = matrix_from_json(b.at("b_update"), "b_update");
        p.w_reset = matrix_from_json(b.at("w_reset"), "w_reset");
        p.b_reset = matrix_from_json(b.at("b_reset"), "b_reset");
        p.w_candidate = matrix_from_json(b.at("w_candidate"), "w_candidate");
        p.b_candidate = matrix_from_json(b.at("b_candidate"), "b_candidate");
        p.w_out = matrix_from_json(b.at("w_out"), "w_out");
        p.b_out = matrix_from_json(b.at("b_out"), "b_out");
        validate(p);
        return MarketModel(ForecasterModel{std::move(p)});
      }
      case ModelKind::kUnfitted:
        break;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  }
  throw ConfigError("malformed model file: unfitted kind");
}

std::string value_table_to_json(const bidopt::ValueTable& table) {
  const auto& c = table.config();
  json config = {{"objective", bidopt::to_string(c.objective)},
                 {"payment", bidopt::to_string(c.payment)},
                 {"click_value", c.click_value},
                 {"discount", c.discount},
                 {"truncation", c.truncation ? json(*c.truncation) : json(nullptr)}};
  std::vector<double> values;
  std::vector<int> policy;
  for (int b = 0; b <= table.stored_budget(); ++b) {
    for (int t = 0; t <= table.horizon(); ++t) {
      values.push_back(table.value(b, t));
      policy.push_back(table.policy(b, t));
    }
  }
  json doc = {{"budget", table.budget()},
              {"horizon", table.horizon()},
              {"stored_budget", table.stored_budget()},
              {"config", std::move(config)},
              {"values", std::move(values)},
              {"policy", std::move(policy)}};
  return doc.dump();
}

bidopt::ValueTable value_table_from_json(const std::string& text) {
  const json doc = parse_json(text, "value table");
  try {
    bidopt::SolverConfig c;
    c.budget = doc.at("budget").get<int>();
    c.horizon = doc.at("horizon").get<int>();
    const json& cj = doc.at("config");
    c.objective = bidopt::objective_from_string(cj.at("objective").get<std::string>());
    c.payment = bidopt::payment_from_string(cj.at("payment").get<std::string>());
    c.click_value = cj.at("click_value").get<double>();
    c.discount = cj.at("discount").get<double>();
    if (!cj.at("truncation").is_null()) c.truncation = cj.at("truncation").get<int>();
    bidopt::validate(c);
    const int stored = doc.at("stored_budget").get<int>();
    bidopt::ValueTable table(c, stored);
    const auto values = doc.at("values").get<std::vector<double>>();
    const auto policy = doc.at("policy").get<std::vector<int>>();
    const auto width = static_cast<std::size_t>(c.horizon + 1);
    if (values.size() != width * static_cast<std::size_t>(stored + 1) ||
        policy.size() != values.size()) {
      throw ConfigError("value table arrays do not match its dimensions");
    }
    for (int t = 0; t <= c.horizon; ++t) {
      auto v = table.mutable_values_at(t);
      auto p = table.mutable_policy_at(t);
      for (int b = 0; b <= stored; ++b) {
        const std::size_t k = static_cast<std::size_t>(b) * width +
                              static_cast<std::size_t>(t);
        v[static_cast<std::size_t>(b)] = values[k];
        p[static_cast<std::size_t>(b)] = policy[k];
      }
    }
    return table;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed value table: ") + e.what());
  }
}

std::string loss_history_csv(std::span<const landscape::EpochLoss> history) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,L,L_total\n";
  for (const auto& h : history) {
    out << h.epoch << ',' << h.loss << ',' << h.total_loss << '\n';
  }
  return out.str();
}

std::string pdf_report_csv(std::span<const metrics::PdfReportRow> rows) {
  std::ostringstream out;
  out << "Algorithm,AUC,Log Loss,ANLP\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << fixed6(r.auc) << ',' << fixed6(r.log_loss) << ','
        << fixed6(r.anlp) << '\n';
  }
  return out.str();
}

std::string campaign_report_csv(std::span<const CampaignRow> rows) {
  std::ostringstream out;
  out << "Campaign,Algorithm,Objective,Auction,Impression,Clicks,Cost,Win "
         "Rate,CPM,E-CPC\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    const auto m = sim::derive_report_metrics(r);
    out << row.campaign << ',' << row.algorithm << ',' << r.objective() << ','
        << r.auctions << ',' << r.impressions << ',' << r.clicks << ',' << r.cost
        << ',' << (m.win_rate ? fixed2(*m.win_rate * 100.0) + "%" : "NA") << ','
        << (m.cpm ? fixed2(*m.cpm) : "NA") << ','
        << (m.ecpc ? fixed2(*m.ecpc) : "NA") << '\n';
  }
  return out.str();
}

std::string campaign_report_json(std::span<const CampaignRow> rows) {
  json doc = json::array();
  for (const auto& row : rows) {
    const auto& r = row.report;
    const auto m = sim::derive_report_metrics(r);
    doc.push_back({{"campaign", row.campaign},
                   {"algorithm", row.algorithm},
                   {"objective", r.objective()},
                   {"auctions", r.auctions},
                   {"impressions", r.impressions},
                   {"clicks", r.clicks},
                   {"cost", r.cost},
                   {"win_rate", optional_number(m.win_rate)},
                   {"cpm", optional_number(m.cpm)},
                   {"ecpc", optional_number(m.ecpc)}});
  }
  return doc.dump(2);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw DataError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot move output into '" + path.string() + "': " +
                    ec.message());
  }
}

}  // namespace bidcraft::io
