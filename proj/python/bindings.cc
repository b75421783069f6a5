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

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bidcraft/bidlog.h"
#include "bidcraft/bidopt.h"
#include "bidcraft/error.h"
#include "bidcraft/market_model.h"
#include "bidcraft/metrics.h"
#include "bidcraft/serialization.h"
#include "bidcraft/simulator.h"

namespace py = pybind11;
using namespace bidcraft;

namespace {

py::array_t<double> to_array(std::span<const double> values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

bidlog::CampaignDataset read_log(const std::filesystem::path& path,
                                 std::optional<std::filesystem::path> schema_path,
                                 std::optional<int> price_levels, bool strict) {
  const auto sp =
      schema_path ? *schema_path : std::filesystem::path(path.string() + ".schema.json");
  const auto schema = bidlog::parse_schema_json(io::read_file(sp));
  bidlog::ParseOptions opts;
  opts.price_levels = price_levels         ? *price_levels
                      : schema.price_levels ? *schema.price_levels
                                            : bidlog::kDefaultPriceLevels;
  opts.strict = strict;
  std::ifstream in(path);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  return bidlog::parse_log(in, schema, opts).dataset;
}

void write_log(const bidlog::CampaignDataset& ds, const std::filesystem::path& path,
               std::size_t num_features) {
  auto schema = bidlog::canonical_schema(num_features);
  schema.price_levels = ds.price_levels;
  std::ostringstream out;
  bidlog::write_log(out, ds, schema);
  io::write_file_atomic(path, out.str());
  io::write_file_atomic(path.string() + ".schema.json", bidlog::schema_to_json(schema));
}

bidlog::PriceLaw make_law(const std::string& law, double shape, double scale, int lo,
                          int hi, int price) {
  if (law == "gamma") return bidlog::GammaLaw{shape, scale};
  if (law == "uniform") return bidlog::UniformLaw{lo, hi};
  if (law == "point") return bidlog::PointLaw{price};
  throw ConfigError("unknown price law '" + law + "'");
}

// Opaque holder so bidders cross into Python without a std::function caster.
struct BidderHandle {
  sim::Bidder fn;
};

BidderHandle python_bidder(py::function fn) {
  return {[fn](const sim::BidContext& ctx) {
    return fn(ctx.remaining_budget, ctx.remaining_auctions, ctx.record.pctr).cast<int>();
  }};
}

py::dict report_dict(const sim::CampaignReport& r) {
  const auto m = sim::derive_report_metrics(r);
  py::dict d;
  d["auctions"] = r.auctions;
  d["impressions"] = r.impressions;
  d["clicks"] = r.clicks;
  d["cost"] = r.cost;
  d["win_rate"] = m.win_rate;
  d["cpm"] = m.cpm;
  d["ecpc"] = m.ecpc;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bid landscape forecasting and budget-constrained bidding";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  auto data_error = py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", data_error.ptr());
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.attr("DEFAULT_PRICE_LEVELS") = bidlog::kDefaultPriceLevels;

  // --- price distributions ---
  py::class_<PriceDistribution>(m, "PriceDistribution")
      .def_static("from_weights", &PriceDistribution::from_weights, py::arg("weights"))
      .def_static("uniform", &PriceDistribution::uniform, py::arg("levels"))
      .def_static("point_mass", &PriceDistribution::point_mass, py::arg("levels"),
                  py::arg("price"))
      .def_property_readonly("levels", &PriceDistribution::levels)
      .def_property_readonly("pmf",
                             [](const PriceDistribution& d) { return to_array(d.pmf()); })
      .def("mass_below", &PriceDistribution::mass_below, py::arg("x"))
      .def("mass_at_or_above", &PriceDistribution::mass_at_or_above, py::arg("z"))
      .def("mean", &PriceDistribution::mean)
      .def("entropy", &PriceDistribution::entropy);

  // --- logs ---
  py::class_<bidlog::BidRecord>(m, "BidRecord")
      .def(py::init<>())
      .def_readwrite("campaign_id", &bidlog::BidRecord::campaign_id)
      .def_readwrite("timestamp", &bidlog::BidRecord::timestamp)
      .def_readwrite("features", &bidlog::BidRecord::features)
      .def_readwrite("logged_bid", &bidlog::BidRecord::logged_bid)
      .def_readwrite("market_price", &bidlog::BidRecord::market_price)
      .def_readwrite("lower_bound", &bidlog::BidRecord::lower_bound)
      .def_readwrite("click", &bidlog::BidRecord::click)
      .def_readwrite("pctr", &bidlog::BidRecord::pctr)
      .def_property_readonly("censored", &bidlog::BidRecord::censored);

  py::class_<bidlog::CampaignDataset>(m, "CampaignDataset")
      .def(py::init<>())
      .def_readwrite("records", &bidlog::CampaignDataset::records)
      .def_readwrite("price_levels", &bidlog::CampaignDataset::price_levels)
      .def("__len__", &bidlog::CampaignDataset::size)
      .def("num_censored", &bidlog::CampaignDataset::num_censored)
      .def("mean_pctr", &bidlog::CampaignDataset::mean_pctr)
      .def("market_prices", [](const bidlog::CampaignDataset& ds) {
        std::vector<std::optional<int>> out;
        for (const auto& r : ds.records) out.push_back(r.market_price);
        return out;
      });

  m.def(
      "generate_synthetic",
      [](std::size_t n, const std::string& law, double shape, double scale, int lo,
         int hi, int price, double mean_ctr, double pctr_spread,
         std::vector<int> features, std::uint64_t seed, int price_levels,
         std::string campaign) {
        bidlog::SyntheticConfig c;
        c.n = n;
        c.price_law = make_law(law, shape, scale, lo, hi, price);
        c.mean_ctr = mean_ctr;
        c.pctr_spread = pctr_spread;
        c.feature_vocab = std::move(features);
        c.seed = seed;
        c.price_levels = price_levels;
        c.campaign_id = std::move(campaign);
        return bidlog::generate_synthetic(c);
      },
      py::arg("n"), py::arg("law") = "gamma", py::arg("shape") = 5.0,
      py::arg("scale") = 10.0, py::arg("lo") = 0, py::arg("hi") = 0, py::arg("price") = 0,
      py::arg("mean_ctr") = 0.001, py::arg("pctr_spread") = 1.0,
      py::arg("features") = std::vector<int>{}, py::arg("seed") = 0,
      py::arg("price_levels") = bidlog::kDefaultPriceLevels,
      py::arg("campaign") = "synthetic");
  m.def("read_log", &read_log, py::arg("path"), py::arg("schema") = py::none(),
        py::arg("price_levels") = py::none(), py::arg("strict") = true);
  m.def("write_log", &write_log, py::arg("dataset"), py::arg("path"),
        py::arg("num_features"));
  m.def("apply_censoring", &bidlog::apply_censoring, py::arg("dataset"),
        py::arg("bids"));
  m.def("censor_at_logged_bids", &bidlog::censor_at_logged_bids, py::arg("dataset"));
  m.def("train_test_split", &bidlog::train_test_split, py::arg("dataset"),
        py::arg("train_fraction"), py::arg("seed"));

  // --- market models ---
  py::class_<landscape::TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &landscape::TrainConfig::learning_rate)
      .def_readwrite("epochs", &landscape::TrainConfig::epochs)
      .def_readwrite("minibatch", &landscape::TrainConfig::minibatch)
      .def_readwrite("lambda1", &landscape::TrainConfig::lambda1)
      .def_readwrite("lambda2", &landscape::TrainConfig::lambda2)
      .def_readwrite("epsilon", &landscape::TrainConfig::epsilon)
      .def_readwrite("omega", &landscape::TrainConfig::omega)
      .def_readwrite("embed_dim", &landscape::TrainConfig::embed_dim)
      .def_readwrite("hidden_dim", &landscape::TrainConfig::hidden_dim)
      .def_readwrite("seed", &landscape::TrainConfig::seed);

  py::class_<landscape::MarketModel>(m, "MarketModel")
      .def_static("fit_km", &landscape::MarketModel::fit_km, py::arg("dataset"))
      .def_static("fit_gamma", &landscape::MarketModel::fit_gamma, py::arg("dataset"))
      .def_static("uniform", &landscape::MarketModel::uniform,
                  py::arg("price_levels") = bidlog::kDefaultPriceLevels)
      .def_static(
          "fit_forecaster",
          [](const bidlog::CampaignDataset& ds, const landscape::TrainConfig& cfg) {
            std::vector<landscape::EpochLoss> history;
            landscape::MarketModel model;
            {
              py::gil_scoped_release release;
              model = landscape::MarketModel::fit_forecaster(ds, cfg, &history);
            }
            py::list losses;
            for (const auto& e : history) losses.append(py::make_tuple(e.loss, e.total_loss));
            return py::make_tuple(model, losses);
          },
          py::arg("dataset"), py::arg("config") = landscape::TrainConfig{},
          "Returns (model, [(L, L_total) per epoch]).")
      .def_static("from_json", &io::model_from_json, py::arg("text"))
      .def("to_json", [](const landscape::MarketModel& mm) { return io::model_to_json(mm); })
      .def_property_readonly("kind", [](const landscape::MarketModel& mm) {
        return landscape::to_string(mm.kind());
      })
      .def_property_readonly("price_levels", &landscape::MarketModel::price_levels)
      .def_property_readonly("conditional", &landscape::MarketModel::conditional)
      .def("unconditional", &landscape::MarketModel::unconditional)
      .def(
          "predict",
          [](const landscape::MarketModel& mm, const bidlog::CampaignDataset& ds) {
            const auto dists = landscape::predict_all(mm, ds.records);
            const auto L = static_cast<py::ssize_t>(mm.price_levels());
            py::array_t<double> out({static_cast<py::ssize_t>(dists.size()), L});
            auto view = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < dists.size(); ++i) {
              const auto pmf = dists[i].pmf();
              for (py::ssize_t z = 0; z < L; ++z) {
                view(static_cast<py::ssize_t>(i), z) = pmf[static_cast<std::size_t>(z)];
              }
            }
            return out;
          },
          py::arg("dataset"), "One pmf row per record, sequence order.");

  // --- metrics ---
  m.def(
      "auc",
      [](std::vector<double> scores, std::vector<bool> labels) {
        return metrics::auc(scores, labels);
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "log_loss",
      [](std::vector<double> probs, std::vector<bool> labels, double eps) {
        return metrics::log_loss(probs, labels, eps);
      },
      py::arg("probs"), py::arg("labels"), py::arg("epsilon") = metrics::kDefaultEpsilon);
  m.def(
      "anlp",
      [](const landscape::MarketModel& mm, const bidlog::CampaignDataset& ds,
         double eps) { return metrics::anlp(mm, ds, eps); },
      py::arg("model"), py::arg("dataset"), py::arg("epsilon") = metrics::kDefaultEpsilon);
  m.def(
      "evaluate_model",
      [](const std::string& name, const landscape::MarketModel& mm,
         const bidlog::CampaignDataset& ds, double eps) {
        const auto row = metrics::evaluate_model(name, mm, ds, eps);
        py::dict d;
        d["algorithm"] = row.algorithm;
        d["auc"] = row.auc;
        d["log_loss"] = row.log_loss;
        d["anlp"] = row.anlp;
        return d;
      },
      py::arg("name"), py::arg("model"), py::arg("dataset"),
      py::arg("epsilon") = metrics::kDefaultEpsilon);

  // --- bid optimization ---
  py::class_<bidopt::ValueTable, std::shared_ptr<bidopt::ValueTable>>(m, "ValueTable")
      .def_property_readonly("budget", &bidopt::ValueTable::budget)
      .def_property_readonly("horizon", &bidopt::ValueTable::horizon)
      .def_property_readonly("stored_budget", &bidopt::ValueTable::stored_budget)
      .def_property_readonly("truncated", &bidopt::ValueTable::truncated)
      .def("value", &bidopt::ValueTable::value, py::arg("b"), py::arg("t"))
      .def("policy", &bidopt::ValueTable::policy, py::arg("b"), py::arg("t"))
      .def("to_json",
           [](const bidopt::ValueTable& t) { return io::value_table_to_json(t); })
      .def_static("from_json", [](const std::string& text) {
        return std::make_shared<bidopt::ValueTable>(io::value_table_from_json(text));
      });

  m.def(
      "solve",
      [](const PriceDistribution& dist, double ctr, int budget, int horizon,
         const std::string& objective, const std::string& payment,
         std::optional<int> bmax, double discount, double click_value) {
        bidopt::SolverConfig c;
        c.budget = budget;
        c.horizon = horizon;
        c.objective = bidopt::objective_from_string(objective);
        c.payment = bidopt::payment_from_string(payment);
        c.truncation = bmax;
        c.discount = discount;
        c.click_value = click_value;
        py::gil_scoped_release release;
        return std::make_shared<bidopt::ValueTable>(bidopt::solve({dist, ctr}, c));
      },
      py::arg("distribution"), py::arg("ctr"), py::arg("budget"), py::arg("horizon"),
      py::arg("objective") = "clicks", py::arg("payment") = "second_price",
      py::arg("bmax") = py::none(), py::arg("discount") = 1.0,
      py::arg("click_value") = 0.0);
  m.def("adjust_bid", &bidopt::adjust_bid, py::arg("x"), py::arg("remaining_budget"),
        py::arg("cap"));
  m.def("mcpc_bid", &bidopt::mcpc_bid, py::arg("pctr"), py::arg("max_cpc"), py::arg("cap"));
  m.def("linear_bid", &bidopt::linear_bid, py::arg("pctr"), py::arg("base_bid"),
        py::arg("avg_ctr"), py::arg("cap"));

  // --- simulation ---
  py::class_<BidderHandle>(m, "Bidder");
  m.def(
      "constant_bidder", [](int bid) { return BidderHandle{sim::constant_bidder(bid)}; },
      py::arg("bid"));
  m.def(
      "mcpc_bidder",
      [](double max_cpc, int cap) { return BidderHandle{sim::mcpc_bidder(max_cpc, cap)}; },
      py::arg("max_cpc"), py::arg("cap"));
  m.def(
      "linear_bidder",
      [](double base_bid, double avg_ctr, int cap) {
        return BidderHandle{sim::linear_bidder(base_bid, avg_ctr, cap)};
      },
      py::arg("base_bid"), py::arg("avg_ctr"), py::arg("cap"));
  m.def(
      "dp_bidder",
      [](std::shared_ptr<bidopt::ValueTable> table, const PriceDistribution& dist,
         double ctr) { return BidderHandle{sim::dp_bidder(std::move(table), {dist, ctr})}; },
      py::arg("table"), py::arg("distribution"), py::arg("ctr"));
  m.def("python_bidder", &python_bidder, py::arg("fn"),
        "Wraps fn(remaining_budget, remaining_auctions, pctr) -> bid.");
  m.def("historical_cpc", &sim::historical_cpc, py::arg("train"));

  m.def(
      "episode_budget",
      [](const bidlog::CampaignDataset& train, int episode_length, double c0) {
        sim::EpisodeConfig ec;
        ec.episode_length = episode_length;
        ec.budget_fraction = c0;
        return sim::compute_episode_budget(train, ec);
      },
      py::arg("train"), py::arg("episode_length") = 1000, py::arg("c0") = 1.0 / 16);
  m.def(
      "tune_linear_base_bid",
      [](const bidlog::CampaignDataset& train, double avg_ctr, int budget,
         int episode_length, const std::string& payment, int cap) {
        sim::EpisodeConfig ec;
        ec.episode_length = episode_length;
        ec.payment = bidopt::payment_from_string(payment);
        return sim::tune_linear_base_bid(train, avg_ctr, ec, budget, cap);
      },
      py::arg("train"), py::arg("avg_ctr"), py::arg("budget"),
      py::arg("episode_length") = 1000, py::arg("payment") = "second_price",
      py::arg("cap") = bidlog::kDefaultPriceLevels - 1);
  m.def(
      "run_campaign",
      [](const bidlog::CampaignDataset& ds, const BidderHandle& bidder, int budget,
         int episode_length, const std::string& payment) {
        sim::EpisodeConfig ec;
        ec.episode_length = episode_length;
        ec.payment = bidopt::payment_from_string(payment);
        return report_dict(sim::run_campaign(ds, bidder.fn, ec, budget));
      },
      py::arg("dataset"), py::arg("bidder"), py::arg("budget"),
      py::arg("episode_length") = 1000, py::arg("payment") = "second_price");
}
