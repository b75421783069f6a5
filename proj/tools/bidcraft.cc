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

// bidcraft: generate -> fit -> eval -> solve -> simulate.
//
// Every option can also come from a JSON file passed with --config. Keys are
// the flag names with dashes replaced by underscores; a nested object named
// after the subcommand overrides top-level keys. Flags given on the command
// line win over the file.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bidcraft/bidlog.h"
#include "bidcraft/bidopt.h"
#include "bidcraft/error.h"
#include "bidcraft/market_model.h"
#include "bidcraft/metrics.h"
#include "bidcraft/serialization.h"
#include "bidcraft/simulator.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace bidcraft;

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

// Binds flags to variables and back-fills the ones not given on the command
// line from the config file.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON file with default options");
  }

  template <typename T>
  CLI::Option* add(const std::string& flag, T& target, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + flag, target, help);
    opt->capture_default_str();
    bind(flag, opt, target);
    return opt;
  }

  CLI::Option* flag(const std::string& flag, bool& target, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + flag, target, help);
    bind(flag, opt, target);
    return opt;
  }

  bool given(const std::string& flag) const {
    return app_->get_option("--" + flag)->count() > 0 || from_file_.count(flag) > 0;
  }

  void resolve(const std::string& section) {
    if (config_path_.empty()) return;
    json doc;
    try {
      doc = json::parse(io::read_file(config_path_));
    } catch (const json::exception& e) {
      throw ConfigError("config '" + config_path_ + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    json merged = doc;
    if (doc.contains(section) && doc[section].is_object()) {
      for (const auto& [k, v] : doc[section].items()) merged[k] = v;
    }
    for (auto& b : bindings_) {
      if (b.option->count() > 0 || !merged.contains(b.key)) continue;
      try {
        b.apply(merged[b.key]);
      } catch (const json::exception& e) {
        throw ConfigError("config key '" + b.key + "': " + e.what());
      }
      from_file_.insert(b.flag);
    }
  }

 private:
  struct Binding {
    std::string flag;
    std::string key;
    CLI::Option* option;
    std::function<void(const json&)> apply;
  };

  template <typename T>
  void bind(const std::string& flag, CLI::Option* opt, T& target) {
    std::string key = flag;
    std::replace(key.begin(), key.end(), '-', '_');
    bindings_.push_back(
        {flag, key, opt, [&target](const json& j) { target = j.get<T>(); }});
  }

  CLI::App* app_;
  std::string config_path_;
  std::vector<Binding> bindings_;
  std::set<std::string> from_file_;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("bidcraft");
  logger->set_pattern("bidcraft: %l: %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("BIDCRAFT_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

// --- shared loading -------------------------------------------------------

struct DataOptions {
  std::string path;
  std::string schema;
  int price_levels = 0;  // 0: from the schema, else the default grid
  bool lenient = false;
};

void add_data_options(Settings& s, DataOptions& d, const std::string& flag,
                      const std::string& help) {
  s.add(flag, d.path, help);
  s.add(flag == "data" ? "schema" : flag + "-schema", d.schema,
        "column schema JSON (default: <log>.schema.json)");
}

bidlog::CampaignDataset load_dataset(const DataOptions& d, int price_levels,
                                     bool lenient) {
  if (d.path.empty()) throw ConfigError("no input log given");
  const std::string schema_path = d.schema.empty() ? d.path + ".schema.json" : d.schema;
  if (!fs::exists(d.path)) throw DataError("cannot read '" + d.path + "'");
  if (!fs::exists(schema_path)) {
    throw ConfigError("cannot read schema '" + schema_path + "'; pass --schema");
  }
  const auto schema = bidlog::parse_schema_json(io::read_file(schema_path));
  bidlog::ParseOptions opts;
  opts.price_levels = price_levels > 0          ? price_levels
                      : schema.price_levels ? *schema.price_levels
                                            : bidlog::kDefaultPriceLevels;
  opts.strict = !lenient;
  std::ifstream in(d.path);
  if (!in) throw DataError("cannot read '" + d.path + "'");
  auto result = bidlog::parse_log(in, schema, opts);
  if (result.clamped > 0) {
    spdlog::warn("{}: {} price cells clamped into 0..{}", d.path, result.clamped,
                 opts.price_levels - 1);
  }
  if (result.skipped > 0) {
    spdlog::warn("{}: skipped {} malformed lines", d.path, result.skipped);
  }
  spdlog::info("{}: {} records ({} censored), L = {}", d.path,
               result.dataset.size(), result.dataset.num_censored(),
               opts.price_levels);
  return std::move(result.dataset);
}

landscape::MarketModel load_model(const std::string& path) {
  if (path.empty()) throw ConfigError("no model file given");
  return io::model_from_json(io::read_file(path));
}

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

// --- generate -------------------------------------------------------------

struct GenerateArgs {
  std::string out;
  std::string schema_out;
  std::size_t n = 10000;
  std::string law = "gamma";
  double shape = 5.0;
  double scale = 10.0;
  int lo = 0;
  int hi = 0;
  int price = 0;
  double mean_ctr = 0.001;
  double pctr_spread = 1.0;
  std::vector<int> features;
  std::uint64_t seed = 0;
  int price_levels = bidlog::kDefaultPriceLevels;
  std::string campaign = "synthetic";
  bool censor = false;
};

void setup_generate(Settings& s, GenerateArgs& a) {
  s.add("out", a.out, "output TSV log")->required();
  s.add("schema-out", a.schema_out, "schema JSON (default: <out>.schema.json)");
  s.add("n", a.n, "number of auctions");
  s.add("law", a.law, "market price law: gamma, uniform or point");
  s.add("shape", a.shape, "gamma shape k");
  s.add("scale", a.scale, "gamma scale theta");
  s.add("lo", a.lo, "uniform law low price");
  s.add("hi", a.hi, "uniform law high price");
  s.add("price", a.price, "point law price");
  s.add("mean-ctr", a.mean_ctr, "mean pctr");
  s.add("pctr-spread", a.pctr_spread, "relative pctr spread in [0, 1]");
  s.add("features", a.features, "vocabulary size of each feature field");
  s.add("seed", a.seed, "random seed");
  s.add("price-levels", a.price_levels, "price grid size L");
  s.add("campaign", a.campaign, "campaign id written to every record");
  s.flag("censor", a.censor, "censor auctions lost at the logged bid");
}

int run_generate(const GenerateArgs& a) {
  bidlog::SyntheticConfig c;
  c.n = a.n;
  if (a.law == "gamma") {
    c.price_law = bidlog::GammaLaw{a.shape, a.scale};
  } else if (a.law == "uniform") {
    c.price_law = bidlog::UniformLaw{a.lo, a.hi};
  } else if (a.law == "point") {
    c.price_law = bidlog::PointLaw{a.price};
  } else {
    throw ConfigError("unknown price law '" + a.law + "'");
  }
  c.mean_ctr = a.mean_ctr;
  c.pctr_spread = a.pctr_spread;
  c.feature_vocab = a.features;
  c.seed = a.seed;
  c.price_levels = a.price_levels;
  c.campaign_id = a.campaign;
  auto ds = bidlog::generate_synthetic(c);
  if (a.censor) ds = bidlog::censor_at_logged_bids(ds);

  auto schema = bidlog::canonical_schema(a.features.size());
  schema.price_levels = a.price_levels;
  std::ostringstream tsv;
  bidlog::write_log(tsv, ds, schema);
  io::write_file_atomic(a.out, tsv.str());
  io::write_file_atomic(a.schema_out.empty() ? a.out + ".schema.json" : a.schema_out,
                        bidlog::schema_to_json(schema));
  spdlog::info("wrote {} records ({} censored) to {}", ds.size(), ds.num_censored(),
               a.out);
  return 0;
}

// --- fit ------------------------------------------------------------------

struct FitArgs {
  DataOptions data;
  std::string model = "km";
  std::string out;
  std::string loss_out;
  int price_levels = 0;
  landscape::TrainConfig train;
};

void add_train_options(Settings& s, landscape::TrainConfig& t) {
  s.add("epochs", t.epochs, "training epochs");
  s.add("learning-rate", t.learning_rate, "SGD step size");
  s.add("lambda1", t.lambda1, "penalty on embedding and cell weights");
  s.add("lambda2", t.lambda2, "penalty on output weights");
  s.add("minibatch", t.minibatch, "minibatch length (also the inference window)");
  s.add("embed-dim", t.embed_dim, "embedding size E");
  s.add("hidden-dim", t.hidden_dim, "hidden size D");
  s.add("omega", t.omega, "weight of the censored survival term");
  s.add("epsilon", t.epsilon, "log floor");
  s.add("seed", t.seed, "random seed");
}

void setup_fit(Settings& s, FitArgs& a) {
  add_data_options(s, a.data, "data", "training log (TSV)");
  s.add("model", a.model, "km, gamma, forecaster or uniform");
  s.add("out", a.out, "output model JSON")->required();
  s.add("loss-out", a.loss_out, "per-epoch loss CSV (default: <out>.loss.csv)");
  s.add("price-levels", a.price_levels, "price grid size L");
  s.flag("lenient", a.data.lenient, "skip malformed lines instead of failing");
  add_train_options(s, a.train);
}

int run_fit(const FitArgs& a) {
  const auto kind = landscape::model_kind_from_string(a.model);
  landscape::MarketModel model;
  std::vector<landscape::EpochLoss> history;
  if (kind == landscape::ModelKind::kUniform && a.data.path.empty()) {
    model = landscape::MarketModel::uniform(
        a.price_levels > 0 ? a.price_levels : bidlog::kDefaultPriceLevels);
  } else {
    const auto ds = load_dataset(a.data, a.price_levels, a.data.lenient);
    switch (kind) {
      case landscape::ModelKind::kUniform:
        model = landscape::MarketModel::uniform(ds.price_levels);
        break;
      case landscape::ModelKind::kKm:
        model = landscape::MarketModel::fit_km(ds);
        break;
      case landscape::ModelKind::kGamma:
        model = landscape::MarketModel::fit_gamma(ds);
        break;
      case landscape::ModelKind::kForecaster:
        model = landscape::MarketModel::fit_forecaster(ds, a.train, &history);
        for (const auto& e : history) {
          spdlog::debug("epoch {}: L = {:.6f}, L_total = {:.6f}", e.epoch, e.loss,
                        e.total_loss);
        }
        break;
      case landscape::ModelKind::kUnfitted:
        throw ConfigError("unknown model kind");
    }
  }
  io::write_file_atomic(a.out, io::model_to_json(model));
  if (kind == landscape::ModelKind::kForecaster) {
    io::write_file_atomic(a.loss_out.empty() ? sibling(a.out, ".loss.csv") : a.loss_out,
                          io::loss_history_csv(history));
  }
  spdlog::info("wrote {} model to {}", a.model, a.out);
  return 0;
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  DataOptions data;
  std::vector<std::string> models;
  std::vector<std::string> names;
  std::string out;
  int price_levels = 0;
  double epsilon = metrics::kDefaultEpsilon;
};

void setup_eval(Settings& s, EvalArgs& a) {
  add_data_options(s, a.data, "data", "test log (TSV)");
  s.add("model", a.models, "model JSON files, one row each")->required();
  s.add("name", a.names, "algorithm names (default: model kinds)");
  s.add("out", a.out, "output CSV (default: stdout)");
  s.add("price-levels", a.price_levels, "price grid size L");
  s.add("epsilon", a.epsilon, "log floor");
  s.flag("lenient", a.data.lenient, "skip malformed lines instead of failing");
}

std::string display_name(landscape::ModelKind kind) {
  switch (kind) {
    case landscape::ModelKind::kKm: return "KM";
    case landscape::ModelKind::kGamma: return "Gamma";
    case landscape::ModelKind::kUniform: return "Uniform";
    case landscape::ModelKind::kForecaster: return "Forecaster";
    case landscape::ModelKind::kUnfitted: break;
  }
  return "Unfitted";
}

int run_eval(const EvalArgs& a) {
  if (!a.names.empty() && a.names.size() != a.models.size()) {
    throw ConfigError("--name must be given once per --model");
  }
  const auto ds = load_dataset(a.data, a.price_levels, a.data.lenient);
  std::vector<metrics::PdfReportRow> rows;
  for (std::size_t i = 0; i < a.models.size(); ++i) {
    const auto model = load_model(a.models[i]);
    if (model.price_levels() != ds.price_levels) {
      throw ConfigError("grid mismatch: model '" + a.models[i] + "' has L = " +
                        std::to_string(model.price_levels()) + ", data has L = " +
                        std::to_string(ds.price_levels));
    }
    const std::string name = a.names.empty() ? display_name(model.kind()) : a.names[i];
    rows.push_back(metrics::evaluate_model(name, model, ds, a.epsilon));
  }
  const std::string csv = io::pdf_report_csv(rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    io::write_file_atomic(a.out, csv);
  }
  return 0;
}

// --- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string model;
  DataOptions data;
  std::string out;
  int budget = -1;
  int horizon = 1000;
  double c0 = 1.0 / 16;
  std::string objective = "clicks";
  std::string payment = "second_price";
  int bmax = -1;
  double gamma = 1.0;
  double ctr = -1.0;
  double click_value = 0.0;
};

void setup_solve(Settings& s, SolveArgs& a) {
  s.add("model", a.model, "market price model JSON (km, gamma or uniform)")->required();
  add_data_options(s, a.data, "data", "training log for ctr and budget defaults");
  s.add("out", a.out, "output value table JSON")->required();
  s.add("budget", a.budget, "initial budget B0 (default: c0 * horizon * mean price)");
  s.add("horizon", a.horizon, "auctions per episode T");
  s.add("c0", a.c0, "budget fraction used when --budget is absent");
  s.add("objective", a.objective, "clicks or surplus");
  s.add("payment", a.payment, "second_price, first_price or literal_bid");
  s.add("bmax", a.bmax, "truncate the table at this budget");
  s.add("gamma", a.gamma, "discount in (0, 1]");
  s.add("ctr", a.ctr, "expected pctr per auction (default: mean pctr of --data)");
  s.add("click-value", a.click_value, "value of a click (surplus objective)");
}

int run_solve(const SolveArgs& a) {
  const auto model = load_model(a.model);
  if (model.conditional()) {
    throw ConfigError("the solver needs an unconditional model (km, gamma or uniform)");
  }
  std::optional<bidlog::CampaignDataset> ds;
  if (!a.data.path.empty()) {
    ds = load_dataset(a.data, model.price_levels(), a.data.lenient);
  }
  bidopt::SolverConfig c;
  c.horizon = a.horizon;
  c.objective = bidopt::objective_from_string(a.objective);
  c.payment = bidopt::payment_from_string(a.payment);
  c.discount = a.gamma;
  c.click_value = a.click_value;
  if (a.budget >= 0) {
    c.budget = a.budget;
  } else {
    if (!ds) throw ConfigError("--budget or --data is required");
    sim::EpisodeConfig ec;
    ec.episode_length = a.horizon;
    ec.budget_fraction = a.c0;
    c.budget = sim::compute_episode_budget(*ds, ec);
  }
  if (a.bmax >= 0) c.truncation = a.bmax;
  double ctr = a.ctr;
  if (ctr < 0.0) {
    if (!ds) throw ConfigError("--ctr or --data is required");
    ctr = ds->mean_pctr();
  }
  const bidopt::TransitionModel tm{model.unconditional(), ctr};
  const auto table = bidopt::solve(tm, c);
  spdlog::info("solved B0 = {}, T = {}, ctr = {}: V(B0, T) = {}", c.budget, c.horizon,
               ctr, table.value(c.budget, c.horizon));
  io::write_file_atomic(a.out, io::value_table_to_json(table));
  return 0;
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  DataOptions data;
  DataOptions train;
  std::vector<std::string> bidders = {"rlb", "lb", "mcpc"};
  std::string table;
  std::string model;
  std::string out;
  std::string json_out;
  std::string campaign;
  int episode_length = 1000;
  double c0 = 1.0 / 16;
  int budget = -1;
  std::string payment = "second_price";
  double max_cpc = -1.0;
  double base_bid = -1.0;
  int const_bid = 0;
  int price_levels = 0;
};

void setup_simulate(Settings& s, SimulateArgs& a) {
  add_data_options(s, a.data, "data", "replay log (TSV, uncensored)");
  add_data_options(s, a.train, "train", "training log for budget, ctr and tuning");
  s.add("bidders", a.bidders, "any of rlb, lb, mcpc, const");
  s.add("table", a.table, "value table JSON for rlb");
  s.add("model", a.model, "market price model JSON; rlb solves a table from it");
  s.add("out", a.out, "output CSV")->required();
  s.add("json-out", a.json_out, "output JSON (default: <out>.json)");
  s.add("campaign", a.campaign, "campaign label (default: from the log)");
  s.add("episode-length", a.episode_length, "auctions per episode N");
  s.add("c0", a.c0, "budget fraction");
  s.add("budget", a.budget, "explicit per-episode budget B0");
  s.add("payment", a.payment, "second_price, first_price or literal_bid");
  s.add("max-cpc", a.max_cpc, "mcpc max cost per click (default: historical CPC)");
  s.add("base-bid", a.base_bid, "lb base bid (default: tuned on the training log)");
  s.add("const-bid", a.const_bid, "bid of the const bidder");
  s.add("price-levels", a.price_levels, "price grid size L");
  s.flag("lenient", a.data.lenient, "skip malformed lines instead of failing");
}

std::string bidder_label(const std::string& name) {
  if (name == "rlb") return "RLB";
  if (name == "lb") return "LB";
  if (name == "mcpc") return "MCPC";
  if (name == "const") return "Const";
  throw ConfigError("unknown bidder '" + name + "'");
}

int run_simulate(const SimulateArgs& a) {
  const auto test = load_dataset(a.data, a.price_levels, a.data.lenient);
  if (test.num_censored() > 0) {
    throw DataError("replay requires uncensored logs: '" + a.data.path + "' has " +
                    std::to_string(test.num_censored()) +
                    " censored records; regenerate it without --censor or replay "
                    "the full log");
  }
  bidlog::CampaignDataset train;
  if (a.train.path.empty()) {
    spdlog::warn("no --train log; budget and baselines use the replay log");
    train = test;
  } else {
    train = load_dataset(a.train, test.price_levels, a.data.lenient);
  }

  sim::EpisodeConfig ec;
  ec.episode_length = a.episode_length;
  ec.budget_fraction = a.c0;
  ec.payment = bidopt::payment_from_string(a.payment);
  if (a.budget >= 0) ec.budget_override = a.budget;
  const int budget = sim::compute_episode_budget(train, ec);
  const int cap = test.price_levels - 1;
  const double ctr = train.mean_pctr();
  spdlog::info("B0 = {}, N = {}, mean pctr = {}", budget, a.episode_length, ctr);

  const std::string campaign =
      !a.campaign.empty()  ? a.campaign
      : test.empty()       ? std::string("-")
                           : test.records.front().campaign_id;
  std::vector<io::CampaignRow> rows;
  for (const auto& name : a.bidders) {
    const std::string label = bidder_label(name);
    sim::Bidder bidder;
    if (name == "rlb") {
      std::shared_ptr<const bidopt::ValueTable> table;
      landscape::MarketModel model;
      if (!a.model.empty()) model = load_model(a.model);
      if (!a.table.empty()) {
        table = std::make_shared<const bidopt::ValueTable>(
            io::value_table_from_json(io::read_file(a.table)));
        if (!model.fitted()) {
          throw ConfigError("rlb with --table also needs the --model it was solved on");
        }
      } else {
        if (!model.fitted()) throw ConfigError("rlb needs --model or --table");
        bidopt::SolverConfig sc;
        sc.budget = budget;
        sc.horizon = a.episode_length;
        sc.payment = ec.payment;
        table = std::make_shared<const bidopt::ValueTable>(
            bidopt::solve({model.unconditional(), ctr}, sc));
      }
      if (model.price_levels() != test.price_levels) {
        throw ConfigError("grid mismatch between model and replay log");
      }
      bidder = sim::dp_bidder(table, {model.unconditional(), ctr});
    } else if (name == "lb") {
      const double base = a.base_bid >= 0.0
                              ? a.base_bid
                              : sim::tune_linear_base_bid(train, ctr, ec, budget, cap);
      spdlog::info("lb base bid {}", base);
      bidder = sim::linear_bidder(base, ctr, cap);
    } else if (name == "mcpc") {
      const double max_cpc = a.max_cpc >= 0.0 ? a.max_cpc : sim::historical_cpc(train);
      spdlog::info("mcpc max cpc {}", max_cpc);
      bidder = sim::mcpc_bidder(max_cpc, cap);
    } else {
      bidder = sim::constant_bidder(a.const_bid);
    }
    rows.push_back({campaign, label, sim::run_campaign(test, bidder, ec, budget)});
  }
  io::write_file_atomic(a.out, io::campaign_report_csv(rows));
  io::write_file_atomic(a.json_out.empty() ? sibling(a.out, ".json") : a.json_out,
                        io::campaign_report_json(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Bid landscape forecasting and budget-constrained bid optimization"};
  app.require_subcommand(1);

  GenerateArgs gen;
  FitArgs fit;
  EvalArgs eval;
  SolveArgs solve;
  SimulateArgs simulate;

  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic bid log");
  Settings gen_s(gen_cmd);
  setup_generate(gen_s, gen);
  auto* fit_cmd = app.add_subcommand("fit", "fit a market price model");
  Settings fit_s(fit_cmd);
  setup_fit(fit_s, fit);
  auto* eval_cmd = app.add_subcommand("eval", "score models: AUC, Log Loss, ANLP");
  Settings eval_s(eval_cmd);
  setup_eval(eval_s, eval);
  auto* solve_cmd = app.add_subcommand("solve", "solve the bidding value table");
  Settings solve_s(solve_cmd);
  setup_solve(solve_s, solve);
  auto* sim_cmd = app.add_subcommand("simulate", "replay bidders over a log");
  Settings sim_s(sim_cmd);
  setup_simulate(sim_s, simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Parse errors use CLI11's own codes; collapse them into the config code but
    // keep --help at 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (gen_cmd->parsed()) {
      gen_s.resolve("generate");
      return run_generate(gen);
    }
    if (fit_cmd->parsed()) {
      fit_s.resolve("fit");
      return run_fit(fit);
    }
    if (eval_cmd->parsed()) {
      eval_s.resolve("eval");
      return run_eval(eval);
    }
    if (solve_cmd->parsed()) {
      solve_s.resolve("solve");
      return run_solve(solve);
    }
    sim_s.resolve("simulate");
    return run_simulate(simulate);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const NumericError& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
}
