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

#include "bidcraft/market_model.h"

#include "bidcraft/error.h"

namespace bidcraft::landscape {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUnfitted: return "unfitted";
    case ModelKind::kUniform: return "uniform";
    case ModelKind::kKm: return "km";
    case ModelKind::kGamma: return "gamma";
    case ModelKind::kForecaster: return "forecaster";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "uniform") return ModelKind::kUniform;
  if (name == "km") return ModelKind::kKm;
  if (name == "gamma") return ModelKind::kGamma;
  if (name == "forecaster") return ModelKind::kForecaster;
  throw ConfigError("unknown model kind '" + name + "'");
}

MarketModel MarketModel::fit_km(const bidlog::CampaignDataset& dataset) {
  SurvivalCurve curve = km_fit(dataset);
  PriceDistribution dist = survival_to_distribution(curve);
  return MarketModel(KmModel{std::move(curve), std::move(dist)});
}

MarketModel MarketModel::fit_gamma(const bidlog::CampaignDataset& dataset) {
  const GammaParams params = gamma_fit(dataset);
  return MarketModel(
      GammaModel{params, gamma_discretize(params, dataset.price_levels)});
}

MarketModel MarketModel::uniform(int price_levels) {
  return MarketModel(UniformModel{PriceDistribution::uniform(price_levels)});
}

MarketModel MarketModel::fit_forecaster(const bidlog::CampaignDataset& dataset,
                                        const TrainConfig& config,
                                        std::vector<EpochLoss>* history) {
  TrainResult result = train(dataset, config);
  if (history != nullptr) *history = std::move(result.history);
  return MarketModel(ForecasterModel{std::move(result.params)});
}

ModelKind MarketModel::kind() const {
  switch (model_.index()) {
    case 1: return ModelKind::kUniform;
    case 2: return ModelKind::kKm;
    case 3: return ModelKind::kGamma;
    case 4: return ModelKind::kForecaster;
    default: return ModelKind::kUnfitted;
  }
}

int MarketModel::price_levels() const {
  if (const auto* f = forecaster()) return f->params.price_levels;
  return unconditional().levels();
}

const PriceDistribution& MarketModel::unconditional() const {
  if (const auto* u = std::get_if<UniformModel>(&model_)) return u->distribution;
  if (const auto* k = km()) return k->distribution;
  if (const auto* g = gamma()) return g->distribution;
  if (forecaster() != nullptr) {
    throw ConfigError("the forecaster has no unconditional distribution");
  }
  throw ConfigError("model is not fitted");
}

PredictionState initial_state(const MarketModel& model) {
  PredictionState state;
  if (const auto* f = model.forecaster()) {
    state.hidden = Eigen::VectorXd::Zero(f->params.hidden_dim);
  }
  return state;
}

PriceDistribution predict_distribution(const MarketModel& model,
                                       const bidlog::BidRecord& record,
                                       PredictionState& state) {
  if (!model.fitted()) throw ConfigError("model is not fitted");
  const auto* f = model.forecaster();
  if (f == nullptr) return model.unconditional();

  const auto window = static_cast<std::size_t>(f->params.window);
  if (state.hidden.size() != f->params.hidden_dim || state.steps % window == 0) {
    state.hidden = Eigen::VectorXd::Zero(f->params.hidden_dim);
  }
  Forecast out = forward_predict(record, state.hidden, f->params);
  state.hidden = std::move(out.hidden);
  ++state.steps;
  return std::move(out.distribution);
}

std::vector<PriceDistribution> predict_all(
    const MarketModel& model, std::span<const bidlog::BidRecord> records) {
  PredictionState state = initial_state(model);
  std::vector<PriceDistribution> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(predict_distribution(model, r, state));
  return out;
}

}  // namespace bidcraft::landscape
