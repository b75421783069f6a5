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

#ifndef BIDCRAFT_MARKET_MODEL_H_
#define BIDCRAFT_MARKET_MODEL_H_

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bidcraft/bidlog.h"
#include "bidcraft/forecaster.h"
#include "bidcraft/price_distribution.h"
#include "bidcraft/survival.h"

namespace bidcraft::landscape {

struct KmModel {
  SurvivalCurve curve;
  PriceDistribution distribution;
};

struct GammaModel {
  GammaParams params;
  PriceDistribution distribution;
};

struct UniformModel {
  PriceDistribution distribution;
};

struct ForecasterModel {
  ForecasterParams params;
};

enum class ModelKind { kUnfitted, kUniform, kKm, kGamma, kForecaster };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// A fitted market-price model. Default-constructed means unfitted.
class MarketModel {
 public:
  MarketModel() = default;
  explicit MarketModel(KmModel m) : model_(std::move(m)) {}
  explicit MarketModel(GammaModel m) : model_(std::move(m)) {}
  explicit MarketModel(UniformModel m) : model_(std::move(m)) {}
  explicit MarketModel(ForecasterModel m) : model_(std::move(m)) {}

  static MarketModel fit_km(const bidlog::CampaignDataset& dataset);
  static MarketModel fit_gamma(const bidlog::CampaignDataset& dataset);
  static MarketModel uniform(int price_levels);
  static MarketModel fit_forecaster(const bidlog::CampaignDataset& dataset,
                                    const TrainConfig& config,
                                    std::vector<EpochLoss>* history = nullptr);

  ModelKind kind() const;
  bool fitted() const { return kind() != ModelKind::kUnfitted; }
  bool conditional() const { return kind() == ModelKind::kForecaster; }
  int price_levels() const;

  // Feature-independent distribution; ConfigError for the forecaster and
  // for unfitted models.
  const PriceDistribution& unconditional() const;

  const KmModel* km() const { return std::get_if<KmModel>(&model_); }
  const GammaModel* gamma() const { return std::get_if<GammaModel>(&model_); }
  const ForecasterModel* forecaster() const {
    return std::get_if<ForecasterModel>(&model_);
  }

 private:
  std::variant<std::monostate, UniformModel, KmModel, GammaModel,
               ForecasterModel>
      model_;
};

// Recurrent state threaded through predict_distribution. Unused by the
// unconditional models.
struct PredictionState {
  Eigen::VectorXd hidden;
  std::size_t steps = 0;
};

PredictionState initial_state(const MarketModel& model);

// ConfigError on an unfitted model.
PriceDistribution predict_distribution(const MarketModel& model,
                                       const bidlog::BidRecord& record,
                                       PredictionState& state);

// One distribution per record in log order, starting from initial_state.
std::vector<PriceDistribution> predict_all(
    const MarketModel& model, std::span<const bidlog::BidRecord> records);

}  // namespace bidcraft::landscape

#endif  // BIDCRAFT_MARKET_MODEL_H_
