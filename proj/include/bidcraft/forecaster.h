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

// Recurrent landscape forecaster.
//
// Each auction is embedded as the mean of its feature-token embeddings, fed
// through a GRU cell, and mapped by an affine layer plus softmax to a price
// distribution over the grid. Training minimizes the mean squared distance
// between the forecast and the one-hot observed price, plus Frobenius
// penalties (lambda1 on embedding and cell weights, lambda2 on the output
// weights) and an omega-weighted survival term for censored auctions:
//
//   L_total = L + lambda1 * |W_fc|^2 + lambda2 * |W_out|^2 + omega * C
//   C = mean over censored records of -ln(max(eps, P(price >= lower_bound)))
//
// Gradients come from backpropagation through time over each minibatch,
// which is a contiguous slice of the log starting from a zero hidden state.

#ifndef BIDCRAFT_FORECASTER_H_
#define BIDCRAFT_FORECASTER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "bidcraft/bidlog.h"
#include "bidcraft/price_distribution.h"

namespace bidcraft::landscape {

// Token -> embedding row. Row 0 is the shared fallback for unseen tokens.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  // Sorted distinct tokens of the dataset.
  static Vocabulary build(const bidlog::CampaignDataset& dataset);

  int row(std::string_view token) const;
  int num_rows() const { return static_cast<int>(tokens_.size()) + 1; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct ForecasterParams {
  int embed_dim = 0;
  int hidden_dim = 0;
  int price_levels = 0;
  // Hidden state is reset every `window` auctions, matching the training
  // minibatch length.
  int window = 64;
  Vocabulary vocab;

  Eigen::MatrixXd embedding;    // vocab.num_rows() x E
  Eigen::MatrixXd w_update;     // D x (E + D)
  Eigen::VectorXd b_update;     // D
  Eigen::MatrixXd w_reset;      // D x (E + D)
  Eigen::VectorXd b_reset;      // D
  Eigen::MatrixXd w_candidate;  // D x (E + D)
  Eigen::VectorXd b_candidate;  // D
  Eigen::MatrixXd w_out;        // L x D
  Eigen::VectorXd b_out;        // L

  // Same shapes, all zeros; the layout gradients are accumulated in.
  ForecasterParams zeros_like() const;
};

bool operator==(const ForecasterParams& a, const ForecasterParams& b);

// Which Frobenius penalty applies to a block. Biases are not penalized.
enum class Penalty { kFeatureCell, kOutput, kNone };

struct ParamBlock {
  std::string_view name;
  std::span<double> values;
  Penalty penalty;
};
struct ConstParamBlock {
  std::string_view name;
  std::span<const double> values;
  Penalty penalty;
};

// The nine trainable blocks, in a fixed order.
std::vector<ParamBlock> param_blocks(ForecasterParams& params);
std::vector<ConstParamBlock> param_blocks(const ForecasterParams& params);

// Throws ConfigError on inconsistent shapes or non-finite entries.
void validate(const ForecasterParams& params);

// Entries uniform in [-init_scale, init_scale], drawn from `seed`.
ForecasterParams init_forecaster(Vocabulary vocab, int embed_dim,
                                 int hidden_dim, int price_levels,
                                 std::uint64_t seed, double init_scale = 0.1);

struct TrainConfig {
  double learning_rate = 0.01;
  double lambda1 = 1e-4;  // embedding + recurrent cell weights
  double lambda2 = 1e-4;  // output layer weights
  int epochs = 10;
  int minibatch = 64;
  std::uint64_t seed = 0;
  double epsilon = 1e-12;
  double omega = 0.25;  // censored survival term
  int embed_dim = 16;
  int hidden_dim = 32;
};

void validate(const TrainConfig& config);

// GRU cell:
//   z = sigmoid(W_z [x, h] + b_z)      r = sigmoid(W_r [x, h] + b_r)
//   c = tanh(W_h [x, r * h] + b_h)     h' = (1 - z) * h + z * c
Eigen::VectorXd rnn_step(const Eigen::VectorXd& input,
                         const Eigen::VectorXd& h_prev,
                         const ForecasterParams& params);

// Mean embedding of the record's tokens; the fallback row when it has none.
Eigen::VectorXd embed_features(std::span<const std::string> features,
                               const ForecasterParams& params);

struct Forecast {
  PriceDistribution distribution;
  Eigen::VectorXd hidden;
};

Forecast forward_predict(const bidlog::BidRecord& record,
                         const Eigen::VectorXd& h_prev,
                         const ForecasterParams& params);

// Runs the forecaster over `records` in order.
std::vector<PriceDistribution> predict_sequence(
    const ForecasterParams& params, std::span<const bidlog::BidRecord> records);

// (1/T) sum_t |X_t - Xhat_t|_2^2. ConfigError on empty or mismatched input.
double loss_mse(std::span<const PriceDistribution> predictions,
                std::span<const PriceDistribution> targets);

// -ln(max(eps, P(price >= lower_bound))).
double censored_term(const PriceDistribution& prediction, int lower_bound,
                     double epsilon);

struct FrobeniusNorms {
  double feature_cell = 0.0;  // squared, embedding + cell weight matrices
  double output = 0.0;        // squared, output weight matrix
};
FrobeniusNorms squared_frobenius(const ForecasterParams& params);

double loss_total(double loss, const ForecasterParams& params, double lambda1,
                  double lambda2, double censored_terms, double omega);

// Adds the penalty gradient 2 * lambda * W to `gradients`, block by block.
void add_penalty_gradient(ForecasterParams& gradients,
                          const ForecasterParams& params, double lambda1,
                          double lambda2);

// p <- p - lr * dL/dp - lr * lambda_block * 2p. NumericError naming the block
// on a non-finite gradient.
ForecasterParams sgd_step(const ForecasterParams& params,
                          const ForecasterParams& gradients,
                          double learning_rate, double lambda1, double lambda2);

struct LossBreakdown {
  double mse = 0.0;       // mean over uncensored records (0 if none)
  double censored = 0.0;  // mean survival term over censored records (0 if none)
  double total = 0.0;     // with penalties and omega
  std::size_t observed = 0;
  std::size_t num_censored = 0;
};

// Loss of one sequence starting from a zero hidden state. When `gradients`
// is non-null it receives d(mse + omega * censored)/d(theta); the penalty
// part is left to sgd_step / add_penalty_gradient.
LossBreakdown sequence_loss(const ForecasterParams& params,
                            std::span<const bidlog::BidRecord> records,
                            const TrainConfig& config,
                            ForecasterParams* gradients = nullptr);

struct EpochLoss {
  int epoch = 0;
  double loss = 0.0;        // mean minibatch L
  double total_loss = 0.0;  // mean minibatch L_total
};

struct TrainResult {
  ForecasterParams params;
  std::vector<EpochLoss> history;
};

// Deterministic given config.seed. NumericError with epoch and batch index if
// the loss stops being finite.
TrainResult train(const bidlog::CampaignDataset& dataset,
                  const TrainConfig& config);

}  // namespace bidcraft::landscape

#endif  // BIDCRAFT_FORECASTER_H_
