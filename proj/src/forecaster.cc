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

#include "bidcraft/forecaster.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "bidcraft/error.h"

namespace bidcraft::landscape {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd sigmoid(const VectorXd& a) {
  return a.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

VectorXd softmax(const VectorXd& logits) {
  const double top = logits.maxCoeff();
  VectorXd e = (logits.array() - top).exp();
  return e / e.sum();
}

// Probabilities as a PriceDistribution. Softmax output sums to 1 up to
// rounding, well inside the pmf tolerance.
PriceDistribution to_distribution(const VectorXd& p) {
  return PriceDistribution(std::vector<double>(p.data(), p.data() + p.size()));
}

std::vector<int> token_rows(const bidlog::BidRecord& record,
                            const ForecasterParams& params) {
  std::vector<int> rows;
  rows.reserve(record.features.size());
  for (const auto& token : record.features) rows.push_back(params.vocab.row(token));
  if (rows.empty()) rows.push_back(0);
  return rows;
}

VectorXd mean_rows(const std::vector<int>& rows, const ForecasterParams& params) {
  VectorXd x = VectorXd::Zero(params.embed_dim);
  for (int row : rows) x += params.embedding.row(row).transpose();
  return x / static_cast<double>(rows.size());
}

struct StepCache {
  std::vector<int> rows;
  VectorXd x, h_prev, concat, update, reset, gated, candidate, h, p;
};

void check_shape(const MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                 const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ConfigError(std::string("forecaster block ") + name +
                      " has inconsistent dimensions");
  }
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i) + 1).second) {
      throw ConfigError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::build(const bidlog::CampaignDataset& dataset) {
  std::set<std::string> distinct;
  for (const auto& r : dataset.records) {
    distinct.insert(r.features.begin(), r.features.end());
  }
  return Vocabulary(std::vector<std::string>(distinct.begin(), distinct.end()));
}

int Vocabulary::row(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? 0 : it->second;
}

ForecasterParams ForecasterParams::zeros_like() const {
  ForecasterParams z = *this;
  for (auto& block : param_blocks(z)) {
    std::fill(block.values.begin(), block.values.end(), 0.0);
  }
  return z;
}

bool operator==(const ForecasterParams& a, const ForecasterParams& b) {
  if (a.embed_dim != b.embed_dim || a.hidden_dim != b.hidden_dim ||
      a.price_levels != b.price_levels || a.window != b.window ||
      !(a.vocab == b.vocab)) {
    return false;
  }
  const auto ab = param_blocks(a);
  const auto bb = param_blocks(b);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    if (!std::equal(ab[i].values.begin(), ab[i].values.end(),
                    bb[i].values.begin(), bb[i].values.end())) {
      return false;
    }
  }
  return true;
}

std::vector<ParamBlock> param_blocks(ForecasterParams& p) {
  const auto span_of = [](auto& m) {
    return std::span<double>(m.data(), static_cast<std::size_t>(m.size()));
  };
  return {
      {"embedding", span_of(p.embedding), Penalty::kFeatureCell},
      {"w_update", span_of(p.w_update), Penalty::kFeatureCell},
      {"b_update", span_of(p.b_update), Penalty::kNone},
      {"w_reset", span_of(p.w_reset), Penalty::kFeatureCell},
      {"b_reset", span_of(p.b_reset), Penalty::kNone},
      {"w_candidate", span_of(p.w_candidate), Penalty::kFeatureCell},
      {"b_candidate", span_of(p.b_candidate), Penalty::kNone},
      {"w_out", span_of(p.w_out), Penalty::kOutput},
      {"b_out", span_of(p.b_out), Penalty::kNone},
  };
}

std::vector<ConstParamBlock> param_blocks(const ForecasterParams& params) {
  auto& p = const_cast<ForecasterParams&>(params);
  std::vector<ConstParamBlock> out;
  for (const auto& b : param_blocks(p)) out.push_back({b.name, b.values, b.penalty});
  return out;
}

void validate(const ForecasterParams& p) {
  if (p.embed_dim < 1 || p.hidden_dim < 1 || p.price_levels < 1 || p.window < 1) {
    throw ConfigError("forecaster dimensions must be >= 1");
  }
  const Eigen::Index e = p.embed_dim, d = p.hidden_dim, l = p.price_levels;
  check_shape(p.embedding, p.vocab.num_rows(), e, "embedding");
  check_shape(p.w_update, d, e + d, "w_update");
  check_shape(p.b_update, d, 1, "b_update");
  check_shape(p.w_reset, d, e + d, "w_reset");
  check_shape(p.b_reset, d, 1, "b_reset");
  check_shape(p.w_candidate, d, e + d, "w_candidate");
  check_shape(p.b_candidate, d, 1, "b_candidate");
  check_shape(p.w_out, l, d, "w_out");
  check_shape(p.b_out, l, 1, "b_out");
  for (const auto& block : param_blocks(p)) {
    for (double v : block.values) {
      if (!std::isfinite(v)) {
        throw ConfigError("forecaster block " + std::string(block.name) +
                          " has non-finite entries");
      }
    }
  }
}

ForecasterParams init_forecaster(Vocabulary vocab, int embed_dim, int hidden_dim,
                                 int price_levels, std::uint64_t seed,
                                 double init_scale) {
  if (embed_dim < 1 || hidden_dim < 1 || price_levels < 1) {
    throw ConfigError("forecaster dimensions must be >= 1");
  }
  ForecasterParams p;
  p.embed_dim = embed_dim;
  p.hidden_dim = hidden_dim;
  p.price_levels = price_levels;
  p.vocab = std::move(vocab);
  const Eigen::Index e = embed_dim, d = hidden_dim, l = price_levels;
  p.embedding.resize(p.vocab.num_rows(), e);
  p.w_update.resize(d, e + d);
  p.b_update.resize(d);
  p.w_reset.resize(d, e + d);
  p.b_reset.resize(d);
  p.w_candidate.resize(d, e + d);
  p.b_candidate.resize(d);
  p.w_out.resize(l, d);
  p.b_out.resize(l);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init(-init_scale, init_scale);
  for (auto& block : param_blocks(p)) {
    for (double& v : block.values) v = init(rng);
  }
  return p;
}

void validate(const TrainConfig& c) {
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) {
    throw ConfigError("learning rate must be > 0");
  }
  if (!(c.lambda1 >= 0.0) || !(c.lambda2 >= 0.0) || !(c.omega >= 0.0)) {
    throw ConfigError("lambda1, lambda2 and omega must be >= 0");
  }
  if (!(c.epsilon > 0.0 && c.epsilon <= 1e-6)) {
    throw ConfigError("epsilon must lie in (0, 1e-6]");
  }
  if (c.epochs < 0 || c.minibatch < 1 || c.embed_dim < 1 || c.hidden_dim < 1) {
    throw ConfigError("epochs >= 0 and minibatch, dimensions >= 1 required");
  }
}

// ---------------------------------------------------------------------------

Eigen::VectorXd rnn_step(const Eigen::VectorXd& input,
                         const Eigen::VectorXd& h_prev,
                         const ForecasterParams& p) {
  if (input.size() != p.embed_dim || h_prev.size() != p.hidden_dim) {
    throw ConfigError("rnn_step input or state dimension mismatch");
  }
  VectorXd concat(p.embed_dim + p.hidden_dim);
  concat << input, h_prev;
  const VectorXd update = sigmoid(p.w_update * concat + p.b_update);
  const VectorXd reset = sigmoid(p.w_reset * concat + p.b_reset);
  VectorXd gated(p.embed_dim + p.hidden_dim);
  gated << input, reset.cwiseProduct(h_prev);
  const VectorXd candidate = (p.w_candidate * gated + p.b_candidate).array().tanh();
  return (VectorXd::Ones(p.hidden_dim) - update).cwiseProduct(h_prev) +
         update.cwiseProduct(candidate);
}

Eigen::VectorXd embed_features(std::span<const std::string> features,
                               const ForecasterParams& params) {
  std::vector<int> rows;
  for (const auto& token : features) rows.push_back(params.vocab.row(token));
  if (rows.empty()) rows.push_back(0);
  return mean_rows(rows, params);
}

Forecast forward_predict(const bidlog::BidRecord& record,
                         const Eigen::VectorXd& h_prev,
                         const ForecasterParams& params) {
  const VectorXd x = embed_features(record.features, params);
  VectorXd h = rnn_step(x, h_prev, params);
  const VectorXd p = softmax(params.w_out * h + params.b_out);
  return {to_distribution(p), std::move(h)};
}

std::vector<PriceDistribution> predict_sequence(
    const ForecasterParams& params, std::span<const bidlog::BidRecord> records) {
  std::vector<PriceDistribution> out;
  out.reserve(records.size());
  VectorXd h = VectorXd::Zero(params.hidden_dim);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i % static_cast<std::size_t>(params.window) == 0) h.setZero();
    Forecast f = forward_predict(records[i], h, params);
    h = std::move(f.hidden);
    out.push_back(std::move(f.distribution));
  }
  return out;
}

double loss_mse(std::span<const PriceDistribution> predictions,
                std::span<const PriceDistribution> targets) {
  if (predictions.empty()) throw ConfigError("loss_mse needs T >= 1");
  if (predictions.size() != targets.size()) {
    throw ConfigError("loss_mse needs equal-length sequences");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    if (predictions[t].levels() != targets[t].levels()) {
      throw ConfigError("loss_mse grid size mismatch");
    }
    for (int z = 0; z < predictions[t].levels(); ++z) {
      const double d = targets[t][z] - predictions[t][z];
      sum += d * d;
    }
  }
  return sum / static_cast<double>(predictions.size());
}

double censored_term(const PriceDistribution& prediction, int lower_bound,
                     double epsilon) {
  return -std::log(std::max(epsilon, prediction.mass_at_or_above(lower_bound)));
}

FrobeniusNorms squared_frobenius(const ForecasterParams& params) {
  FrobeniusNorms norms;
  for (const auto& block : param_blocks(params)) {
    double s = 0.0;
    for (double v : block.values) s += v * v;
    if (block.penalty == Penalty::kFeatureCell) norms.feature_cell += s;
    if (block.penalty == Penalty::kOutput) norms.output += s;
  }
  return norms;
}

double loss_total(double loss, const ForecasterParams& params, double lambda1,
                  double lambda2, double censored_terms, double omega) {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !(omega >= 0.0)) {
    throw ConfigError("lambda1, lambda2 and omega must be >= 0");
  }
  const FrobeniusNorms norms = squared_frobenius(params);
  double total = loss;
  if (lambda1 != 0.0) total += lambda1 * norms.feature_cell;
  if (lambda2 != 0.0) total += lambda2 * norms.output;
  if (omega != 0.0) total += omega * censored_terms;
  return total;
}

void add_penalty_gradient(ForecasterParams& gradients,
                          const ForecasterParams& params, double lambda1,
                          double lambda2) {
  auto g = param_blocks(gradients);
  const auto p = param_blocks(params);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double lambda = p[i].penalty == Penalty::kFeatureCell ? lambda1
                          : p[i].penalty == Penalty::kOutput    ? lambda2
                                                                : 0.0;
    if (lambda == 0.0) continue;
    for (std::size_t k = 0; k < g[i].values.size(); ++k) {
      g[i].values[k] += 2.0 * lambda * p[i].values[k];
    }
  }
}

namespace {

void sgd_update(ForecasterParams& params, const ForecasterParams& gradients,
                double learning_rate, double lambda1, double lambda2) {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  auto out = param_blocks(params);
  const auto grad = param_blocks(gradients);
  if (grad.size() != out.size()) throw ConfigError("gradient layout mismatch");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (grad[i].values.size() != out[i].values.size()) {
      throw ConfigError("gradient block " + std::string(out[i].name) +
                        " has mismatched dimensions");
    }
    const double lambda = out[i].penalty == Penalty::kFeatureCell ? lambda1
                          : out[i].penalty == Penalty::kOutput    ? lambda2
                                                                  : 0.0;
    for (std::size_t k = 0; k < out[i].values.size(); ++k) {
      const double g = grad[i].values[k];
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient in block " +
                           std::string(out[i].name));
      }
      double& v = out[i].values[k];
      v = v - learning_rate * g - learning_rate * lambda * (2.0 * v);
    }
  }
}

}  // namespace

ForecasterParams sgd_step(const ForecasterParams& params,
                          const ForecasterParams& gradients,
                          double learning_rate, double lambda1,
                          double lambda2) {
  ForecasterParams next = params;
  sgd_update(next, gradients, learning_rate, lambda1, lambda2);
  return next;
}

// ---------------------------------------------------------------------------

LossBreakdown sequence_loss(const ForecasterParams& p,
                            std::span<const bidlog::BidRecord> records,
                            const TrainConfig& config,
                            ForecasterParams* gradients) {
  const Eigen::Index e = p.embed_dim, d = p.hidden_dim;
  LossBreakdown loss;
  for (const auto& r : records) {
    if (r.censored()) {
      ++loss.num_censored;
    } else {
      ++loss.observed;
    }
  }
  const double mse_weight =
      loss.observed > 0 ? 1.0 / static_cast<double>(loss.observed) : 0.0;
  const double cens_weight =
      loss.num_censored > 0 ? 1.0 / static_cast<double>(loss.num_censored) : 0.0;

  std::vector<StepCache> steps(records.size());
  std::vector<VectorXd> dprob(records.size());
  VectorXd h = VectorXd::Zero(d);
  double mse_sum = 0.0, cens_sum = 0.0;
  for (std::size_t t = 0; t < records.size(); ++t) {
    StepCache& s = steps[t];
    s.rows = token_rows(records[t], p);
    s.x = mean_rows(s.rows, p);
    s.h_prev = h;
    s.concat.resize(e + d);
    s.concat << s.x, s.h_prev;
    s.update = sigmoid(p.w_update * s.concat + p.b_update);
    s.reset = sigmoid(p.w_reset * s.concat + p.b_reset);
    s.gated.resize(e + d);
    s.gated << s.x, s.reset.cwiseProduct(s.h_prev);
    s.candidate = (p.w_candidate * s.gated + p.b_candidate).array().tanh();
    s.h = (VectorXd::Ones(d) - s.update).cwiseProduct(s.h_prev) +
          s.update.cwiseProduct(s.candidate);
    s.p = softmax(p.w_out * s.h + p.b_out);
    h = s.h;

    const auto& r = records[t];
    VectorXd& dp = dprob[t];
    if (!r.censored()) {
      VectorXd diff = s.p;
      diff(*r.market_price) -= 1.0;
      mse_sum += diff.squaredNorm();
      dp = 2.0 * mse_weight * diff;
    } else {
      const Eigen::Index lb = *r.lower_bound;
      const double tail = s.p.tail(s.p.size() - lb).sum();
      cens_sum += -std::log(std::max(config.epsilon, tail));
      dp = VectorXd::Zero(s.p.size());
      if (tail > config.epsilon) {
        dp.tail(s.p.size() - lb).setConstant(-config.omega * cens_weight / tail);
      }
    }
  }
  loss.mse = mse_sum * mse_weight;
  loss.censored = cens_sum * cens_weight;
  loss.total = loss_total(loss.mse, p, config.lambda1, config.lambda2,
                          loss.censored, config.omega);
  if (gradients == nullptr) return loss;

  ForecasterParams& g = *gradients;
  if (g.embedding.rows() == p.embedding.rows() && g.embed_dim == p.embed_dim &&
      g.hidden_dim == p.hidden_dim && g.price_levels == p.price_levels) {
    for (auto& block : param_blocks(g)) {
      std::fill(block.values.begin(), block.values.end(), 0.0);
    }
  } else {
    g = p.zeros_like();
  }
  VectorXd dh_next = VectorXd::Zero(d);
  for (std::size_t t = records.size(); t-- > 0;) {
    const StepCache& s = steps[t];
    const VectorXd& dp = dprob[t];
    const VectorXd dlogit =
        (s.p.array() * (dp.array() - s.p.dot(dp))).matrix();
    g.w_out.noalias() += dlogit * s.h.transpose();
    g.b_out += dlogit;
    const VectorXd dh = dh_next + p.w_out.transpose() * dlogit;

    const VectorXd dcand = dh.cwiseProduct(s.update);
    const VectorXd dupdate = dh.cwiseProduct(s.candidate - s.h_prev);
    VectorXd dh_prev = dh.cwiseProduct(VectorXd::Ones(d) - s.update);

    const VectorXd da_cand =
        dcand.cwiseProduct((1.0 - s.candidate.array().square()).matrix());
    g.w_candidate.noalias() += da_cand * s.gated.transpose();
    g.b_candidate += da_cand;
    const VectorXd dgated = p.w_candidate.transpose() * da_cand;
    VectorXd dx = dgated.head(e);
    const VectorXd dgated_h = dgated.tail(d);
    const VectorXd dreset = dgated_h.cwiseProduct(s.h_prev);
    dh_prev += dgated_h.cwiseProduct(s.reset);

    const VectorXd da_update = dupdate.cwiseProduct(
        s.update.cwiseProduct(VectorXd::Ones(d) - s.update));
    const VectorXd da_reset =
        dreset.cwiseProduct(s.reset.cwiseProduct(VectorXd::Ones(d) - s.reset));
    g.w_update.noalias() += da_update * s.concat.transpose();
    g.b_update += da_update;
    g.w_reset.noalias() += da_reset * s.concat.transpose();
    g.b_reset += da_reset;
    const VectorXd dconcat =
        p.w_update.transpose() * da_update + p.w_reset.transpose() * da_reset;
    dx += dconcat.head(e);
    dh_prev += dconcat.tail(d);

    const double share = 1.0 / static_cast<double>(s.rows.size());
    for (int row : s.rows) g.embedding.row(row) += share * dx.transpose();
    dh_next = dh_prev;
  }
  return loss;
}

TrainResult train(const bidlog::CampaignDataset& dataset,
                  const TrainConfig& config) {
  validate(config);
  if (dataset.empty()) throw DataError("cannot train on an empty dataset");

  TrainResult result;
  result.params = init_forecaster(Vocabulary::build(dataset), config.embed_dim,
                                  config.hidden_dim, dataset.price_levels,
                                  config.seed);
  result.params.window = config.minibatch;

  const std::span<const bidlog::BidRecord> records(dataset.records);
  const std::size_t batch = static_cast<std::size_t>(config.minibatch);
  const std::size_t num_batches = (records.size() + batch - 1) / batch;
  std::vector<std::size_t> order(num_batches);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Separate stream from the initializer so batch order does not depend on
  // the parameter count.
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  ForecasterParams grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0, total_sum = 0.0;
    for (std::size_t k = 0; k < num_batches; ++k) {
      const std::size_t start = order[k] * batch;
      const auto slice =
          records.subspan(start, std::min(batch, records.size() - start));
      const LossBreakdown loss = sequence_loss(result.params, slice, config, &grad);
      if (!std::isfinite(loss.total)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(k));
      }
      loss_sum += loss.mse;
      total_sum += loss.total;
      try {
        sgd_update(result.params, grad, config.learning_rate, config.lambda1,
                   config.lambda2);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(k));
      }
    }
    result.history.push_back({epoch, loss_sum / static_cast<double>(num_batches),
                              total_sum / static_cast<double>(num_batches)});
  }
  return result;
}

}  // namespace bidcraft::landscape
