#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "poc/aware_model.hpp"
#include "poc/dataset.hpp"
#include "poc/errors.hpp"
#include "poc/metrics.hpp"
#include "poc/rng.hpp"

namespace poc {

// Training defaults for the context-aware predictor.
struct TrainingConfig {
  std::size_t hidden = 32;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  double weight_decay = 0.01;
  std::size_t epochs = 60;
  double warmup_fraction = 0.02;
  std::uint64_t seed = 0;
  double train_fraction = 0.98;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const {
    if (!(learning_rate > 0.0)) throw DataError("training: learning_rate must be positive");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) throw DataError("training: warmup_fraction must be in [0,1)");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw DataError("training: train split must be in (0,1)");
    if (batch_size == 0 || epochs == 0 || hidden == 0) throw DataError("training: batch_size, epochs and hidden must be positive");
    if (weight_decay < 0.0) throw DataError("training: weight_decay must be non-negative");
  }
};

struct AdamState {
  std::vector<double> m, v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One AdamW update with decoupled weight decay (theta -= lr * wd * theta).
inline void adamw_step(AwareModel& model, AdamState& state, std::span<const double> grad, double lr,
                       const TrainingConfig& cfg) {
  auto params = model.parameters();
  if (state.m.size() != params.size()) state = AdamState(params.size());
  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    double update = mhat / (std::sqrt(vhat) + cfg.epsilon);
    if (model.is_decayed(i)) update += cfg.weight_decay * params[i];
    params[i] -= lr * update;
  }
}

// Linear warmup to the peak rate, then linear decay to zero.
inline double scheduled_lr(const TrainingConfig& cfg, std::size_t step, std::size_t total_steps) {
  const auto warmup = static_cast<std::size_t>(std::floor(cfg.warmup_fraction * static_cast<double>(total_steps)));
  if (warmup > 0 && step < warmup)
    return cfg.learning_rate * static_cast<double>(step + 1) / static_cast<double>(warmup);
  const double remaining = static_cast<double>(total_steps - step);
  const double span = static_cast<double>(total_steps - warmup);
  return span <= 0.0 ? 0.0 : cfg.learning_rate * remaining / span;
}

struct EpochLog {
  std::size_t epoch = 0;
  double train_mse = 0.0;
  double validation_ppe = 0.0;
};

struct TrainingResult {
  AwareModel model;
  std::vector<EpochLog> log;
  double initial_train_mse = 0.0;
  double best_validation_ppe = 0.0;
  std::size_t best_epoch = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
};

inline std::vector<TrainingRow> training_rows(std::span<const CalibrationRecord> records) {
  std::vector<TrainingRow> rows;
  for (const auto& rec : records)
    for (const auto& f : rec.chunk_features)
      for (std::size_t k = 0; k < rec.ratios.size(); ++k) rows.push_back({f, rec.ratios[k], rec.retentions[k]});
  return rows;
}

// Context-level prediction: token-weighted mean over chunk predictions.
inline double context_prediction(const AwareModel& model, const CalibrationRecord& rec, double ratio) {
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < rec.chunk_features.size(); ++c) {
    const double w = static_cast<double>(c < rec.chunk_token_counts.size() ? rec.chunk_token_counts[c] : 1);
    num += w * model.predict(rec.chunk_features[c], ratio);
    den += w;
  }
  return den > 0.0 ? num / den : 0.5;
}

inline double aware_ppe(const AwareModel& model, std::span<const CalibrationRecord> records) {
  std::vector<double> pred, actual;
  for (const auto& rec : records)
    for (std::size_t k = 0; k < rec.ratios.size(); ++k) {
      pred.push_back(context_prediction(model, rec, rec.ratios[k]));
      actual.push_back(rec.retentions[k]);
    }
  return ppe(pred, actual);
}

// Seeded record-level split: train_fraction of records train, the rest
// validate. A single record is used for both.
inline std::pair<std::vector<CalibrationRecord>, std::vector<CalibrationRecord>> split_records(
    std::span<const CalibrationRecord> records, double train_fraction, std::uint64_t seed) {
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed ^ 0x5eedULL);
  rng.shuffle(std::span<std::size_t>(idx));
  std::size_t n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(records.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, records.size() > 1 ? records.size() - 1 : 1);
  std::vector<CalibrationRecord> train, val;
  for (std::size_t i = 0; i < idx.size(); ++i) (i < n_train ? train : val).push_back(records[idx[i]]);
  if (val.empty()) val = train;
  return {std::move(train), std::move(val)};
}

inline TrainingResult train_aware(std::span<const CalibrationRecord> records, const TrainingConfig& cfg) {
  cfg.validate();
  if (records.empty()) throw DataError("train_aware: empty dataset");
  auto [train, val] = split_records(records, cfg.train_fraction, cfg.seed);
  auto rows = training_rows(train);
  if (rows.empty()) throw DataError("train_aware: no training rows (records without ratios or chunks)");

  AwareModel model(cfg.hidden);
  {
    std::vector<double> mean(AwareModel::kInputs, 0.0), sq(AwareModel::kInputs, 0.0);
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        mean[i] += row.features[i];
        sq[i] += row.features[i] * row.features[i];
      }
      mean[kFeatureCount] += row.ratio;
      sq[kFeatureCount] += row.ratio * row.ratio;
    }
    const double n = static_cast<double>(rows.size());
    std::vector<double> scale(AwareModel::kInputs, 1.0);
    for (std::size_t i = 0; i < AwareModel::kInputs; ++i) {
      mean[i] /= n;
      const double var = std::max(0.0, sq[i] / n - mean[i] * mean[i]);
      const double sd = std::sqrt(var);
      scale[i] = sd > 1e-8 ? 1.0 / sd : 1.0;
    }
    model.set_input_normalization(std::move(mean), std::move(scale));
  }
  Rng rng(cfg.seed);
  model.init_xavier(rng);

  TrainingResult result;
  for (const auto& r : train) result.train_ids.push_back(r.record_id);
  for (const auto& r : val) result.validation_ids.push_back(r.record_id);
  result.initial_train_mse = mse_loss(model, rows);
  result.best_validation_ppe = aware_ppe(model, val);
  result.model = model;

  const std::size_t steps_per_epoch = (rows.size() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps = steps_per_epoch * cfg.epochs;
  AdamState state(model.parameter_count());
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<TrainingRow> batch;
  batch.reserve(cfg.batch_size);
  std::vector<double> grad;
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < steps_per_epoch; ++b, ++step) {
      batch.clear();
      const std::size_t lo = b * cfg.batch_size;
      const std::size_t hi = std::min(rows.size(), lo + cfg.batch_size);
      for (std::size_t i = lo; i < hi; ++i) batch.push_back(rows[order[i]]);
      const double loss = loss_and_gradient(model, batch, grad);
      if (!std::isfinite(loss))
        throw DataError("train_aware: non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                        std::to_string(step) + " (lr " + std::to_string(scheduled_lr(cfg, step, total_steps)) + ")");
      epoch_loss += loss * static_cast<double>(hi - lo);
      adamw_step(model, state, grad, scheduled_lr(cfg, step, total_steps), cfg);
    }
    EpochLog entry{epoch, epoch_loss / static_cast<double>(rows.size()), aware_ppe(model, val)};
    result.log.push_back(entry);
    if (entry.validation_ppe < result.best_validation_ppe) {
      result.best_validation_ppe = entry.validation_ppe;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

}  // namespace poc
