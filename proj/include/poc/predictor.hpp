#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "poc/agnostic.hpp"
#include "poc/aware_model.hpp"
#include "poc/features.hpp"
#include "poc/tokenizer.hpp"

namespace poc {

// Maps a batch of candidate ratios to predicted retentions for one chunk.
using BatchPredictor = std::function<std::vector<double>(std::span<const double>)>;

struct ChunkInput {
  const Chunk& chunk;
  std::span<const double> scores;
  std::size_t chunk_index = 0;
};

// Per-chunk retention predictor. bind() does the per-chunk work once; the
// returned function is then queried with ratio batches by the search.
class RetentionPredictor {
 public:
  virtual ~RetentionPredictor() = default;
  virtual BatchPredictor bind(const ChunkInput& input) const = 0;
  virtual std::string kind() const = 0;
};

class AgnosticRetentionPredictor final : public RetentionPredictor {
 public:
  explicit AgnosticRetentionPredictor(AgnosticPredictor p) : p_(std::make_shared<AgnosticPredictor>(std::move(p))) {}

  BatchPredictor bind(const ChunkInput&) const override {
    return [p = p_](std::span<const double> ratios) { return p->predict(ratios); };
  }
  std::string kind() const override { return "agnostic"; }

 private:
  std::shared_ptr<const AgnosticPredictor> p_;
};

class AwareRetentionPredictor final : public RetentionPredictor {
 public:
  explicit AwareRetentionPredictor(AwareModel model, FeatureConfig features = {})
      : model_(std::make_shared<AwareModel>(std::move(model))), features_(std::move(features)) {}

  BatchPredictor bind(const ChunkInput& input) const override {
    const auto f = extract_features(input.chunk, input.scores, features_);
    return [m = model_, f](std::span<const double> ratios) { return aware_predict(*m, f, ratios); };
  }
  std::string kind() const override { return "aware"; }

  const AwareModel& model() const noexcept { return *model_; }

 private:
  std::shared_ptr<const AwareModel> model_;
  FeatureConfig features_;
};

// Adapter for ad-hoc predictors (oracles, test fixtures).
class FunctionPredictor final : public RetentionPredictor {
 public:
  using Factory = std::function<BatchPredictor(const ChunkInput&)>;

  FunctionPredictor(std::string kind, Factory factory) : kind_(std::move(kind)), factory_(std::move(factory)) {}

  BatchPredictor bind(const ChunkInput& input) const override { return factory_(input); }
  std::string kind() const override { return kind_; }

 private:
  std::string kind_;
  Factory factory_;
};

}  // namespace poc
