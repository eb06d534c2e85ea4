#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "poc/errors.hpp"
#include "poc/features.hpp"
#include "poc/rng.hpp"

namespace poc {

// Context-aware retention regressor:
//   p(r) = sigmoid(w2 . tanh(W1 x + b1) + b2),  x = normalize(features ++ [r])
// All trainable parameters live in one flat vector: W1 (hidden x inputs,
// row-major), b1, w2, b2. The input shift/scale are fixed at training time.
class AwareModel {
 public:
  static constexpr std::size_t kInputs = kModelInputCount;

  AwareModel() : AwareModel(32) {}

  explicit AwareModel(std::size_t hidden)
      : hidden_(hidden),
        params_(hidden * kInputs + hidden + hidden + 1, 0.0),
        shift_(kInputs, 0.0),
        scale_(kInputs, 1.0) {
    if (hidden == 0) throw DataError("AwareModel: hidden width must be positive");
  }

  std::size_t hidden() const noexcept { return hidden_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  std::span<const double> input_shift() const noexcept { return shift_; }
  std::span<const double> input_scale() const noexcept { return scale_; }
  void set_input_normalization(std::vector<double> shift, std::vector<double> scale) {
    if (shift.size() != kInputs || scale.size() != kInputs) throw DataError("AwareModel: normalization size mismatch");
    shift_ = std::move(shift);
    scale_ = std::move(scale);
  }

  std::size_t w1_offset() const noexcept { return 0; }
  std::size_t b1_offset() const noexcept { return hidden_ * kInputs; }
  std::size_t w2_offset() const noexcept { return b1_offset() + hidden_; }
  std::size_t b2_offset() const noexcept { return w2_offset() + hidden_; }

  // Only matrix entries are decayed; biases are not.
  bool is_decayed(std::size_t i) const noexcept {
    return i < b1_offset() || (i >= w2_offset() && i < b2_offset());
  }

  double& w1(std::size_t h, std::size_t in) { return params_[h * kInputs + in]; }
  double w1(std::size_t h, std::size_t in) const { return params_[h * kInputs + in]; }
  double& b1(std::size_t h) { return params_[b1_offset() + h]; }
  double b1(std::size_t h) const { return params_[b1_offset() + h]; }
  double& w2(std::size_t h) { return params_[w2_offset() + h]; }
  double w2(std::size_t h) const { return params_[w2_offset() + h]; }
  double& b2() { return params_[b2_offset()]; }
  double b2() const { return params_[b2_offset()]; }

  void init_xavier(Rng& rng) {
    const double l1 = std::sqrt(6.0 / static_cast<double>(kInputs + hidden_));
    const double l2 = std::sqrt(6.0 / static_cast<double>(hidden_ + 1));
    std::fill(params_.begin(), params_.end(), 0.0);
    for (std::size_t h = 0; h < hidden_; ++h)
      for (std::size_t i = 0; i < kInputs; ++i) w1(h, i) = rng.uniform(-l1, l1);
    for (std::size_t h = 0; h < hidden_; ++h) w2(h) = rng.uniform(-l2, l2);
  }

  bool finite() const {
    return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); }) &&
           std::all_of(shift_.begin(), shift_.end(), [](double v) { return std::isfinite(v); }) &&
           std::all_of(scale_.begin(), scale_.end(), [](double v) { return std::isfinite(v); });
  }

  // Hidden pre-activation contribution of the features, shared by every
  // ratio queried for the same chunk.
  std::vector<double> feature_projection(const FeatureVector& features) const {
    std::vector<double> z(hidden_);
    for (std::size_t h = 0; h < hidden_; ++h) {
      double acc = b1(h);
      for (std::size_t i = 0; i < kFeatureCount; ++i) acc += w1(h, i) * ((features[i] - shift_[i]) * scale_[i]);
      z[h] = acc;
    }
    return z;
  }

  double predict_from_projection(std::span<const double> projection, double ratio) const {
    const double xr = (ratio - shift_[kFeatureCount]) * scale_[kFeatureCount];
    double o = b2();
    for (std::size_t h = 0; h < hidden_; ++h) o += w2(h) * std::tanh(projection[h] + w1(h, kFeatureCount) * xr);
    return sigmoid(o);
  }

  double predict(const FeatureVector& features, double ratio) const {
    const auto z = feature_projection(features);
    return predict_from_projection(z, ratio);
  }

  static double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  }

  nlohmann::json to_json(const std::string& feature_hash) const {
    nlohmann::json j;
    j["format"] = "poc-aware-model";
    j["version"] = 1;
    j["input_dim"] = kInputs;
    j["hidden"] = hidden_;
    j["activation"] = "tanh";
    j["feature_config_hash"] = feature_hash;
    j["w1"] = std::vector<double>(params_.begin(), params_.begin() + static_cast<std::ptrdiff_t>(b1_offset()));
    j["b1"] = std::vector<double>(params_.begin() + static_cast<std::ptrdiff_t>(b1_offset()),
                                  params_.begin() + static_cast<std::ptrdiff_t>(w2_offset()));
    j["w2"] = std::vector<double>(params_.begin() + static_cast<std::ptrdiff_t>(w2_offset()),
                                  params_.begin() + static_cast<std::ptrdiff_t>(b2_offset()));
    j["b2"] = b2();
    j["input_shift"] = shift_;
    j["input_scale"] = scale_;
    return j;
  }

  static AwareModel from_json(const nlohmann::json& j, const std::string& expected_feature_hash) {
    try {
      if (j.at("format").get<std::string>() != "poc-aware-model") throw DataError("not an aware-model file");
      if (j.at("version").get<int>() != 1) throw DataError("unsupported aware-model version");
      if (j.at("input_dim").get<std::size_t>() != kInputs) throw DataError("aware-model input width mismatch");
      const auto hash = j.at("feature_config_hash").get<std::string>();
      if (hash != expected_feature_hash)
        throw DataError("aware-model feature_config_hash " + hash + " does not match extractor " + expected_feature_hash);
      AwareModel m(j.at("hidden").get<std::size_t>());
      const auto w1v = j.at("w1").get<std::vector<double>>();
      const auto b1v = j.at("b1").get<std::vector<double>>();
      const auto w2v = j.at("w2").get<std::vector<double>>();
      if (w1v.size() != m.hidden() * kInputs || b1v.size() != m.hidden() || w2v.size() != m.hidden())
        throw DataError("aware-model weight shapes do not match hidden width");
      std::copy(w1v.begin(), w1v.end(), m.params_.begin());
      std::copy(b1v.begin(), b1v.end(), m.params_.begin() + static_cast<std::ptrdiff_t>(m.b1_offset()));
      std::copy(w2v.begin(), w2v.end(), m.params_.begin() + static_cast<std::ptrdiff_t>(m.w2_offset()));
      m.b2() = j.at("b2").get<double>();
      m.set_input_normalization(j.at("input_shift").get<std::vector<double>>(),
                                j.at("input_scale").get<std::vector<double>>());
      if (!m.finite()) throw DataError("aware-model contains non-finite weights");
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("aware-model: ") + e.what());
    }
  }

 private:
  std::size_t hidden_;
  std::vector<double> params_;
  std::vector<double> shift_;
  std::vector<double> scale_;
};

// Retention predictions for several ratios of one chunk. The feature
// projection is computed once and reused for every ratio.
inline std::vector<double> aware_predict(const AwareModel& model, const FeatureVector& features,
                                         std::span<const double> ratios) {
  for (double f : features)
    if (!std::isfinite(f)) throw DataError("aware_predict: non-finite feature");
  const auto z = model.feature_projection(features);
  std::vector<double> out;
  out.reserve(ratios.size());
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) throw DataError("aware_predict: ratio outside [0,1]");
    out.push_back(model.predict_from_projection(z, r));
  }
  return out;
}

struct TrainingRow {
  FeatureVector features{};
  double ratio = 0.0;
  double target = 0.0;
};

// Mean squared error over `rows` and its gradient w.r.t. the flat parameter
// vector (written into `grad`, which is resized).
inline double loss_and_gradient(const AwareModel& model, std::span<const TrainingRow> rows, std::vector<double>& grad) {
  grad.assign(model.parameter_count(), 0.0);
  if (rows.empty()) return 0.0;
  const std::size_t H = model.hidden();
  const auto shift = model.input_shift();
  const auto scale = model.input_scale();
  const double inv_b = 1.0 / static_cast<double>(rows.size());
  std::array<double, AwareModel::kInputs> x{};
  std::vector<double> hid(H);
  double loss = 0.0;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) x[i] = (row.features[i] - shift[i]) * scale[i];
    x[kFeatureCount] = (row.ratio - shift[kFeatureCount]) * scale[kFeatureCount];
    double o = model.b2();
    for (std::size_t h = 0; h < H; ++h) {
      double z = model.b1(h);
      for (std::size_t i = 0; i < AwareModel::kInputs; ++i) z += model.w1(h, i) * x[i];
      hid[h] = std::tanh(z);
      o += model.w2(h) * hid[h];
    }
    const double p = AwareModel::sigmoid(o);
    const double err = p - row.target;
    loss += err * err * inv_b;
    const double d_o = 2.0 * err * inv_b * p * (1.0 - p);
    grad[model.b2_offset()] += d_o;
    for (std::size_t h = 0; h < H; ++h) {
      grad[model.w2_offset() + h] += d_o * hid[h];
      const double d_z = d_o * model.w2(h) * (1.0 - hid[h] * hid[h]);
      grad[model.b1_offset() + h] += d_z;
      double* g = grad.data() + h * AwareModel::kInputs;
      for (std::size_t i = 0; i < AwareModel::kInputs; ++i) g[i] += d_z * x[i];
    }
  }
  return loss;
}

inline double mse_loss(const AwareModel& model, std::span<const TrainingRow> rows) {
  if (rows.empty()) return 0.0;
  double loss = 0.0;
  for (const auto& row : rows) {
    const double err = model.predict(row.features, row.ratio) - row.target;
    loss += err * err;
  }
  return loss / static_cast<double>(rows.size());
}

}  // namespace poc
