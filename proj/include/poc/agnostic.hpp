#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "poc/dataset.hpp"
#include "poc/errors.hpp"
#include "poc/spline.hpp"

namespace poc {

struct CalibrationMeta {
  std::string dataset_id = "default";
  std::size_t sample_count = 0;
  std::size_t knot_count = 0;
};

// Average retention curve of a calibration set. Depends on the ratio only.
// Queries outside the knot span take the nearest knot's value; the spline
// itself is never extrapolated.
class AgnosticPredictor {
 public:
  AgnosticPredictor() = default;
  AgnosticPredictor(PerformanceCurve curve, CalibrationMeta meta) : curve_(std::move(curve)), meta_(std::move(meta)) {}

  const PerformanceCurve& curve() const noexcept { return curve_; }
  const CalibrationMeta& meta() const noexcept { return meta_; }

  double predict(double r) const { return curve_.eval(std::clamp(r, curve_.min_ratio(), curve_.max_ratio())); }

  std::vector<double> predict(std::span<const double> ratios) const {
    std::vector<double> out;
    out.reserve(ratios.size());
    for (double r : ratios) out.push_back(predict(r));
    return out;
  }

  nlohmann::json to_json() const {
    return {{"format", "poc-agnostic-predictor"},
            {"version", 1},
            {"dataset_id", meta_.dataset_id},
            {"sample_count", meta_.sample_count},
            {"knot_count", meta_.knot_count},
            {"knot_ratios", std::vector<double>(curve_.knot_ratios().begin(), curve_.knot_ratios().end())},
            {"knot_values", std::vector<double>(curve_.knot_values().begin(), curve_.knot_values().end())}};
  }

  static AgnosticPredictor from_json(const nlohmann::json& j) {
    try {
      if (j.at("format").get<std::string>() != "poc-agnostic-predictor") throw DataError("not an agnostic-predictor file");
      CalibrationMeta meta{j.value("dataset_id", std::string("default")), j.value("sample_count", std::size_t{0}),
                           j.value("knot_count", std::size_t{0})};
      return AgnosticPredictor(fit_spline(j.at("knot_ratios").get<std::vector<double>>(),
                                          j.at("knot_values").get<std::vector<double>>()),
                               meta);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("agnostic predictor: ") + e.what());
    }
  }

 private:
  PerformanceCurve curve_;
  CalibrationMeta meta_;
};

inline std::vector<double> ratios_union(std::span<const CalibrationRecord> records) {
  std::vector<double> out;
  for (const auto& r : records) out.insert(out.end(), r.ratios.begin(), r.ratios.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= 1e-9; }), out.end());
  return out;
}

// Mean retention per knot ratio across records, then a natural spline.
inline AgnosticPredictor calibrate_agnostic(std::span<const CalibrationRecord> records, std::vector<double> knot_ratios,
                                            std::string dataset_id = "default") {
  if (records.empty()) throw DataError("calibrate_agnostic: no calibration records");
  std::sort(knot_ratios.begin(), knot_ratios.end());
  std::vector<double> means(knot_ratios.size(), 0.0);
  for (const auto& rec : records) {
    for (std::size_t k = 0; k < knot_ratios.size(); ++k) {
      auto it = std::find_if(rec.ratios.begin(), rec.ratios.end(),
                             [&](double r) { return std::abs(r - knot_ratios[k]) <= 1e-9; });
      if (it == rec.ratios.end())
        throw DataError("calibrate_agnostic: record " + rec.record_id + " has no retention at ratio " +
                        std::to_string(knot_ratios[k]));
      means[k] += rec.retentions[static_cast<std::size_t>(it - rec.ratios.begin())];
    }
  }
  for (auto& m : means) m /= static_cast<double>(records.size());
  CalibrationMeta meta{std::move(dataset_id), records.size(), knot_ratios.size()};
  return AgnosticPredictor(fit_spline(std::move(knot_ratios), std::move(means)), std::move(meta));
}

}  // namespace poc
