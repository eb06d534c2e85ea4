#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "poc/errors.hpp"
#include "poc/predictor.hpp"

namespace poc {

inline constexpr std::size_t kSearchDivisions = 19;  // 18 interior candidates per stage
inline constexpr std::size_t kSearchGridSize = kSearchDivisions * kSearchDivisions;

struct RatioPrediction {
  double ratio = 0.0;
  double retention = 0.0;
};

struct SearchResult {
  double r_star = 1.0;
  double predicted_retention = 0.0;
  bool feasible = false;
  std::vector<RatioPrediction> stage1_candidates;
  std::vector<RatioPrediction> stage2_candidates;
  std::size_t predictor_calls = 0;
  std::size_t evaluations = 0;
};

// Point m of the implicit two-stage grid, m / 361. Both stages draw their
// candidates from it so results compare exactly against brute force.
inline double search_grid_point(std::size_t m) {
  return static_cast<double>(m) / static_cast<double>(kSearchGridSize);
}

namespace detail {

inline std::vector<RatioPrediction> evaluate_batch(const BatchPredictor& predict, std::vector<double> ratios,
                                                   SearchResult& result) {
  auto preds = predict(ratios);
  ++result.predictor_calls;
  result.evaluations += ratios.size();
  if (preds.size() != ratios.size())
    throw DataError("two_stage_search: predictor returned " + std::to_string(preds.size()) + " values for " +
                    std::to_string(ratios.size()) + " ratios");
  std::vector<RatioPrediction> out(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!std::isfinite(preds[i])) throw DataError("two_stage_search: predictor returned a non-finite value");
    out[i] = {ratios[i], preds[i]};
  }
  return out;
}

}  // namespace detail

// Smallest ratio whose predicted retention meets `floor`, located by a coarse
// pass over i/19 and a fine pass over the bracketing interval.
inline SearchResult two_stage_search(const BatchPredictor& predict, double floor) {
  if (!(floor >= 0.0 && floor <= 1.0)) throw DataError("two_stage_search: floor must lie in [0,1]");
  constexpr std::size_t D = kSearchDivisions;
  SearchResult result;

  std::vector<double> coarse;
  for (std::size_t i = 1; i < D; ++i) coarse.push_back(search_grid_point(i * D));
  result.stage1_candidates = detail::evaluate_batch(predict, coarse, result);

  std::size_t k = 0;  // first feasible coarse index, 1-based; D means r = 1
  double pred_at_k = 0.0;
  for (std::size_t i = 1; i < D; ++i) {
    if (result.stage1_candidates[i - 1].retention >= floor) {
      k = i;
      pred_at_k = result.stage1_candidates[i - 1].retention;
      break;
    }
  }
  if (k == 0) {
    const auto full = detail::evaluate_batch(predict, {1.0}, result);
    result.stage1_candidates.push_back(full.front());
    if (full.front().retention < floor) {
      result.r_star = 1.0;
      result.predicted_retention = full.front().retention;
      result.feasible = false;
      return result;
    }
    k = D;
    pred_at_k = full.front().retention;
  }

  std::vector<double> fine;
  for (std::size_t j = 1; j < D; ++j) fine.push_back(search_grid_point((k - 1) * D + j));
  result.stage2_candidates = detail::evaluate_batch(predict, fine, result);

  result.feasible = true;
  result.r_star = search_grid_point(k * D);
  result.predicted_retention = pred_at_k;
  for (const auto& c : result.stage2_candidates) {
    if (c.retention >= floor) {
      result.r_star = c.ratio;
      result.predicted_retention = c.retention;
      break;
    }
  }
  return result;
}

}  // namespace poc
