#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "poc/compressor.hpp"
#include "poc/dataset.hpp"
#include "poc/errors.hpp"
#include "poc/metrics.hpp"
#include "poc/parallel.hpp"
#include "poc/pipeline.hpp"
#include "poc/predictor.hpp"
#include "poc/reader.hpp"
#include "poc/spline.hpp"

namespace poc {

// PoC with a retention predictor: the sweep values are performance floors.
struct PocPolicy {
  const RetentionPredictor* predictor = nullptr;
};

// Budget-oriented baseline: the sweep values are compression ratios.
struct FixedRatioPolicy {};

using ParPolicy = std::variant<PocPolicy, FixedRatioPolicy>;

struct SweepPoint {
  double setting = 0.0;  // floor or fixed ratio
  double mean_ratio = 0.0;
  double mean_score = 0.0;
};

struct ParResult {
  std::vector<SweepPoint> sweep;  // sorted by setting
  SweepPoint anchor_zero;
  SweepPoint anchor_one;
  PerformanceCurve curve;
  double par_value = 0.0;

  nlohmann::json to_json() const {
    nlohmann::json sw = nlohmann::json::array();
    for (const auto& p : sweep) sw.push_back({{"setting", p.setting}, {"mean_ratio", p.mean_ratio}, {"mean_score", p.mean_score}});
    return {{"sweep", sw},
            {"anchor_zero_score", anchor_zero.mean_score},
            {"anchor_one_score", anchor_one.mean_score},
            {"knot_ratios", std::vector<double>(curve.knot_ratios().begin(), curve.knot_ratios().end())},
            {"knot_scores", std::vector<double>(curve.knot_values().begin(), curve.knot_values().end())},
            {"par_value", par_value}};
  }
};

struct ParOptions {
  Metric metric = Metric::f1;
  std::size_t workers = 1;
  std::size_t chunk_size = kDefaultChunkSize;
  const ImportanceScorer* scorer = nullptr;
  const Compressor* compressor = nullptr;
  double merge_tolerance = 1e-9;
};

namespace detail {

struct PreparedRecord {
  TokenizedContext ctx;
  std::vector<Chunk> chunks;
  std::vector<ImportanceScores> scores;
};

inline SweepPoint run_setting(std::span<const DatasetRecord> dataset, std::span<const PreparedRecord> prepared,
                              const ParPolicy& policy, double setting, bool force_fixed, const ReaderOracle& reader,
                              const ParOptions& opt) {
  static const TopKCompressor default_compressor;
  const auto& compressor = opt.compressor ? *opt.compressor : default_compressor;
  struct One {
    double ratio = 0.0, score = 0.0;
  };
  const auto per = parallel_map(dataset.size(), opt.workers, [&](std::size_t i) {
    const auto& p = prepared[i];
    std::vector<CompressionRatio> ratios;
    if (!force_fixed && std::holds_alternative<PocPolicy>(policy)) {
      const auto* predictor = std::get<PocPolicy>(policy).predictor;
      for (std::size_t c = 0; c < p.chunks.size(); ++c) {
        const auto predict = predictor->bind(ChunkInput{p.chunks[c], p.scores[c], c});
        ratios.emplace_back(two_stage_search(predict, setting).r_star);
      }
    } else {
      ratios.assign(p.chunks.size(), CompressionRatio(setting));
    }
    const auto compressed = compress_chunks(p.chunks, p.scores, ratios, compressor);
    const auto answer = reader.query(compressed.text(), dataset[i].instruction);
    return One{compressed.overall_ratio(), score_task(opt.metric, answer, dataset[i].answer).value};
  });
  SweepPoint out{setting, 0.0, 0.0};
  for (const auto& o : per) {
    out.mean_ratio += o.ratio;
    out.mean_score += o.score;
  }
  out.mean_ratio /= static_cast<double>(per.size());
  out.mean_score /= static_cast<double>(per.size());
  return out;
}

}  // namespace detail

// Sweeps the policy over `settings`, anchors the curve with direct
// evaluations at r = 0 and r = 1, merges coincident average ratios, fits a
// natural spline through (mean ratio, mean raw score) and integrates it over
// [0,1].
inline ParResult evaluate_par(const ParPolicy& policy, std::span<const DatasetRecord> dataset,
                              std::vector<double> settings, const ReaderOracle& reader, const ParOptions& opt = {}) {
  if (dataset.empty()) throw DataError("evaluate_par: empty dataset");
  if (settings.empty()) throw DataError("evaluate_par: empty floor grid");
  if (std::holds_alternative<PocPolicy>(policy) && !std::get<PocPolicy>(policy).predictor)
    throw DataError("evaluate_par: PoC policy without a predictor");
  for (double s : settings)
    if (!(s >= 0.0 && s <= 1.0)) throw DataError("evaluate_par: sweep values must lie in [0,1]");
  std::sort(settings.begin(), settings.end());
  settings.erase(std::unique(settings.begin(), settings.end()), settings.end());

  static const ImportanceScorer default_scorer;
  const auto& scorer = opt.scorer ? *opt.scorer : default_scorer;
  std::vector<detail::PreparedRecord> prepared(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto& p = prepared[i];
    p.ctx = tokenize(dataset[i].context);
    p.chunks = chunk_context(p.ctx, opt.chunk_size, dataset[i].id);
    if (p.chunks.empty()) throw DataError("evaluate_par: record " + dataset[i].id + " has no tokens");
    for (const auto& c : p.chunks) p.scores.push_back(scorer.score(c));
  }

  ParResult result;
  for (double s : settings) result.sweep.push_back(detail::run_setting(dataset, prepared, policy, s, false, reader, opt));
  result.anchor_zero = detail::run_setting(dataset, prepared, policy, 0.0, true, reader, opt);
  result.anchor_one = detail::run_setting(dataset, prepared, policy, 1.0, true, reader, opt);

  std::vector<SweepPoint> sweep_by_ratio = result.sweep;
  std::sort(sweep_by_ratio.begin(), sweep_by_ratio.end(),
            [](const SweepPoint& a, const SweepPoint& b) { return a.mean_ratio < b.mean_ratio; });
  const bool collapsed = sweep_by_ratio.back().mean_ratio - sweep_by_ratio.front().mean_ratio <= opt.merge_tolerance;
  if (settings.size() >= 2 && collapsed)
    throw DataError("evaluate_par: degenerate sweep, all " + std::to_string(settings.size()) +
                    " settings collapse to average ratio " + std::to_string(sweep_by_ratio.front().mean_ratio));

  std::vector<SweepPoint> pts = sweep_by_ratio;
  pts.push_back(result.anchor_zero);
  pts.push_back(result.anchor_one);
  std::stable_sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.mean_ratio < b.mean_ratio; });
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < pts.size() && pts[j].mean_ratio - pts[i].mean_ratio <= opt.merge_tolerance) sum += pts[j++].mean_score;
    xs.push_back(pts[i].mean_ratio);
    ys.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  // Anchors pin the span to exactly [0,1].
  xs.front() = 0.0;
  xs.back() = 1.0;
  if (xs.size() < 2) throw DataError("evaluate_par: fewer than 2 distinct average ratios");
  result.curve = fit_spline(xs, ys);
  result.par_value = result.curve.integrate(0.0, 1.0);
  return result;
}

}  // namespace poc
