#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <optional>

#include <json.hpp>

#include "poc/compressor.hpp"
#include "poc/dataset.hpp"
#include "poc/errors.hpp"
#include "poc/features.hpp"
#include "poc/importance.hpp"
#include "poc/metrics.hpp"
#include "poc/predictor.hpp"
#include "poc/reader.hpp"
#include "poc/rng.hpp"
#include "poc/search.hpp"
#include "poc/tokenizer.hpp"

namespace poc {

// ---------------------------------------------------------------------------
// Performance-oriented compression of one context.

struct ChunkDecision {
  std::size_t chunk_index = 0;
  std::size_t tokens = 0;
  double r_star = 1.0;
  double predicted_retention = 0.0;
  bool feasible = false;
  std::size_t kept = 0;
};

struct PocReport {
  double floor = 0.0;
  std::string predictor_kind;
  std::vector<ChunkDecision> chunks;
  std::size_t total_tokens = 0;
  std::size_t kept_tokens = 0;

  double overall_ratio() const {
    return total_tokens == 0 ? 1.0 : static_cast<double>(kept_tokens) / static_cast<double>(total_tokens);
  }

  // Token-weighted mean of per-chunk predicted retentions.
  double predicted_retention() const {
    if (total_tokens == 0) return 1.0;
    double acc = 0.0;
    for (const auto& c : chunks) acc += static_cast<double>(c.tokens) * c.predicted_retention;
    return acc / static_cast<double>(total_tokens);
  }

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : chunks)
      cs.push_back({{"chunk_index", c.chunk_index},
                    {"tokens", c.tokens},
                    {"r_star", c.r_star},
                    {"predicted_retention", c.predicted_retention},
                    {"feasible", c.feasible},
                    {"kept", c.kept}});
    return {{"floor", floor},         {"predictor_kind", predictor_kind}, {"chunks", cs},
            {"total_tokens", total_tokens}, {"kept_tokens", kept_tokens},   {"overall_ratio", overall_ratio()}};
  }
};

struct PocResult {
  std::string text;
  PocReport report;
  CompressedContext compressed;
};

struct PocOptions {
  const ImportanceScorer* scorer = nullptr;
  const Compressor* compressor = nullptr;
  std::size_t chunk_size = kDefaultChunkSize;
  std::string context_ref;
};

// chunk -> predict -> search -> compress, independently per chunk.
inline PocResult poc_compress(const TokenizedContext& ctx, double floor, const RetentionPredictor& predictor,
                              const PocOptions& opt = {}) {
  if (!(floor >= 0.0 && floor <= 1.0)) throw DataError("poc_compress: floor must lie in [0,1]");
  static const ImportanceScorer default_scorer;
  static const TopKCompressor default_compressor;
  const auto& scorer = opt.scorer ? *opt.scorer : default_scorer;
  const auto& compressor = opt.compressor ? *opt.compressor : default_compressor;

  const auto chunks = chunk_context(ctx, opt.chunk_size, opt.context_ref);
  std::vector<ImportanceScores> scores;
  std::vector<CompressionRatio> ratios;
  PocReport report;
  report.floor = floor;
  report.predictor_kind = predictor.kind();
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    scores.push_back(scorer.score(chunks[c]));
    const auto predict = predictor.bind(ChunkInput{chunks[c], scores.back(), c});
    const auto found = two_stage_search(predict, floor);
    ratios.emplace_back(found.r_star);
    report.chunks.push_back({c, chunks[c].size(), found.r_star, found.predicted_retention, found.feasible, 0});
  }
  auto compressed = compress_chunks(chunks, scores, ratios, compressor);
  for (std::size_t c = 0; c < chunks.size(); ++c) report.chunks[c].kept = compressed.chunks[c].kept_indices.size();
  report.total_tokens = compressed.source_tokens;
  report.kept_tokens = compressed.kept_tokens();
  PocResult out;
  out.text = compressed.text();
  out.report = std::move(report);
  out.compressed = std::move(compressed);
  return out;
}

inline PocResult poc_compress(std::string_view text, double floor, const RetentionPredictor& predictor,
                              const PocOptions& opt = {}) {
  return poc_compress(tokenize(text), floor, predictor, opt);
}

// ---------------------------------------------------------------------------
// Calibration data collection.

struct RatioSampler {
  enum class Kind { grid, uniform };
  Kind kind = Kind::grid;
  std::size_t n = 10;
  std::uint64_t seed = 0;

  // Ratios for the record at position `index`; always contains r = 1.
  std::vector<double> sample(std::size_t index) const {
    std::vector<double> out;
    if (kind == Kind::grid) {
      for (std::size_t i = 1; i <= n; ++i) out.push_back(static_cast<double>(i) / static_cast<double>(n));
    } else {
      Rng rng(seed ^ (0xA5A5A5A5ULL + index * 0x9E3779B97F4A7C15ULL));
      for (std::size_t i = 0; i < n; ++i) out.push_back(rng.uniform());
      std::sort(out.begin(), out.end());
    }
    if (out.empty() || out.back() != 1.0) out.push_back(1.0);
    return out;
  }
};

struct CollectionOptions {
  RatioSampler sampler;
  Metric metric = Metric::f1;
  std::size_t workers = 1;
  std::size_t chunk_size = kDefaultChunkSize;
  const ImportanceScorer* scorer = nullptr;
  const Compressor* compressor = nullptr;
  FeatureConfig features;
  std::string output_path;  // empty: keep in memory only
  bool resume = true;
  OutputHeader header{"calibration", "", 0};
};

struct CollectionResult {
  std::vector<CalibrationRecord> records;
  std::vector<std::pair<std::string, std::string>> failed;  // id, reason
  std::size_t skipped_existing = 0;
  std::size_t reader_calls = 0;
};

// One record: baseline at r = 1 once, then each sampled ratio.
inline CalibrationRecord collect_record(const DatasetRecord& rec, std::span<const double> ratios,
                                        const ReaderOracle& reader, const CollectionOptions& opt,
                                        std::size_t* reader_calls = nullptr) {
  if (rec.context.empty()) throw DataError("collect: record " + rec.id + " has an empty context");
  static const ImportanceScorer default_scorer;
  static const TopKCompressor default_compressor;
  const auto& scorer = opt.scorer ? *opt.scorer : default_scorer;
  const auto& compressor = opt.compressor ? *opt.compressor : default_compressor;

  const auto ctx = tokenize(rec.context);
  const auto chunks = chunk_context(ctx, opt.chunk_size, rec.id);
  if (chunks.empty()) throw DataError("collect: record " + rec.id + " has no tokens");
  std::vector<ImportanceScores> scores;
  CalibrationRecord out;
  out.record_id = rec.id;
  out.dataset_tag = rec.dataset_tag;
  out.metric_name = std::string(metric_name(opt.metric));
  for (const auto& c : chunks) {
    scores.push_back(scorer.score(c));
    out.chunk_features.push_back(extract_features(c, scores.back(), opt.features));
    out.chunk_token_counts.push_back(c.size());
  }

  std::size_t calls = 0;
  const TaskScore baseline = score_task(opt.metric, reader.query(join_tokens(ctx.tokens), rec.instruction), rec.answer);
  ++calls;
  out.baseline_score = baseline.value;
  for (double r : ratios) {
    TaskScore at_r = baseline;
    if (r != 1.0) {
      const std::vector<CompressionRatio> per_chunk(chunks.size(), CompressionRatio(r));
      const auto compressed = compress_chunks(chunks, scores, per_chunk, compressor);
      at_r = score_task(opt.metric, reader.query(compressed.text(), rec.instruction), rec.answer);
      ++calls;
    }
    out.ratios.push_back(r);
    out.raw_scores.push_back(at_r.value);
    out.retentions.push_back(retention(at_r, baseline));
  }
  if (reader_calls) *reader_calls += calls;
  return out;
}

inline std::set<std::string> existing_record_ids(const std::string& path) {
  std::set<std::string> ids;
  if (path.empty() || !std::filesystem::exists(path)) return ids;
  for (const auto& j : read_jsonl(path))
    if (j.contains("record_id")) ids.insert(j["record_id"].get<std::string>());
  return ids;
}

// Records are processed by up to `workers` threads; results are written in
// dataset order through one writer, so output does not depend on timing.
inline CollectionResult collect_calibration(std::span<const DatasetRecord> dataset, const ReaderOracle& reader,
                                            const CollectionOptions& opt) {
  if (dataset.empty()) throw DataError("collect_calibration: empty dataset");
  CollectionResult result;
  const auto done = opt.resume ? existing_record_ids(opt.output_path) : std::set<std::string>{};

  std::ofstream out;
  if (!opt.output_path.empty()) {
    const bool fresh = done.empty();
    out.open(opt.output_path, std::ios::binary | (fresh ? std::ios::trunc : std::ios::app));
    if (!out) throw IoError("cannot write " + opt.output_path);
    if (fresh) out << opt.header.to_json().dump() << '\n';
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (done.contains(dataset[i].id)) {
      ++result.skipped_existing;
      continue;
    }
    todo.push_back(i);
  }

  struct Outcome {
    std::optional<CalibrationRecord> record;
    std::string error;
    std::size_t calls = 0;
  };
  auto run_one = [&](std::size_t i) {
    Outcome o;
    try {
      o.record = collect_record(dataset[i], opt.sampler.sample(i), reader, opt, &o.calls);
    } catch (const ReaderError& e) {
      o.error = e.what();
    } catch (const DataError& e) {
      o.error = e.what();
    }
    return o;
  };

  const std::size_t workers = std::max<std::size_t>(1, opt.workers);
  for (std::size_t lo = 0; lo < todo.size(); lo += workers) {
    const std::size_t hi = std::min(todo.size(), lo + workers);
    std::vector<Outcome> batch(hi - lo);
    if (workers == 1) {
      batch[0] = run_one(todo[lo]);
    } else {
      std::vector<std::future<Outcome>> futures;
      for (std::size_t t = lo; t < hi; ++t) futures.push_back(std::async(std::launch::async, run_one, todo[t]));
      for (std::size_t t = lo; t < hi; ++t) batch[t - lo] = futures[t - lo].get();
    }
    for (std::size_t t = lo; t < hi; ++t) {
      auto& o = batch[t - lo];
      result.reader_calls += o.calls;
      if (!o.record) {
        result.failed.emplace_back(dataset[todo[t]].id, o.error);
        continue;
      }
      if (out.is_open()) {
        out << to_json(*o.record).dump() << '\n';
        out.flush();
        if (!out) throw IoError("write failed: " + opt.output_path);
      }
      result.records.push_back(std::move(*o.record));
    }
  }
  return result;
}

}  // namespace poc
