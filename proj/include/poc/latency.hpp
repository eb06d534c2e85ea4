#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "poc/aware_model.hpp"
#include "poc/compressor.hpp"
#include "poc/features.hpp"
#include "poc/importance.hpp"
#include "poc/pipeline.hpp"
#include "poc/predictor.hpp"
#include "poc/search.hpp"
#include "poc/synthetic.hpp"

namespace poc {

enum class BenchComponent { predictor, compressor, pipeline };

inline std::string_view bench_component_name(BenchComponent c) {
  switch (c) {
    case BenchComponent::predictor: return "predictor";
    case BenchComponent::compressor: return "compressor";
    case BenchComponent::pipeline: return "pipeline";
  }
  return "?";
}

inline BenchComponent parse_bench_component(std::string_view s) {
  if (s == "predictor") return BenchComponent::predictor;
  if (s == "compressor") return BenchComponent::compressor;
  if (s == "pipeline") return BenchComponent::pipeline;
  throw DataError("unknown bench component '" + std::string(s) + "'");
}

struct LatencyStats {
  double mean_ms = 0.0;
  double std_ms = 0.0;
  std::size_t runs = 0;
  std::vector<double> samples_ms;
};

inline LatencyStats summarize_latency(std::vector<double> samples_ms) {
  LatencyStats s;
  s.runs = samples_ms.size();
  if (s.runs == 0) return s;
  for (double v : samples_ms) s.mean_ms += v;
  s.mean_ms /= static_cast<double>(s.runs);
  if (s.runs > 1) {
    double var = 0.0;
    for (double v : samples_ms) var += (v - s.mean_ms) * (v - s.mean_ms);
    s.std_ms = std::sqrt(var / static_cast<double>(s.runs - 1));
  }
  s.samples_ms = std::move(samples_ms);
  return s;
}

// Wall-clock timing of `fn` over `runs` calls after `warmup` untimed calls.
inline LatencyStats measure_latency(const std::function<void()>& fn, std::size_t runs, std::size_t warmup = 10) {
  for (std::size_t i = 0; i < warmup; ++i) fn();
  std::vector<double> samples;
  samples.reserve(runs);
  for (std::size_t i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return summarize_latency(std::move(samples));
}

// Keeps results observable so the optimizer cannot drop the timed work.
inline volatile double bench_sink = 0.0;

struct BenchFixture {
  SyntheticSample sample;
  TokenizedContext ctx;
  ImportanceScorer scorer;
  AwareModel model;

  explicit BenchFixture(std::size_t chunk_tokens, std::uint64_t seed = 7) {
    SyntheticTaskConfig cfg;
    cfg.context_length = chunk_tokens;
    cfg.chunk_size = chunk_tokens;
    cfg.needle_length = std::min<std::size_t>(5, chunk_tokens > 4 ? chunk_tokens - 4 : 1);
    cfg.seed = seed;
    sample = gen_synthetic(cfg);
    ctx = tokenize(sample.record.context);
    Rng rng(seed);
    model = AwareModel(32);
    model.init_xavier(rng);
  }
};

// Timed work for one component on the first chunk of the fixture.
class BenchTask {
 public:
  BenchTask(BenchComponent component, std::size_t chunk_tokens) : component_(component), fx_(chunk_tokens) {
    chunks_ = chunk_context(fx_.ctx, chunk_tokens);
    scores_ = fx_.scorer.score(chunks_.front());
    for (std::size_t i = 1; i < kSearchDivisions; ++i) candidates_.push_back(search_grid_point(i * kSearchDivisions));
  }

  void operator()() {
    const Chunk& chunk = chunks_.front();
    switch (component_) {
      case BenchComponent::predictor: {
        // Feature extraction plus one batched forward pass over 18 ratios.
        const auto f = extract_features(chunk, scores_);
        bench_sink = bench_sink + aware_predict(fx_.model, f, candidates_).back();
        return;
      }
      case BenchComponent::compressor: {
        const auto s = fx_.scorer.score(chunk);
        bench_sink = bench_sink + static_cast<double>(compress_chunk(chunk, s, CompressionRatio(0.5)).tokens.size());
        return;
      }
      case BenchComponent::pipeline: {
        const AwareRetentionPredictor predictor(fx_.model);
        bench_sink = bench_sink + poc_compress(fx_.ctx, 0.9, predictor).report.overall_ratio();
        return;
      }
    }
  }

 private:
  BenchComponent component_;
  BenchFixture fx_;
  std::vector<Chunk> chunks_;
  std::vector<double> scores_;
  std::vector<double> candidates_;
};

// Round-robin timing: every timed round calls each component once, so slow
// phases of the machine land on all components alike.
inline std::vector<LatencyStats> latency_bench_interleaved(std::span<const BenchComponent> components,
                                                           std::size_t chunk_tokens = kDefaultChunkSize,
                                                           std::size_t runs = 100, std::size_t warmup = 10) {
  if (chunk_tokens < 5) throw DataError("latency_bench: chunk_tokens must be at least 5");
  std::vector<BenchTask> tasks;
  tasks.reserve(components.size());
  for (auto c : components) tasks.emplace_back(c, chunk_tokens);
  for (std::size_t i = 0; i < warmup; ++i)
    for (auto& t : tasks) t();
  std::vector<std::vector<double>> samples(tasks.size());
  for (auto& v : samples) v.reserve(runs);
  for (std::size_t i = 0; i < runs; ++i)
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      tasks[k]();
      const auto t1 = std::chrono::steady_clock::now();
      samples[k].push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
  std::vector<LatencyStats> out;
  for (auto& v : samples) out.push_back(summarize_latency(std::move(v)));
  return out;
}

inline LatencyStats latency_bench(BenchComponent component, std::size_t chunk_tokens = kDefaultChunkSize,
                                  std::size_t runs = 100, std::size_t warmup = 10) {
  const BenchComponent one[] = {component};
  return std::move(latency_bench_interleaved(one, chunk_tokens, runs, warmup).front());
}

inline nlohmann::json latency_json(BenchComponent c, std::size_t chunk_tokens, const LatencyStats& s) {
  return {{"component", bench_component_name(c)},
          {"chunk_tokens", chunk_tokens},
          {"runs", s.runs},
          {"mean_ms", s.mean_ms},
          {"std_ms", s.std_ms},
          {"hardware_note", "single thread; " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads available"}};
}

}  // namespace poc
