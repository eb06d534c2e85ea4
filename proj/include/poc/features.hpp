#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "poc/errors.hpp"
#include "poc/importance.hpp"
#include "poc/rng.hpp"
#include "poc/tokenizer.hpp"

namespace poc {

inline constexpr std::size_t kFeatureCount = 18;
inline constexpr std::size_t kModelInputCount = kFeatureCount + 1;  // features + query ratio

// Layout:
//   [0, 10)  importance quantiles at 0.05, 0.15, ..., 0.95
//   10 mean, 11 max, 12 histogram entropy (10 bins, normalized), 13 Gini
//   14 chunk length / reference chunk size
//   15..17 share of total importance held by the top 10% / 25% / 50% tokens
using FeatureVector = std::array<double, kFeatureCount>;

struct FeatureConfig {
  std::string version = "features-v1";
  std::size_t reference_chunk_size = kDefaultChunkSize;
  std::size_t histogram_bins = 10;

  std::string fingerprint() const {
    return version + '|' + std::to_string(reference_chunk_size) + '|' + std::to_string(histogram_bins);
  }
};

// Hash of everything that determines what a feature vector means; serialized
// models carry it and loading refuses a mismatch.
inline std::string feature_config_hash(const FeatureConfig& features, const ImportanceConfig& importance) {
  const auto h = fnv1a(importance.fingerprint(), fnv1a(features.fingerprint()));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

// Linear interpolation between order statistics.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

// Order-free: depends only on the multiset of scores and the token count.
inline FeatureVector extract_features(std::span<const double> scores, const FeatureConfig& config = {}) {
  if (scores.empty()) throw DataError("extract_features: empty chunk");
  for (double s : scores)
    if (!std::isfinite(s)) throw DataError("extract_features: non-finite importance score");

  const std::size_t n = scores.size();
  const double nd = static_cast<double>(n);
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());

  FeatureVector f{};
  for (std::size_t i = 0; i < 10; ++i) f[i] = detail::quantile_sorted(sorted, (static_cast<double>(i) + 0.5) / 10.0);

  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  f[10] = total / nd;
  f[11] = sorted.back();

  const std::size_t bins = std::max<std::size_t>(config.histogram_bins, 2);
  std::vector<std::size_t> hist(bins, 0);
  for (double s : sorted) {
    auto b = static_cast<std::size_t>(std::clamp(s, 0.0, 1.0) * static_cast<double>(bins));
    ++hist[std::min(b, bins - 1)];
  }
  double entropy = 0.0;
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / nd;
    entropy -= p * std::log(p);
  }
  f[12] = entropy / std::log(static_cast<double>(bins));

  // Gini over ascending order statistics.
  if (total > 0.0) {
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) weighted += static_cast<double>(i + 1) * sorted[i];
    f[13] = std::max(0.0, 2.0 * weighted / (nd * total) - (nd + 1.0) / nd);
  } else {
    f[13] = 0.0;
  }

  f[14] = nd / static_cast<double>(std::max<std::size_t>(config.reference_chunk_size, 1));

  constexpr std::array<std::size_t, 3> percents{10, 25, 50};
  for (std::size_t j = 0; j < percents.size(); ++j) {
    const auto top = std::max<std::size_t>(1, (n * percents[j] + 99) / 100);
    if (total > 0.0) {
      double mass = 0.0;
      for (std::size_t i = 0; i < top; ++i) mass += sorted[n - 1 - i];
      f[15 + j] = mass / total;
    } else {
      f[15 + j] = static_cast<double>(top) / nd;
    }
  }
  return f;
}

inline FeatureVector extract_features(const Chunk& chunk, std::span<const double> scores,
                                      const FeatureConfig& config = {}) {
  if (chunk.empty()) throw DataError("extract_features: empty chunk");
  if (scores.size() != chunk.size()) throw AlignmentError("extract_features: scores do not match chunk length");
  return extract_features(scores, config);
}

}  // namespace poc
