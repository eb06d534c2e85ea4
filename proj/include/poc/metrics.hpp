#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poc/errors.hpp"
#include "poc/importance.hpp"
#include "poc/tokenizer.hpp"

namespace poc {

enum class Metric { f1, em, rouge_geo };

inline std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::f1: return "f1";
    case Metric::em: return "em";
    case Metric::rouge_geo: return "rouge_geo";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "f1") return Metric::f1;
  if (name == "em") return Metric::em;
  if (name == "rouge_geo" || name == "rouge") return Metric::rouge_geo;
  throw DataError("unknown metric '" + std::string(name) + "' (expected f1, em or rouge_geo)");
}

struct TaskScore {
  double value = 0.0;
  Metric metric = Metric::f1;
};

// Answer normalization shared by every scorer: lowercase, punctuation
// removed, whitespace collapsed. Articles are kept.
inline std::vector<std::string> normalized_tokens(std::string_view text) {
  auto toks = tokenize(text).tokens;
  std::vector<std::string> out;
  out.reserve(toks.size());
  for (auto& t : toks) {
    if (t.size() == 1 && is_ascii_punct(t.front())) continue;
    out.push_back(to_lower_ascii(t));
  }
  return out;
}

namespace detail {

inline double f_measure(double overlap, std::size_t pred_n, std::size_t gold_n) {
  if (pred_n == 0 && gold_n == 0) return 1.0;
  if (pred_n == 0 || gold_n == 0 || overlap <= 0.0) return 0.0;
  // Harmonic mean of precision and recall, 2PR/(P+R), in count form.
  return 2.0 * overlap / static_cast<double>(pred_n + gold_n);
}

inline std::map<std::string, std::size_t> ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  std::map<std::string, std::size_t> counts;
  if (toks.size() < n) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key = toks[i];
    for (std::size_t j = 1; j < n; ++j) {
      key.push_back('\x1f');
      key += toks[i + j];
    }
    ++counts[key];
  }
  return counts;
}

inline std::size_t clipped_overlap(const std::map<std::string, std::size_t>& a,
                                   const std::map<std::string, std::size_t>& b) {
  std::size_t overlap = 0;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    if (it != b.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

inline std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

// Multiset (clipped-count) token overlap F1.
inline TaskScore f1_score(std::string_view prediction, std::string_view gold) {
  const auto p = normalized_tokens(prediction);
  const auto g = normalized_tokens(gold);
  const auto overlap = detail::clipped_overlap(detail::ngram_counts(p, 1), detail::ngram_counts(g, 1));
  return {detail::f_measure(static_cast<double>(overlap), p.size(), g.size()), Metric::f1};
}

inline TaskScore exact_match(std::string_view prediction, std::string_view gold) {
  return {normalized_tokens(prediction) == normalized_tokens(gold) ? 1.0 : 0.0, Metric::em};
}

struct RougeScores {
  double rouge_1 = 0.0;
  double rouge_2 = 0.0;
  double rouge_l = 0.0;
  double geo = 0.0;
};

inline double rouge_n(const std::vector<std::string>& p, const std::vector<std::string>& g, std::size_t n) {
  const auto pc = detail::ngram_counts(p, n);
  const auto gc = detail::ngram_counts(g, n);
  std::size_t pn = 0, gn = 0;
  for (const auto& [k, c] : pc) pn += c;
  for (const auto& [k, c] : gc) gn += c;
  return detail::f_measure(static_cast<double>(detail::clipped_overlap(pc, gc)), pn, gn);
}

inline RougeScores rouge(std::string_view prediction, std::string_view gold) {
  const auto p = normalized_tokens(prediction);
  const auto g = normalized_tokens(gold);
  RougeScores s;
  s.rouge_1 = rouge_n(p, g, 1);
  s.rouge_2 = rouge_n(p, g, 2);
  s.rouge_l = detail::f_measure(static_cast<double>(detail::lcs_length(p, g)), p.size(), g.size());
  const double prod = s.rouge_1 * s.rouge_2 * s.rouge_l;
  s.geo = prod <= 0.0 ? 0.0 : std::cbrt(prod);
  return s;
}

inline TaskScore rouge_geo(std::string_view prediction, std::string_view gold) {
  return {rouge(prediction, gold).geo, Metric::rouge_geo};
}

inline TaskScore score_task(Metric metric, std::string_view prediction, std::string_view gold) {
  switch (metric) {
    case Metric::f1: return f1_score(prediction, gold);
    case Metric::em: return exact_match(prediction, gold);
    case Metric::rouge_geo: return rouge_geo(prediction, gold);
  }
  throw DataError("unknown metric");
}

// Number of retention() calls that hit an uncompressed score of zero.
inline std::atomic<std::uint64_t>& zero_baseline_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

// min(m_r / m_full, 1). A zero baseline has nothing to lose and maps to 1.
inline double retention(const TaskScore& m_r, const TaskScore& m_full) {
  if (m_r.metric != m_full.metric)
    throw DataError("retention: metric mismatch (" + std::string(metric_name(m_r.metric)) + " vs " +
                    std::string(metric_name(m_full.metric)) + ")");
  if (m_full.value <= 0.0) {
    zero_baseline_counter().fetch_add(1, std::memory_order_relaxed);
    return 1.0;
  }
  return std::clamp(m_r.value / m_full.value, 0.0, 1.0);
}

// Mean squared error between predicted and measured retentions.
inline double ppe(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size())
    throw DataError("ppe: " + std::to_string(predicted.size()) + " predictions vs " + std::to_string(actual.size()) +
                    " measurements");
  if (predicted.empty()) throw DataError("ppe: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - actual[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predicted.size());
}

}  // namespace poc
