#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "poc/errors.hpp"
#include "poc/tokenizer.hpp"

namespace poc {

using ImportanceScores = std::vector<double>;

// Heuristic weights. Bump `version` whenever a default changes so golden
// vectors and serialized models can detect the drift.
struct ImportanceConfig {
  std::string version = "importance-v1";
  double bias = 0.20;
  double length_weight = 0.30;
  std::size_t length_cap = 12;
  double digit_boost = 0.25;
  double capital_boost = 0.15;
  double stopword_penalty = 0.30;
  double punct_penalty = 0.30;
  double idf_weight = 0.20;
  // 0 disables the positional term; otherwise earlier tokens in a chunk gain
  // up to position_weight.
  double position_weight = 0.0;
  std::vector<std::string> stopwords = default_stopwords();

  static std::vector<std::string> default_stopwords() {
    return {"a",     "an",   "and",  "are",  "as",    "at",   "be",   "but",  "by",   "for",  "from",
            "had",   "has",  "have", "he",   "her",   "his",  "i",    "if",   "in",   "into", "is",
            "it",    "its",  "of",   "on",   "or",    "our",  "she",  "so",   "than", "that", "the",
            "their", "them", "then", "there", "these", "they", "this", "to",   "was",  "we",   "were",
            "what",  "when", "which", "who",  "will",  "with", "you",  "your"};
  }

  // Stable textual form; hashed into model files.
  std::string fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    os << version << '|' << bias << '|' << length_weight << '|' << length_cap << '|' << digit_boost << '|'
       << capital_boost << '|' << stopword_penalty << '|' << punct_penalty << '|' << idf_weight << '|'
       << position_weight;
    for (const auto& w : stopwords) os << '|' << w;
    return os.str();
  }
};

// token -> corpus count, keyed by lowercased token.
struct FrequencyTable {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(std::string_view token, std::uint64_t count);

  std::uint64_t count(std::string_view token) const;
};

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline void FrequencyTable::add(std::string_view token, std::uint64_t count) {
  counts[to_lower_ascii(token)] += count;
  total += count;
}

inline std::uint64_t FrequencyTable::count(std::string_view token) const {
  auto it = counts.find(to_lower_ascii(token));
  return it == counts.end() ? 0 : it->second;
}

inline FrequencyTable frequency_table_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("frequency table must be a JSON object of token -> count");
  FrequencyTable table;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_unsigned() && !(it.value().is_number_integer() && it.value().get<std::int64_t>() >= 0))
      throw DataError("frequency table count for '" + it.key() + "' is not a non-negative integer");
    table.add(it.key(), it.value().get<std::uint64_t>());
  }
  return table;
}

inline FrequencyTable load_frequency_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open frequency table: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("frequency table " + path + ": " + e.what());
  }
  return frequency_table_from_json(j);
}

inline std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

class ImportanceScorer {
 public:
  explicit ImportanceScorer(ImportanceConfig config = {}, std::optional<FrequencyTable> stats = std::nullopt)
      : config_(std::move(config)), stats_(std::move(stats)) {
    for (const auto& w : config_.stopwords) stopwords_.insert(to_lower_ascii(w));
  }

  const ImportanceConfig& config() const noexcept { return config_; }
  bool has_corpus_stats() const noexcept { return stats_.has_value(); }

  // Context-free part of the score (no positional term).
  double token_score(std::string_view token) const {
    double s = config_.bias;
    const auto cap = static_cast<double>(std::max<std::size_t>(config_.length_cap, 1));
    s += config_.length_weight * std::min(static_cast<double>(utf8_length(token)), cap) / cap;
    bool digit = false;
    for (char c : token)
      if (c >= '0' && c <= '9') digit = true;
    if (digit) s += config_.digit_boost;
    if (!token.empty() && token.front() >= 'A' && token.front() <= 'Z') s += config_.capital_boost;
    if (token.size() == 1 && is_ascii_punct(token.front())) s -= config_.punct_penalty;
    if (stopwords_.contains(to_lower_ascii(token))) s -= config_.stopword_penalty;
    if (stats_ && stats_->total > 0) {
      const double total = static_cast<double>(stats_->total);
      const double count = static_cast<double>(stats_->count(token));
      s += config_.idf_weight * std::log((total + 1.0) / (count + 1.0)) / std::log(total + 1.0);
    }
    return s;
  }

  ImportanceScores score(const Chunk& chunk) const {
    if (chunk.empty()) throw DataError("score_importance: chunk is empty");
    const std::size_t n = chunk.size();
    ImportanceScores scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = token_score(chunk.tokens[i]);
      if (config_.position_weight != 0.0) {
        const double rel = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        s += config_.position_weight * (1.0 - rel);
      }
      scores[i] = std::clamp(s, 0.0, 1.0);
    }
    return scores;
  }

 private:
  ImportanceConfig config_;
  std::optional<FrequencyTable> stats_;
  std::unordered_set<std::string> stopwords_;
};

inline ImportanceScores score_importance(const Chunk& chunk, const std::optional<FrequencyTable>& corpus_stats = {},
                                         const ImportanceConfig& config = {}) {
  return ImportanceScorer(config, corpus_stats).score(chunk);
}

}  // namespace poc
