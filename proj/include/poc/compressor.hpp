#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "poc/errors.hpp"
#include "poc/importance.hpp"
#include "poc/tokenizer.hpp"

namespace poc {

// Retained-token fraction |compressed| / |original|; 1 means no compression.
class CompressionRatio {
 public:
  constexpr CompressionRatio() = default;
  explicit CompressionRatio(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) throw DataError("compression ratio must lie in [0,1]");
  }
  constexpr double value() const noexcept { return value_; }

 private:
  double value_ = 1.0;
};

struct CompressedChunk {
  std::vector<std::size_t> kept_indices;  // offsets into the source chunk, increasing
  std::vector<std::string> tokens;
  std::size_t source_size = 0;

  double achieved_ratio() const noexcept {
    return source_size == 0 ? 1.0 : static_cast<double>(kept_indices.size()) / static_cast<double>(source_size);
  }
};

// Tokens kept for ratio r over n tokens. The small slack absorbs products
// like 0.29 * 100 landing a hair above an integer.
inline std::size_t kept_count(double r, std::size_t n) {
  const double x = r * static_cast<double>(n);
  const double nearest = std::round(x);
  const double k = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
  return std::min(n, static_cast<std::size_t>(k));
}

// Budget-driven compressor. Implementations must keep a subsequence of the
// chunk in original order.
class Compressor {
 public:
  virtual ~Compressor() = default;
  virtual CompressedChunk compress(const Chunk& chunk, std::span<const double> scores, CompressionRatio r) const = 0;
};

// Keeps the ceil(r*n) highest-scoring tokens, ties to the earlier position.
class TopKCompressor final : public Compressor {
 public:
  CompressedChunk compress(const Chunk& chunk, std::span<const double> scores, CompressionRatio r) const override {
    const std::size_t n = chunk.size();
    if (scores.size() != n)
      throw AlignmentError("compress_chunk: " + std::to_string(scores.size()) + " scores for " + std::to_string(n) +
                           " tokens");
    const std::size_t k = kept_count(r.value(), n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto by_rank = [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); };
    if (k < n) std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), by_rank);
    order.resize(k);
    std::sort(order.begin(), order.end());

    CompressedChunk out;
    out.source_size = n;
    out.tokens.reserve(k);
    for (auto i : order) out.tokens.push_back(chunk.tokens[i]);
    out.kept_indices = std::move(order);
    return out;
  }
};

inline CompressedChunk compress_chunk(const Chunk& chunk, std::span<const double> scores, CompressionRatio r) {
  return TopKCompressor{}.compress(chunk, scores, r);
}

struct CompressedContext {
  std::vector<std::string> tokens;
  std::vector<CompressedChunk> chunks;
  std::size_t source_tokens = 0;

  std::size_t kept_tokens() const noexcept { return tokens.size(); }
  double overall_ratio() const noexcept {
    return source_tokens == 0 ? 1.0 : static_cast<double>(tokens.size()) / static_cast<double>(source_tokens);
  }
  std::string text() const { return join_tokens(tokens); }
};

// Chunk-wise compression with precomputed chunks and scores.
inline CompressedContext compress_chunks(std::span<const Chunk> chunks, std::span<const ImportanceScores> scores,
                                         std::span<const CompressionRatio> ratios,
                                         const Compressor& compressor = TopKCompressor{}) {
  if (ratios.size() != chunks.size())
    throw AlignmentError("compress_context: " + std::to_string(ratios.size()) + " ratios for " +
                         std::to_string(chunks.size()) + " chunks");
  if (scores.size() != chunks.size()) throw AlignmentError("compress_context: score list does not match chunks");
  CompressedContext out;
  out.chunks.reserve(chunks.size());
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    auto cc = compressor.compress(chunks[c], scores[c], ratios[c]);
    out.source_tokens += chunks[c].size();
    out.tokens.insert(out.tokens.end(), cc.tokens.begin(), cc.tokens.end());
    out.chunks.push_back(std::move(cc));
  }
  return out;
}

inline CompressedContext compress_context(const TokenizedContext& ctx, std::span<const CompressionRatio> per_chunk_ratios,
                                          const ImportanceScorer& scorer = ImportanceScorer{},
                                          const Compressor& compressor = TopKCompressor{},
                                          std::size_t chunk_size = kDefaultChunkSize) {
  const auto chunks = chunk_context(ctx, chunk_size);
  if (per_chunk_ratios.size() != chunks.size())
    throw AlignmentError("compress_context: " + std::to_string(per_chunk_ratios.size()) + " ratios for " +
                         std::to_string(chunks.size()) + " chunks");
  std::vector<ImportanceScores> scores;
  scores.reserve(chunks.size());
  for (const auto& c : chunks) scores.push_back(scorer.score(c));
  return compress_chunks(chunks, scores, per_chunk_ratios, compressor);
}

}  // namespace poc
