#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poc/errors.hpp"

namespace poc {

inline constexpr std::size_t kDefaultChunkSize = 512;

struct TokenizedContext {
  std::vector<std::string> tokens;
  std::string source_text;

  std::size_t token_count() const noexcept { return tokens.size(); }
};

// A contiguous slice of a parent context. Views the parent's tokens, so the
// parent must outlive the chunk.
struct Chunk {
  std::string context_ref;
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  std::span<const std::string> tokens;

  std::size_t size() const noexcept { return end_index - start_index; }
  bool empty() const noexcept { return size() == 0; }
};

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && ((u >= 0x21 && u <= 0x2f) || (u >= 0x3a && u <= 0x40) ||
                      (u >= 0x5b && u <= 0x60) || (u >= 0x7b && u <= 0x7e));
}

// Whitespace split; every ASCII punctuation character becomes its own token.
// Bytes >= 0x80 are word characters, so UTF-8 sequences stay intact.
inline TokenizedContext tokenize(std::string_view text) {
  TokenizedContext ctx;
  ctx.source_text = std::string(text);
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      ctx.tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char c : text) {
    if (is_ascii_space(c)) {
      flush();
    } else if (is_ascii_punct(c)) {
      flush();
      ctx.tokens.emplace_back(1, c);
    } else {
      current.push_back(c);
    }
  }
  flush();
  return ctx;
}

// Join rule: single space between tokens. join(tokenize(x)) is the canonical
// form of x, and tokenize(join(t)) == t for any token list tokenize produced.
inline std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  std::size_t total = 0;
  for (const auto& t : tokens) total += t.size() + 1;
  out.reserve(total);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

inline std::string canonical_text(std::string_view text) { return join_tokens(tokenize(text).tokens); }

// ceil(n / chunk_size) chunks; an empty context yields no chunks at all.
inline std::vector<Chunk> chunk_context(const TokenizedContext& ctx, std::size_t chunk_size = kDefaultChunkSize,
                                        std::string_view context_ref = {}) {
  std::vector<Chunk> chunks;
  if (chunk_size == 0) throw DataError("chunk_size must be at least 1");
  const std::size_t n = ctx.tokens.size();
  chunks.reserve((n + chunk_size - 1) / chunk_size);
  for (std::size_t start = 0; start < n; start += chunk_size) {
    const std::size_t end = std::min(n, start + chunk_size);
    chunks.push_back(Chunk{std::string(context_ref), start, end,
                           std::span<const std::string>(ctx.tokens).subspan(start, end - start)});
  }
  return chunks;
}

}  // namespace poc
