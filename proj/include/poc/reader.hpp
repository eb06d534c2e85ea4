#pragma once

#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "poc/errors.hpp"
#include "poc/tokenizer.hpp"

namespace poc {

// Anything that reads (compressed context, instruction) and answers.
class ReaderOracle {
 public:
  virtual ~ReaderOracle() = default;
  virtual std::string query(std::string_view context, std::string_view instruction) const = 0;
  virtual std::string kind() const = 0;
};

// Code tokens: one ASCII letter followed by exactly five digits.
inline bool is_code_token(std::string_view t) {
  if (t.size() != 6) return false;
  const char c = t.front();
  if (!((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'))) return false;
  for (std::size_t i = 1; i < 6; ++i)
    if (t[i] < '0' || t[i] > '9') return false;
  return true;
}

// Capitalized alphabetic word, e.g. "Harbor".
inline bool is_entity_token(std::string_view t) {
  if (t.size() < 2 || t.front() < 'A' || t.front() > 'Z') return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] < 'a' || t[i] > 'z') return false;
  return true;
}

// Parses "<n>-part" from an instruction; 1 when absent.
inline std::size_t requested_parts(std::string_view instruction) {
  static const std::regex re(R"((\d+)\s*-\s*part)");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(instruction.begin(), instruction.end(), m, re)) return std::stoul(m[1].str());
  return 1;
}

// Stand-in for a QA reader on needle tasks: reports every code token it can
// see, but only once it sees at least as many as the instruction asks for.
class SyntheticNeedleReader final : public ReaderOracle {
 public:
  std::string query(std::string_view context, std::string_view instruction) const override {
    const auto parts = requested_parts(instruction);
    std::vector<std::string> found;
    for (auto& t : tokenize(context).tokens)
      if (is_code_token(t)) found.push_back(std::move(t));
    if (found.size() < parts) return "unknown";
    return join_tokens(found);
  }
  std::string kind() const override { return "synthetic-needle"; }
};

// Stand-in for a summarizer: lists the entity words that survived.
class SyntheticCoverageReader final : public ReaderOracle {
 public:
  std::string query(std::string_view context, std::string_view) const override {
    std::vector<std::string> found;
    for (auto& t : tokenize(context).tokens)
      if (is_entity_token(t)) found.push_back(std::move(t));
    return join_tokens(found);
  }
  std::string kind() const override { return "synthetic-coverage"; }
};

}  // namespace poc
