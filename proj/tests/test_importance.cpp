#include <catch_amalgamated.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "poc/importance.hpp"
#include "poc/rng.hpp"

using Catch::Matchers::WithinAbs;

namespace {

poc::TokenizedContext ctx_of(std::vector<std::string> tokens) {
  poc::TokenizedContext ctx;
  ctx.tokens = std::move(tokens);
  return ctx;
}

}  // namespace

TEST_CASE("identical tokens score identically") {
  const auto ctx = ctx_of({"river", "river", "river", "river"});
  const auto chunk = poc::chunk_context(ctx).front();
  const auto s = poc::score_importance(chunk);
  REQUIRE(s.size() == 4);
  for (double v : s) CHECK(v == s.front());
}

TEST_CASE("stopword penalty lowers the score") {
  const auto ctx = ctx_of({"the", "sky"});
  const auto s = poc::score_importance(poc::chunk_context(ctx).front());
  CHECK(s[0] < s[1]);
}

TEST_CASE("scores are clamped to [0,1] and empty chunks are rejected") {
  const auto ctx = ctx_of({".", "the", "Abcdefghijklmnop123", "x"});
  for (double v : poc::score_importance(poc::chunk_context(ctx).front())) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  poc::Chunk empty;
  CHECK_THROWS_AS(poc::score_importance(empty), poc::DataError);
}

// Hand evaluation of the importance-v1 weights:
//   0.2 + 0.3*min(len,12)/12 + 0.25*digit + 0.15*capital - 0.3*stop - 0.3*punct
TEST_CASE("golden score vector for an 8-token sentence") {
  const auto ctx = poc::tokenize("The Model scored 42 points in Paris.");
  REQUIRE(ctx.token_count() == 8);
  const std::vector<double> expected{
      0.2 + 0.3 * 3 / 12 + 0.15 - 0.3,  // The   -> 0.125
      0.2 + 0.3 * 5 / 12 + 0.15,        // Model -> 0.475
      0.2 + 0.3 * 6 / 12,               // scored -> 0.35
      0.2 + 0.3 * 2 / 12 + 0.25,        // 42    -> 0.5
      0.2 + 0.3 * 6 / 12,               // points -> 0.35
      0.0,                              // in: 0.2 + 0.05 - 0.3 clamps to 0
      0.2 + 0.3 * 5 / 12 + 0.15,        // Paris -> 0.475
      0.0,                              // '.': 0.2 + 0.025 - 0.3 clamps to 0
  };
  const std::vector<double> pinned{0.125, 0.475, 0.35, 0.5, 0.35, 0.0, 0.475, 0.0};
  const auto s = poc::score_importance(poc::chunk_context(ctx).front());
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK_THAT(s[i], WithinAbs(expected[i], 1e-12));
    CHECK_THAT(s[i], WithinAbs(pinned[i], 1e-12));
  }
}

TEST_CASE("swapping tokens swaps scores without stats or positional terms") {
  poc::Rng rng(3);
  const std::vector<std::string> vocab{"the", "River", "a1", "Zz99", "mountain", ",", "of", "Geneva", "x"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> toks;
    for (int i = 0; i < 20; ++i) toks.push_back(vocab[rng.below(vocab.size())]);
    const auto a = poc::score_importance(poc::chunk_context(ctx_of(toks)).front());
    const auto i = rng.below(20), j = rng.below(20);
    std::swap(toks[i], toks[j]);
    const auto b = poc::score_importance(poc::chunk_context(ctx_of(toks)).front());
    CHECK(a[i] == b[j]);
    CHECK(a[j] == b[i]);
  }
}

TEST_CASE("positional term favours earlier tokens") {
  poc::ImportanceConfig cfg;
  cfg.position_weight = 0.1;
  const auto s = poc::score_importance(poc::chunk_context(ctx_of({"river", "river", "river"})).front(), {}, cfg);
  CHECK(s[0] > s[1]);
  CHECK(s[1] > s[2]);
}

TEST_CASE("corpus frequency table raises rare tokens") {
  const auto path = std::string(POC_TEST_DATA_DIR) + "/freq.json";
  const auto table = poc::load_frequency_table(path);
  CHECK(table.count("River") == table.count("river"));
  const auto ctx = ctx_of({"river", "delta"});
  const auto with = poc::score_importance(poc::chunk_context(ctx).front(), table);
  const auto without = poc::score_importance(poc::chunk_context(ctx).front());
  // Same length, so only the inverse-frequency term separates them.
  CHECK(without[0] == without[1]);
  CHECK(with[1] > with[0]);
  CHECK_THROWS_AS(poc::load_frequency_table("/nonexistent/freq.json"), poc::IoError);
  CHECK_THROWS_AS(poc::frequency_table_from_json(nlohmann::json::array()), poc::DataError);
  CHECK_THROWS_AS(poc::frequency_table_from_json(nlohmann::json{{"a", -1}}), poc::DataError);
}
