#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "poc/compressor.hpp"
#include "poc/rng.hpp"

using poc::CompressionRatio;

namespace {

poc::TokenizedContext numbered(std::size_t n) {
  poc::TokenizedContext ctx;
  for (std::size_t i = 0; i < n; ++i) ctx.tokens.push_back("w" + std::to_string(i));
  return ctx;
}

// Independent top-k: stable sort by descending score, keep the first k.
std::vector<std::size_t> sort_oracle(const std::vector<double>& scores, std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

TEST_CASE("ratio validation") {
  CHECK_NOTHROW(CompressionRatio(0.0));
  CHECK_NOTHROW(CompressionRatio(1.0));
  CHECK_THROWS_AS(CompressionRatio(1.01), poc::DataError);
  CHECK_THROWS_AS(CompressionRatio(-0.1), poc::DataError);
}

TEST_CASE("compress_chunk worked examples") {
  const auto ctx = numbered(10);
  const auto chunk = poc::chunk_context(ctx).front();
  const std::vector<double> scores{.1, .9, .2, .8, .3, .7, .4, .6, .5, .05};

  const auto all = poc::compress_chunk(chunk, scores, CompressionRatio(1.0));
  CHECK(all.tokens == ctx.tokens);
  CHECK(all.achieved_ratio() == 1.0);

  const auto none = poc::compress_chunk(chunk, scores, CompressionRatio(0.0));
  CHECK(none.tokens.empty());
  CHECK(none.achieved_ratio() == 0.0);

  const auto quarter = poc::compress_chunk(chunk, scores, CompressionRatio(0.25));
  CHECK(quarter.kept_indices == std::vector<std::size_t>{1, 3, 5});
  CHECK(quarter.kept_indices == sort_oracle(scores, 3));
  CHECK(quarter.tokens == std::vector<std::string>{"w1", "w3", "w5"});
}

TEST_CASE("ties go to the earlier position") {
  const auto ctx = numbered(6);
  const auto chunk = poc::chunk_context(ctx).front();
  const std::vector<double> scores(6, 0.5);
  CHECK(poc::compress_chunk(chunk, scores, CompressionRatio(0.5)).kept_indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("misaligned scores are rejected") {
  const auto ctx = numbered(4);
  const auto chunk = poc::chunk_context(ctx).front();
  const std::vector<double> scores{0.1, 0.2};
  CHECK_THROWS_AS(poc::compress_chunk(chunk, scores, CompressionRatio(0.5)), poc::AlignmentError);
}

TEST_CASE("kept_count uses the ceiling rule") {
  CHECK(poc::kept_count(0.5, 511) == 256);
  CHECK(poc::kept_count(0.25, 10) == 3);
  CHECK(poc::kept_count(1.0 / 361.0, 512) == 2);
  CHECK(poc::kept_count(0.3, 10) == 3);  // 0.3*10 is 3.0000000000000004 in binary
  CHECK(poc::kept_count(0.0, 10) == 0);
  CHECK(poc::kept_count(1e-9, 10) == 1);
}

TEST_CASE("compress_context examples") {
  const auto ctx = numbered(1024);
  const std::vector<CompressionRatio> identity{CompressionRatio(1.0), CompressionRatio(1.0)};
  const auto same = poc::compress_context(ctx, identity);
  CHECK(same.tokens == ctx.tokens);
  CHECK(same.overall_ratio() == 1.0);

  const std::vector<CompressionRatio> mixed{CompressionRatio(0.5), CompressionRatio(0.0)};
  const auto half = poc::compress_context(ctx, mixed);
  CHECK(half.kept_tokens() == 256);
  CHECK(half.overall_ratio() == 0.25);

  const auto small = numbered(511);
  const std::vector<CompressionRatio> one{CompressionRatio(0.5)};
  CHECK(poc::compress_context(small, one).kept_tokens() == 256);

  CHECK_THROWS_AS(poc::compress_context(ctx, one), poc::AlignmentError);
}

TEST_CASE("compression properties on random chunks") {
  poc::Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(1, 600));
    const auto ctx = numbered(n);
    const auto chunk = poc::chunk_context(ctx, 1000).front();
    std::vector<double> scores(n);
    // Coarse values force plenty of ties.
    for (auto& s : scores) s = static_cast<double>(rng.below(8)) / 8.0;
    double r1 = rng.uniform(), r2 = rng.uniform();
    if (r1 > r2) std::swap(r1, r2);
    const auto a = poc::compress_chunk(chunk, scores, CompressionRatio(r1));
    const auto b = poc::compress_chunk(chunk, scores, CompressionRatio(r2));
    CHECK(std::includes(b.kept_indices.begin(), b.kept_indices.end(), a.kept_indices.begin(), a.kept_indices.end()));
    CHECK(std::is_sorted(a.kept_indices.begin(), a.kept_indices.end()));
    CHECK(std::adjacent_find(a.kept_indices.begin(), a.kept_indices.end()) == a.kept_indices.end());
    CHECK(std::abs(a.achieved_ratio() - r1) <= 1.0 / static_cast<double>(n) + 1e-12);
    CHECK(a.kept_indices == sort_oracle(scores, a.kept_indices.size()));

    const auto once = poc::compress_chunk(chunk, scores, CompressionRatio(1.0));
    poc::TokenizedContext again_ctx;
    again_ctx.tokens = once.tokens;
    const auto again = poc::compress_chunk(poc::chunk_context(again_ctx, 1000).front(), scores, CompressionRatio(1.0));
    CHECK(again.tokens == once.tokens);
  }
}
