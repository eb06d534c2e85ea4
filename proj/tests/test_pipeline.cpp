#include <catch_amalgamated.hpp>

#include <filesystem>
#include <numeric>
#include <fstream>
#include <vector>

#include "poc/agnostic.hpp"
#include "poc/pipeline.hpp"
#include "poc/synthetic.hpp"

namespace fs = std::filesystem;
using Catch::Matchers::WithinAbs;

namespace {

poc::FunctionPredictor constant_predictor(double v) {
  return poc::FunctionPredictor("constant", [v](const poc::ChunkInput&) {
    return [v](std::span<const double> rs) { return std::vector<double>(rs.size(), v); };
  });
}

std::string long_text(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += "word" + std::to_string(i % 37) + (i % 11 == 0 ? " Paris " : " ");
  return s;
}

std::vector<poc::DatasetRecord> needle_records(std::size_t n, std::uint64_t seed) {
  poc::CorpusConfig cc;
  cc.count = n;
  cc.seed = seed;
  std::vector<poc::DatasetRecord> out;
  for (const auto& s : poc::gen_corpus(cc)) out.push_back(s.record);
  return out;
}

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "poc_test_pipeline";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class FlakyReader final : public poc::ReaderOracle {
 public:
  std::string query(std::string_view context, std::string_view instruction) const override {
    if (instruction.find("3-part") != std::string_view::npos) throw poc::ReaderError(poc::ReaderError::Kind::timeout, "timeout");
    return inner_.query(context, instruction);
  }
  std::string kind() const override { return "flaky"; }

 private:
  poc::SyntheticNeedleReader inner_;
};

}  // namespace

TEST_CASE("zero floor keeps one grid step per chunk") {
  const auto ctx = poc::tokenize(long_text(1300));
  const auto pred = constant_predictor(0.0);
  const auto res = poc::poc_compress(ctx, 0.0, pred);
  std::size_t expected = 0;
  for (const auto& c : poc::chunk_context(ctx)) expected += poc::kept_count(1.0 / 361.0, c.size());
  CHECK(res.report.kept_tokens == expected);
  CHECK(res.report.total_tokens == ctx.token_count());
  for (const auto& c : res.report.chunks) CHECK(c.r_star == 1.0 / 361.0);
}

TEST_CASE("infeasible floor leaves the context verbatim") {
  const auto text = long_text(700);
  const auto pred = constant_predictor(0.5);
  const auto res = poc::poc_compress(text, 0.9, pred);
  CHECK(res.text == poc::canonical_text(text));
  CHECK(res.report.overall_ratio() == 1.0);
  for (const auto& c : res.report.chunks) CHECK_FALSE(c.feasible);
}

TEST_CASE("agnostic predictor picks one ratio for every chunk") {
  poc::CalibrationRecord rec;
  rec.record_id = "a";
  rec.chunk_features.push_back({});
  rec.chunk_token_counts.push_back(1);
  rec.ratios = {0.1, 0.4, 0.7, 1.0};
  rec.retentions = {0.1, 0.5, 0.9, 1.0};
  const std::vector<poc::CalibrationRecord> recs{rec};
  const poc::AgnosticRetentionPredictor pred(poc::calibrate_agnostic(recs, rec.ratios));
  const auto res = poc::poc_compress(long_text(1500), 0.8, pred);
  REQUIRE(res.report.chunks.size() >= 3);
  for (const auto& c : res.report.chunks) CHECK(c.r_star == res.report.chunks[0].r_star);
  CHECK(res.report.chunks[0].r_star < 1.0);
}

TEST_CASE("aware predictor sees each chunk") {
  std::vector<std::size_t> seen;
  poc::FunctionPredictor pred("probe", [&](const poc::ChunkInput& in) {
    seen.push_back(in.chunk.size());
    return [](std::span<const double> rs) { return std::vector<double>(rs.begin(), rs.end()); };
  });
  poc::PocOptions opt;
  opt.chunk_size = 100;
  const auto res = poc::poc_compress(long_text(250), 0.5, pred, opt);
  CHECK(seen.size() == res.report.chunks.size());
  CHECK(std::accumulate(seen.begin(), seen.end(), std::size_t{0}) == res.report.total_tokens);
}

TEST_CASE("poc_compress rejects a bad floor") {
  const auto pred = constant_predictor(1.0);
  CHECK_THROWS_AS(poc::poc_compress("a b c", 1.5, pred), poc::DataError);
}

TEST_CASE("ratio sampler") {
  poc::RatioSampler grid;
  const auto g = grid.sample(0);
  REQUIRE(g.size() == 10);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == 1.0);
  poc::RatioSampler uni{poc::RatioSampler::Kind::uniform, 5, 7};
  const auto u = uni.sample(3);
  CHECK(u.size() == 6);
  CHECK(u.back() == 1.0);
  CHECK(u == uni.sample(3));
  CHECK(u != uni.sample(4));
  CHECK(std::is_sorted(u.begin(), u.end()));
}

TEST_CASE("collected records are normalized at full length") {
  const auto data = needle_records(30, 4);
  const poc::SyntheticNeedleReader reader;
  const auto res = poc::collect_calibration(data, reader, {});
  REQUIRE(res.records.size() == 30);
  for (const auto& r : res.records) {
    CHECK(r.ratios.back() == 1.0);
    CHECK(r.retentions.back() == 1.0);
    CHECK(r.raw_scores.back() == r.baseline_score);
    CHECK(r.ratios.size() == 10);
    CHECK(r.chunk_features.size() == r.chunk_token_counts.size());
    for (double v : r.retentions) CHECK((v >= 0.0 && v <= 1.0));
  }
  CHECK(res.reader_calls == 30 * 10);
}

TEST_CASE("single needle shows a retention cliff") {
  poc::SyntheticTaskConfig cfg;
  cfg.context_length = 400;
  cfg.needle_length = 3;
  cfg.decoy_count = 100;
  const auto s = poc::gen_synthetic(cfg);
  const std::vector<poc::DatasetRecord> data{s.record};
  poc::CollectionOptions opt;
  opt.sampler.n = 20;
  const auto res = poc::collect_calibration(data, poc::SyntheticNeedleReader{}, opt);
  const auto& r = res.records.at(0);
  for (std::size_t k = 0; k < r.ratios.size(); ++k) {
    const bool survives = poc::kept_count(r.ratios[k], 400) >= 103;
    CHECK(r.retentions[k] == (survives ? 1.0 : 0.0));
  }
}

TEST_CASE("collection output is deterministic and resumable") {
  const auto data = needle_records(12, 9);
  const poc::SyntheticNeedleReader reader;
  poc::CollectionOptions opt;
  opt.header.config_hash = "h";
  const auto full = temp_file("full.jsonl");
  opt.output_path = full.string();
  poc::collect_calibration(data, reader, opt);
  const auto again = temp_file("again.jsonl");
  opt.output_path = again.string();
  opt.workers = 4;
  poc::collect_calibration(data, reader, opt);
  CHECK(slurp(full) == slurp(again));

  const auto partial = temp_file("partial.jsonl");
  opt.output_path = partial.string();
  opt.workers = 1;
  poc::collect_calibration(std::span<const poc::DatasetRecord>(data).first(5), reader, opt);
  const auto resumed = poc::collect_calibration(data, reader, opt);
  CHECK(resumed.skipped_existing == 5);
  CHECK(resumed.records.size() == 7);
  CHECK(slurp(partial) == slurp(full));

  const auto lines = poc::read_jsonl(full.string());
  CHECK(lines.size() == 12);
}

TEST_CASE("reader failures skip the record") {
  auto data = needle_records(20, 2);
  std::size_t three = 0;
  for (const auto& d : data) three += d.instruction.find("3-part") != std::string::npos ? 1 : 0;
  REQUIRE(three > 0);
  const auto res = poc::collect_calibration(data, FlakyReader{}, {});
  CHECK(res.failed.size() == three);
  CHECK(res.records.size() == data.size() - three);
  CHECK(res.failed.front().second.find("timeout") != std::string::npos);
}

TEST_CASE("empty context is reported") {
  std::vector<poc::DatasetRecord> data(1);
  data[0].id = "empty";
  const auto res = poc::collect_calibration(data, poc::SyntheticNeedleReader{}, {});
  CHECK(res.failed.size() == 1);
  CHECK_THROWS_AS(poc::collect_calibration(std::vector<poc::DatasetRecord>{}, poc::SyntheticNeedleReader{}, {}),
                  poc::DataError);
}
