#include <catch_amalgamated.hpp>

#include <vector>

#include "poc/agnostic.hpp"
#include "poc/pipeline.hpp"
#include "poc/synthetic.hpp"

using Catch::Matchers::WithinAbs;

namespace {

poc::CalibrationRecord rec(const std::string& id, std::vector<double> ratios, std::vector<double> ret) {
  poc::CalibrationRecord r;
  r.record_id = id;
  r.chunk_features.push_back({});
  r.chunk_token_counts.push_back(10);
  r.ratios = std::move(ratios);
  r.retentions = std::move(ret);
  r.raw_scores = r.retentions;
  return r;
}

}  // namespace

TEST_CASE("single record reproduces its own knots") {
  const std::vector<poc::CalibrationRecord> recs{rec("a", {0.2, 0.5, 1.0}, {0.1, 0.6, 1.0})};
  const auto p = poc::calibrate_agnostic(recs, poc::ratios_union(recs));
  CHECK_THAT(p.predict(0.2), WithinAbs(0.1, 1e-12));
  CHECK_THAT(p.predict(0.5), WithinAbs(0.6, 1e-12));
  CHECK_THAT(p.predict(1.0), WithinAbs(1.0, 1e-12));
  CHECK(p.meta().sample_count == 1);
  CHECK(p.meta().knot_count == 3);
}

TEST_CASE("flat calibration gives a flat predictor") {
  std::vector<poc::CalibrationRecord> recs;
  for (int i = 0; i < 5; ++i) recs.push_back(rec(std::to_string(i), {0.1, 0.4, 0.7, 1.0}, {0.5, 0.5, 0.5, 0.5}));
  const auto p = poc::calibrate_agnostic(recs, {0.1, 0.4, 0.7, 1.0});
  for (double r = 0.0; r <= 1.0; r += 0.01) CHECK_THAT(p.predict(r), WithinAbs(0.5, 1e-12));
}

TEST_CASE("knot values are per-ratio means") {
  const std::vector<poc::CalibrationRecord> recs{rec("a", {0.5, 1.0}, {0.2, 1.0}), rec("b", {0.5, 1.0}, {0.6, 1.0}),
                                                 rec("c", {0.5, 1.0}, {0.7, 1.0})};
  const auto p = poc::calibrate_agnostic(recs, {0.5, 1.0});
  CHECK_THAT(p.predict(0.5), WithinAbs(0.5, 1e-12));
}

TEST_CASE("queries outside the knot span take the end values") {
  const std::vector<poc::CalibrationRecord> recs{rec("a", {0.2, 0.6, 1.0}, {0.3, 0.8, 1.0})};
  const auto p = poc::calibrate_agnostic(recs, {0.2, 0.6, 1.0});
  CHECK_THAT(p.predict(0.0), WithinAbs(0.3, 1e-12));
  CHECK_THAT(p.predict(1.0 / 361.0), WithinAbs(0.3, 1e-12));
}

TEST_CASE("calibration errors") {
  CHECK_THROWS_AS(poc::calibrate_agnostic(std::vector<poc::CalibrationRecord>{}, {0.5, 1.0}), poc::DataError);
  const std::vector<poc::CalibrationRecord> recs{rec("a", {0.5, 1.0}, {0.4, 1.0}), rec("b", {0.3, 1.0}, {0.2, 1.0})};
  CHECK_THROWS_AS(poc::calibrate_agnostic(recs, {0.5, 1.0}), poc::DataError);
}

TEST_CASE("agnostic predictor ignores the chunk") {
  const std::vector<poc::CalibrationRecord> recs{rec("a", {0.25, 0.5, 1.0}, {0.1, 0.7, 1.0})};
  const poc::AgnosticRetentionPredictor pred(poc::calibrate_agnostic(recs, {0.25, 0.5, 1.0}));
  const auto c1 = poc::tokenize("alpha beta gamma delta");
  const auto c2 = poc::tokenize("Zeta 12345 . , the");
  const auto ch1 = poc::chunk_context(c1).front();
  const auto ch2 = poc::chunk_context(c2).front();
  const std::vector<double> s1(4, 0.3), s2(5, 0.9);
  const std::vector<double> rs{0.3, 0.6, 0.9};
  CHECK(pred.bind({ch1, s1, 0})(rs) == pred.bind({ch2, s2, 3})(rs));
}

TEST_CASE("predictor JSON round trip") {
  const std::vector<poc::CalibrationRecord> recs{rec("a", {0.25, 0.5, 1.0}, {0.1, 0.7, 1.0})};
  const auto p = poc::calibrate_agnostic(recs, {0.25, 0.5, 1.0}, "needle");
  const auto q = poc::AgnosticPredictor::from_json(nlohmann::json::parse(p.to_json().dump()));
  CHECK(q.meta().dataset_id == "needle");
  for (double r : {0.1, 0.3, 0.77}) CHECK(q.predict(r) == p.predict(r));
}

// On a needle corpus, the calibrated curve at each grid ratio must match the
// corpus-average closed-form retention.
TEST_CASE("needle corpus calibration matches the generator truth") {
  poc::CorpusConfig cc;
  cc.count = 300;
  cc.seed = 17;
  const auto corpus = poc::gen_corpus(cc);
  std::vector<poc::DatasetRecord> data;
  for (const auto& s : corpus) data.push_back(s.record);
  poc::CollectionOptions opt;
  opt.sampler.n = 10;
  const auto reader = poc::synthetic_reader_for(poc::SyntheticKind::needle_qa);
  const auto col = poc::collect_calibration(data, *reader, opt);
  REQUIRE(col.records.size() == corpus.size());
  const auto p = poc::calibrate_agnostic(col.records, poc::ratios_union(col.records));
  for (int i = 1; i <= 10; ++i) {
    const double r = i / 10.0;
    double truth = 0.0;
    for (const auto& s : corpus) truth += poc::truth_retention(s.layout, r);
    truth /= static_cast<double>(corpus.size());
    CHECK_THAT(p.predict(r), WithinAbs(truth, 1e-9));
  }
}
