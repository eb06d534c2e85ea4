#include <catch_amalgamated.hpp>

#include <cmath>

#include "poc/latency.hpp"

TEST_CASE("single run has zero spread") {
  const auto s = poc::latency_bench(poc::BenchComponent::compressor, 64, 1, 0);
  CHECK(s.runs == 1);
  CHECK(s.std_ms == 0.0);
  CHECK(s.mean_ms > 0.0);
}

TEST_CASE("summary statistics") {
  const auto s = poc::summarize_latency({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean_ms == 2.5);
  CHECK(s.std_ms == Catch::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(poc::summarize_latency({}).runs == 0);
}

TEST_CASE("predictor is cheaper than the compressor") {
  const poc::BenchComponent both[] = {poc::BenchComponent::predictor, poc::BenchComponent::compressor};
  const auto stats = poc::latency_bench_interleaved(both, 512, 100);
  const auto& pred = stats[0];
  const auto& comp = stats[1];
  CHECK(pred.samples_ms.size() == 100);
  INFO("predictor " << pred.mean_ms << " compressor " << comp.mean_ms);
  CHECK(pred.mean_ms < comp.mean_ms);
  for (double v : pred.samples_ms) CHECK(v >= 0.0);
}

TEST_CASE("pipeline bench and JSON") {
  const auto s = poc::latency_bench(poc::BenchComponent::pipeline, 512, 5, 1);
  const auto j = poc::latency_json(poc::BenchComponent::pipeline, 512, s);
  CHECK(j["component"] == "pipeline");
  CHECK(j["runs"] == 5);
  CHECK(j.contains("hardware_note"));
  CHECK(poc::parse_bench_component("predictor") == poc::BenchComponent::predictor);
  CHECK_THROWS_AS(poc::parse_bench_component("gpu"), poc::DataError);
  CHECK_THROWS_AS(poc::latency_bench(poc::BenchComponent::compressor, 2, 1), poc::DataError);
}

// Assumes independent samples; timing drift on shared hosts can break that.
TEST_CASE("doubling the run count keeps the mean within sampling error", "[!mayfail]") {
  const auto full = poc::latency_bench(poc::BenchComponent::predictor, 512, 200);
  const auto half = poc::summarize_latency({full.samples_ms.begin(), full.samples_ms.begin() + 100});
  INFO("mean 100 runs " << half.mean_ms << " +/- " << half.std_ms << ", mean 200 runs " << full.mean_ms);
  CHECK(std::abs(full.mean_ms - half.mean_ms) < 3.0 * half.std_ms / std::sqrt(100.0));
}
