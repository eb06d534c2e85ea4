#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "poc/rng.hpp"
#include "poc/search.hpp"

namespace {

poc::BatchPredictor from_curve(std::function<double(double)> f) {
  return [f = std::move(f)](std::span<const double> rs) {
    std::vector<double> out;
    for (double r : rs) out.push_back(f(r));
    return out;
  };
}

// Exhaustive reference over the same 18 + 18 candidate set.
double brute_force(const std::function<double(double)>& f, double floor) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < 19 && k == 0; ++i)
    if (f(poc::search_grid_point(i * 19)) >= floor) k = i;
  if (k == 0) {
    if (f(1.0) < floor) return 1.0;
    k = 19;
  }
  for (std::size_t j = 1; j < 19; ++j) {
    const double r = poc::search_grid_point((k - 1) * 19 + j);
    if (f(r) >= floor) return r;
  }
  return poc::search_grid_point(k * 19);
}

}  // namespace

TEST_CASE("step curve at one half") {
  const auto step = from_curve([](double r) { return r >= 0.5 ? 1.0 : 0.0; });
  const auto res = poc::two_stage_search(step, 0.9);
  CHECK(res.feasible);
  CHECK(res.r_star == 181.0 / 361.0);
  CHECK(res.predicted_retention == 1.0);
}

TEST_CASE("zero floor picks the first fine candidate") {
  const auto flat = from_curve([](double) { return 0.2; });
  const auto res = poc::two_stage_search(flat, 0.0);
  CHECK(res.r_star == 1.0 / 361.0);
  CHECK(res.feasible);
}

TEST_CASE("unreachable floor keeps the chunk verbatim") {
  const auto capped = from_curve([](double r) { return 0.8 * r; });
  const auto res = poc::two_stage_search(capped, 0.95);
  CHECK_FALSE(res.feasible);
  CHECK(res.r_star == 1.0);
  CHECK(res.predictor_calls == 2);
}

TEST_CASE("floor met only at full length") {
  const auto full_only = from_curve([](double r) { return r >= 1.0 ? 1.0 : 0.0; });
  const auto res = poc::two_stage_search(full_only, 0.5);
  CHECK(res.feasible);
  CHECK(res.r_star == 1.0);
}

TEST_CASE("predictor evaluation budget") {
  poc::Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const double knee = rng.uniform();
    std::size_t evaluations = 0;
    poc::BatchPredictor p = [&](std::span<const double> rs) {
      evaluations += rs.size();
      std::vector<double> out;
      for (double r : rs) out.push_back(r >= knee ? 1.0 : r);
      return out;
    };
    const auto res = poc::two_stage_search(p, rng.uniform());
    CHECK(evaluations <= 37);
    CHECK(res.evaluations == evaluations);
    CHECK(res.predictor_calls <= 3);
  }
}

TEST_CASE("search agrees with exhaustive evaluation") {
  poc::Rng rng(99);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> ys(12);
    for (auto& y : ys) y = rng.uniform();
    auto f = [ys](double r) {
      const double pos = r * 11.0;
      const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), 10);
      return ys[i] + (pos - static_cast<double>(i)) * (ys[i + 1] - ys[i]);
    };
    const double floor = rng.uniform();
    CHECK(poc::two_stage_search(from_curve(f), floor).r_star == brute_force(f, floor));
  }
}

TEST_CASE("monotone curves give monotone answers in the floor") {
  poc::Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const double a = rng.uniform(0.5, 4.0);
    const auto f = from_curve([a](double r) { return std::pow(r, a); });
    double prev = 0.0;
    for (double floor = 0.0; floor <= 1.0; floor += 0.05) {
      const double r = poc::two_stage_search(f, floor).r_star;
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("search input validation") {
  const auto ok = from_curve([](double r) { return r; });
  CHECK_THROWS_AS(poc::two_stage_search(ok, 1.5), poc::DataError);
  CHECK_THROWS_AS(poc::two_stage_search(ok, -0.1), poc::DataError);
  CHECK_THROWS_AS(poc::two_stage_search(ok, std::nan("")), poc::DataError);
  poc::BatchPredictor short_out = [](std::span<const double>) { return std::vector<double>{0.5}; };
  CHECK_THROWS_AS(poc::two_stage_search(short_out, 0.5), poc::DataError);
  const auto nan_out = from_curve([](double) { return std::nan(""); });
  CHECK_THROWS_AS(poc::two_stage_search(nan_out, 0.5), poc::DataError);
}
