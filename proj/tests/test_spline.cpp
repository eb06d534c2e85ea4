#include <catch_amalgamated.hpp>

#include <vector>

#include "poc/rng.hpp"
#include "poc/spline.hpp"
#include "spline_oracle.hpp"

using Catch::Matchers::WithinAbs;

namespace {

std::pair<std::vector<double>, std::vector<double>> random_knots(poc::Rng& rng, std::size_t n) {
  std::vector<double> x(n), y(n);
  for (auto& v : x) v = rng.uniform();
  std::sort(x.begin(), x.end());
  x.front() = 0.0;
  x.back() = 1.0;
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] <= x[i - 1]) x[i] = x[i - 1] + 1e-3;
  for (auto& v : y) v = rng.uniform();
  return {x, y};
}

}  // namespace

TEST_CASE("two knots degenerate to a line") {
  const auto c = poc::fit_spline({0.0, 1.0}, {0.0, 1.0});
  CHECK_THAT(c.eval(0.5), WithinAbs(0.5, 1e-15));
  CHECK_THAT(c.integrate(0.0, 1.0), WithinAbs(0.5, 1e-15));
}

TEST_CASE("constant curve integrates to (b-a)c") {
  const auto c = poc::fit_spline({0.0, 0.3, 0.7, 1.0}, {0.4, 0.4, 0.4, 0.4});
  CHECK_THAT(c.integrate(0.2, 0.9), WithinAbs(0.7 * 0.4, 1e-15));
}

TEST_CASE("three-knot worked example") {
  const auto c = poc::fit_spline({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  CHECK_THAT(c.eval(0.25), WithinAbs(0.6875, 1e-9));
  CHECK_THAT(c.integrate(0.0, 1.0), WithinAbs(0.625, 1e-6));
  const oracle::NaturalSpline ref({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  CHECK_THAT(ref(0.25), WithinAbs(0.6875, 1e-12));
  CHECK_THAT(oracle::trapezoid(ref, 0.0, 1.0, 1'000'000), WithinAbs(0.625, 1e-9));
}

TEST_CASE("fit errors") {
  CHECK_THROWS_AS(poc::fit_spline({0.5}, {1.0}), poc::DataError);
  CHECK_THROWS_AS(poc::fit_spline({0.0, 0.5, 0.5}, {1.0, 1.0, 1.0}), poc::DataError);
  CHECK_THROWS_AS(poc::fit_spline({0.0, 0.6, 0.5}, {1.0, 1.0, 1.0}), poc::DataError);
  CHECK_THROWS_AS(poc::fit_spline({0.0, 1.0}, {1.0}), poc::DataError);
}

TEST_CASE("no silent extrapolation") {
  const auto c = poc::fit_spline({0.1, 0.5, 1.0}, {0.2, 0.6, 1.0});
  CHECK_THROWS_AS(c.eval(0.05), poc::ExtrapolationError);
  CHECK_THROWS_AS(c.eval(1.0001), poc::ExtrapolationError);
  CHECK_THROWS_AS(c.integrate(0.0, 1.0), poc::ExtrapolationError);
  CHECK_THROWS_AS(c.integrate(0.6, 0.5), poc::DataError);
  CHECK_NOTHROW(c.eval(0.1));
  CHECK_NOTHROW(c.eval(1.0));
}

TEST_CASE("interpolation and evaluation agree with the dense-solver oracle") {
  poc::Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(2, 12));
    auto [x, y] = random_knots(rng, n);
    const auto c = poc::fit_spline(x, y);
    const oracle::NaturalSpline ref(x, y);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(c.raw(x[i]) - y[i]) <= 1e-9);
    for (int q = 0; q < 20; ++q) {
      const double t = rng.uniform();
      CHECK_THAT(c.raw(t), WithinAbs(ref(t), 1e-9));
      CHECK(c.eval(t) >= 0.0);
      CHECK(c.eval(t) <= 1.0);
    }
  }
}

TEST_CASE("integral matches a million-point trapezoid on random 5-knot curves") {
  poc::Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    auto [x, y] = random_knots(rng, 5);
    const auto c = poc::fit_spline(x, y);
    const oracle::NaturalSpline ref(x, y);
    CHECK_THAT(c.integrate(0.0, 1.0), WithinAbs(oracle::trapezoid(ref, 0.0, 1.0, 1'000'000), 1e-6));
    const double a = rng.uniform(0.0, 0.5), b = rng.uniform(0.5, 1.0);
    CHECK_THAT(c.integrate(a, b), WithinAbs(oracle::trapezoid(ref, a, b, 1'000'000), 1e-6));
  }
}

// The integral is taken over the unclamped spline; only pointwise
// predictions are clamped. An overshooting curve shows the difference.
TEST_CASE("integral of an overshooting curve exceeds the clamped integral") {
  const auto c = poc::fit_spline({0.0, 0.2, 0.4, 1.0}, {0.0, 1.0, 1.0, 1.0});
  const double unclamped = c.integrate(0.0, 1.0);
  const double clamped = oracle::trapezoid([&](double t) { return c.eval(t); }, 0.0, 1.0, 200'000);
  const double raw_numeric = oracle::trapezoid([&](double t) { return c.raw(t); }, 0.0, 1.0, 200'000);
  CHECK_THAT(unclamped, WithinAbs(raw_numeric, 1e-8));
  CHECK(unclamped > clamped);
  CHECK(unclamped - clamped < 0.05);
}
