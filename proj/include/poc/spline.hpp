#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "poc/errors.hpp"

namespace poc {

// Natural cubic spline through (ratio, retention) knots. On interval i,
//   s(x) = a[i] + b[i] t + c[i] t^2 + d[i] t^3,  t = x - x[i].
class PerformanceCurve {
 public:
  PerformanceCurve() = default;

  PerformanceCurve(std::vector<double> knot_ratios, std::vector<double> knot_values)
      : x_(std::move(knot_ratios)), y_(std::move(knot_values)) {
    if (x_.size() != y_.size()) throw DataError("fit_spline: knot ratio/value counts differ");
    if (x_.size() < 2) throw DataError("fit_spline: need at least 2 knots");
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw DataError("fit_spline: non-finite knot");
      if (i > 0 && !(x_[i] > x_[i - 1])) throw DataError("fit_spline: knot ratios must be strictly increasing");
    }
    solve();
  }

  std::span<const double> knot_ratios() const noexcept { return x_; }
  std::span<const double> knot_values() const noexcept { return y_; }
  std::span<const double> coeff_a() const noexcept { return a_; }
  std::span<const double> coeff_b() const noexcept { return b_; }
  std::span<const double> coeff_c() const noexcept { return c_; }
  std::span<const double> coeff_d() const noexcept { return d_; }

  double min_ratio() const { return x_.front(); }
  double max_ratio() const { return x_.back(); }

  // Unclamped spline value.
  double raw(double r) const {
    check_range(r, "eval_curve");
    if (r == x_.back()) return y_.back();
    const std::size_t i = interval(r);
    const double t = r - x_[i];
    return a_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
  }

  // Pointwise retention prediction, clamped to [0,1].
  double eval(double r) const { return std::clamp(raw(r), 0.0, 1.0); }

  // Exact integral of the unclamped spline over [lo, hi].
  double integrate(double lo, double hi) const {
    if (lo > hi) throw DataError("integrate_curve: lower bound exceeds upper bound");
    check_range(lo, "integrate_curve");
    check_range(hi, "integrate_curve");
    return antiderivative(hi) - antiderivative(lo);
  }

 private:
  void check_range(double r, const char* op) const {
    if (x_.empty()) throw DataError(std::string(op) + ": curve is not fitted");
    if (!(r >= x_.front() && r <= x_.back()))
      throw ExtrapolationError(std::string(op) + ": ratio " + std::to_string(r) + " outside knot span [" +
                               std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
  }

  std::size_t interval(double r) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), r);
    auto i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    return std::min(i == 0 ? 0 : i - 1, x_.size() - 2);
  }

  // Integral from x[0] to r.
  double antiderivative(double r) const {
    const std::size_t i = r == x_.back() ? x_.size() - 2 : interval(r);
    const double t = r - x_[i];
    return prefix_[i] + piece_integral(i, t);
  }

  double piece_integral(std::size_t i, double t) const {
    return t * (a_[i] + t * (b_[i] / 2.0 + t * (c_[i] / 3.0 + t * d_[i] / 4.0)));
  }

  // Second derivatives m from the tridiagonal system (Thomas algorithm),
  // natural ends m[0] = m[n-1] = 0.
  void solve() {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
    std::vector<double> m(n, 0.0);
    if (n > 2) {
      const std::size_t k = n - 2;
      std::vector<double> diag(k), upper(k), rhs(k);
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t i = j + 1;
        diag[j] = 2.0 * (h[i - 1] + h[i]);
        upper[j] = h[i];
        rhs[j] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
      }
      for (std::size_t j = 1; j < k; ++j) {
        const double w = h[j] / diag[j - 1];  // sub-diagonal entry of row j is h[j]
        diag[j] -= w * upper[j - 1];
        rhs[j] -= w * rhs[j - 1];
      }
      m[k] = rhs[k - 1] / diag[k - 1];
      for (std::size_t j = k - 1; j-- > 0;) m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
    }
    a_.resize(n - 1);
    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    prefix_.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      a_[i] = y_[i];
      b_[i] = (y_[i + 1] - y_[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
      c_[i] = m[i] / 2.0;
      d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) prefix_[i] = prefix_[i - 1] + piece_integral(i - 1, h[i - 1]);
  }

  std::vector<double> x_, y_;
  std::vector<double> a_, b_, c_, d_;
  std::vector<double> prefix_;
};

inline PerformanceCurve fit_spline(std::vector<double> knot_ratios, std::vector<double> knot_values) {
  return PerformanceCurve(std::move(knot_ratios), std::move(knot_values));
}

inline double eval_curve(const PerformanceCurve& curve, double r) { return curve.eval(r); }

inline double integrate_curve(const PerformanceCurve& curve, double lo, double hi) { return curve.integrate(lo, hi); }

}  // namespace poc
