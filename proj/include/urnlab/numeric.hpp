#pragma once

#include <cmath>
#include <numbers>

namespace urnlab {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace urnlab

namespace urnlab {

/// Compensated sum of exp(x_i) kept as shift + scaled sum, for log-domain totals.
class LogSumAccumulator {
 public:
  void add_log(double x) {
    if (x == -INFINITY) return;
    if (shift_ == -INFINITY) {
      shift_ = x;
    } else if (x > shift_ + 64.0) {
      const double scale = std::exp(shift_ - x);
      sum_ *= scale;
      comp_ *= scale;
      shift_ = x;
    }
    const double v = std::exp(x - shift_);
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= v ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  double log_value() const { return shift_ == -INFINITY ? -INFINITY : shift_ + std::log(sum_ + comp_); }

 private:
  double shift_ = -INFINITY;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace urnlab
