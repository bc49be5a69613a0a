#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace urnlab {

/// Standard normal density phi_d at x.
template <typename Derived>
double gaussian_density(const Eigen::MatrixBase<Derived>& x) {
  const double d = static_cast<double>(x.size());
  return std::exp(-0.5 * x.squaredNorm() - 0.5 * d * std::log(2.0 * std::numbers::pi));
}

inline double gaussian_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal distribution function.
double gaussian_cdf_1d(double x);

/// E[Phi((X - a) / s)] for X ~ N(0, 1).
double smoothed_step_mean(double a, double s);

}  // namespace urnlab
