#include "urnlab/gaussian.hpp"

namespace urnlab {

double gaussian_cdf_1d(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double smoothed_step_mean(double a, double s) { return gaussian_cdf_1d(-a / std::sqrt(1.0 + s * s)); }

}  // namespace urnlab
