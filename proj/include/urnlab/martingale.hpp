#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "urnlab/colors.hpp"
#include "urnlab/sparse_law.hpp"
#include "urnlab/urn_process.hpp"

namespace urnlab {

/// M_j(lambda) = U_j x(lambda) / Pi_j(e(lambda)) along one path, j = 0..n.
struct MartingaleTrace {
  Eigen::VectorXd lambda;
  std::vector<double> values;
  std::vector<double> log_u_x;
  std::vector<double> log_pi;
};

MartingaleTrace martingale_trace(const UrnPath& path, const IncrementModel& model, const SparseLaw& u0,
                                 const Eigen::Ref<const Eigen::VectorXd>& lambda);

/// E[M_j(lambda)^2] for j = 0..n from the exact second-moment recursion.
std::vector<double> second_moment_exact(const IncrementModel& model, const SparseLaw& u0,
                                        const Eigen::Ref<const Eigen::VectorXd>& lambda, std::int64_t n);

/// 2 e(lambda) - e(2 lambda); the L2 bound holds where this stays positive.
double l2_margin(const IncrementModel& model, const Eigen::Ref<const Eigen::VectorXd>& lambda);

struct L2ScanPoint {
  Eigen::VectorXd lambda;
  double max_second_moment = 0.0;
  /// E[M^2_{n_max}] / E[M^2_{n_max/2}]
  double growth_ratio = 1.0;
  bool growing = false;
};

struct L2BoundReport {
  double delta_star = 0.0;
  double resolution = 0.0;
  bool saturated = false;  // no failure found up to delta_max
  std::int64_t n_max = 0;
  std::vector<L2ScanPoint> points;
};

/// Scans half-widths k * delta_max / grid for the largest cube [-d, d]^dim
/// on whose lambda-grid the margin stays positive, then evaluates the
/// second moment up to n_max on a points_per_axis^dim grid over [-d*, d*]^dim.
L2BoundReport l2_bound_scan(const IncrementModel& model, const SparseLaw& u0, double delta_max,
                            std::int64_t n_max, int grid, int points_per_axis = 5);

/// E[M_n^2(lambda / sqrt(log n))] - 1 for each n.
std::vector<double> variance_vanishes(const IncrementModel& model, const SparseLaw& u0,
                                      const Eigen::Ref<const Eigen::VectorXd>& lambda,
                                      std::span<const std::int64_t> n_list);

}  // namespace urnlab
