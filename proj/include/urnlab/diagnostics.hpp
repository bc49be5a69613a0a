#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "urnlab/colors.hpp"
#include "urnlab/lattice.hpp"
#include "urnlab/sparse_law.hpp"
#include "urnlab/urn_process.hpp"

namespace urnlab {

/// x = Sigma^{-1/2} (y - center) / sqrt(log n), center = mu log n
/// (or mu (log n + Euler gamma)).
struct Standardization {
  Eigen::VectorXd center;
  Eigen::MatrixXd scale_inv;
  Eigen::MatrixXd scale;
  std::int64_t n = 0;

  static Standardization make(const MomentSummary& m, std::int64_t n, bool use_gamma = false);

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& y) const { return scale_inv * (y - center); }
  Eigen::VectorXd invert(const Eigen::Ref<const Eigen::VectorXd>& x) const { return scale * x + center; }
};

/// Pushforward of a law under a Standardization; points are columns.
struct StandardizedLaw {
  Eigen::MatrixXd points;
  Eigen::VectorXd probs;
  double pruned_mass = 0.0;
  std::int64_t n = 0;

  int dim() const { return static_cast<int>(points.rows()); }
};

StandardizedLaw standardize(const SparseLaw& law, const Embedding& embedding, const MomentSummary& m,
                            bool use_gamma = false);

struct DistanceStatistic {
  double value = 0.0;
  double pruned_mass = 0.0;
  Eigen::VectorXd argmax;

  double upper_bound() const { return value + pruned_mass; }
};

/// sup_x |F(x) - Phi(x)| over both one-sided limits at every atom.
DistanceStatistic ks_distance_1d(const StandardizedLaw& law);

/// per_axis^d points on [-half_width, half_width]^d, one per column.
Eigen::MatrixXd default_t_grid(int dim, int per_axis = 9, double half_width = 3.0);

/// max over grid of |sum p exp(i<t, x>) - exp(-|t|^2 / 2)|; argmax holds t.
DistanceStatistic cf_distance(const StandardizedLaw& law, const Eigen::MatrixXd& t_grid);

struct LLTStatistic {
  std::int64_t n = 0;
  double sup_value = 0.0;
  Eigen::VectorXd argmax_point;
  double normalizer = 0.0;
  double pruned_mass = 0.0;
  std::size_t points_checked = 0;
};

/// det(Sigma^{1/2}) (sqrt(log n))^d / det(lattice); sigma sqrt(log n) / h in d = 1.
double llt_normalizer(const MomentSummary& m, const LatticeSpec& lattice, std::int64_t n);

/// sup over the law's support and every lattice point with phi_d > 1e-12 of
/// |normalizer * P(Z_n = v) - phi_d(x(v))|. `lattice` must carry its
/// coefficient form and should be the thinned-increment lattice through Z_0.
LLTStatistic llt_statistic(const SparseLaw& law, const Embedding& embedding, const MomentSummary& m,
                           const LatticeSpec& lattice);

/// Bounded test functions used to compare a random configuration with Phi_d:
/// real and imaginary parts of exp(i<t, x>) for every grid column, and
/// products of smoothed interval indicators Phi((x-a)/s) - Phi((x-b)/s), the
/// same interval on every axis.
struct TestFamily {
  Eigen::MatrixXd t_grid;
  std::vector<std::pair<double, double>> intervals;
  double smoothing = 0.25;

  static TestFamily defaults(int dim);
};

/// max over the family of |Lambda_n^{cs}(f) - Phi_d(f)| for the configuration
/// U_n built from the whole path (n = path length).
double configuration_distance(const UrnPath& path, const IncrementModel& model, const SparseLaw& u0,
                              const MomentSummary& m, const TestFamily& family, bool use_gamma = false);

struct ConvergenceOptions {
  std::vector<std::int64_t> n_list;
  int reps = 200;
  std::vector<double> eps = {0.1, 0.2, 0.3};
  std::uint64_t seed = 1;
  bool use_gamma = false;
  std::optional<TestFamily> family;
};

struct ConvergenceRow {
  std::int64_t n = 0;
  double eps = 0.0;
  double exceedance = 0.0;
  double mean_distance = 0.0;
};

/// Fraction of independent urn runs whose configuration distance exceeds eps.
std::vector<ConvergenceRow> random_config_convergence(const IncrementModel& model, const SparseLaw& u0,
                                                      const ConvergenceOptions& options);

}  // namespace urnlab
