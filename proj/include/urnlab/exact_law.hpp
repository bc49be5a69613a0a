#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>

#include <Eigen/Core>

#include "urnlab/colors.hpp"
#include "urnlab/sparse_law.hpp"

namespace urnlab {

enum class KernelOrder { Ascending, Descending };

struct DpOptions {
  /// Total pruning budget. After step k, cells below prune_eps / (2n) are
  /// dropped smallest first while the cumulative pruned mass stays within
  /// prune_eps * k / n.
  double prune_eps = 0.0;
  /// Maximum number of grid cells the engine may allocate.
  std::size_t support_cap = 50'000'000;
  KernelOrder order = KernelOrder::Ascending;
  /// Called after every convolution with (step, retained mass, pruned mass).
  std::function<void(std::int64_t, double, double)> on_step;
};

/// Law of Z_n = Z_0 + sum_{j<=n} I_j X_j by n-fold convolution with the
/// kernels (1 - 1/(j+1)) delta_0 + 1/(j+1) p. Retained probabilities are
/// one-sided underestimates, short by at most law.pruned_mass in total.
SparseLaw exact_law_dp(const IncrementModel& model, const SparseLaw& u0, std::int64_t n,
                       const DpOptions& options = {});

/// Law of Z_n recovered by discrete Fourier inversion of the product-form
/// characteristic function over a Chernoff window (d <= 2). `grid` is the
/// per-axis DFT length; 0 picks the window width.
SparseLaw exact_law_cf(const IncrementModel& model, const SparseLaw& u0, std::int64_t n, int grid = 0);

/// Law of Z_n by enumerating Bernoulli patterns and multinomial increment
/// counts; shares no code with the convolution engines. n <= 14.
SparseLaw brute_force_law(const IncrementModel& model, const SparseLaw& u0, int n);

struct LawMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Embedded mean and covariance of the retained mass (renormalized).
LawMoments law_moments(const SparseLaw& law, const Embedding& embedding);

/// CSV rows `c0..,x0..,prob`, sorted by coefficients.
void write_law_csv(std::ostream& out, const SparseLaw& law, const Embedding& embedding);

}  // namespace urnlab
