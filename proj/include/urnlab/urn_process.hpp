#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "urnlab/colors.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/sparse_law.hpp"

namespace urnlab {

/// Colors V_0..V_{n-1} drawn by one run of the urn; V_m is a realization of Z_m.
struct UrnPath {
  int dim = 0;
  std::uint64_t seed = 0;
  ColorPoint z0;  // the draw taken from U_0 at m = 0
  std::vector<std::int64_t> draws;  // row-major, length() * dim

  std::int64_t length() const { return dim == 0 ? 0 : static_cast<std::int64_t>(draws.size()) / dim; }
  std::span<const std::int64_t> draw(std::int64_t m) const {
    return {draws.data() + m * dim, static_cast<std::size_t>(dim)};
  }
  ColorPoint color(std::int64_t m) const;
};

/// Urn configuration U_n as color -> mass (total mass n + 1).
using UrnConfig = std::map<ColorPoint, double>;

/// Draws from a finite distribution by inverse CDF.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::vector<double> weights);
  std::size_t operator()(SplitMix64& rng) const;

 private:
  std::vector<double> cumulative_;
};

/// O(1)-per-draw sampler: draw m picks an ancestor K uniformly from {0..m};
/// K = 0 samples U_0, otherwise V_{K-1} + X with a fresh increment X.
UrnPath sample_path(const IncrementModel& model, const SparseLaw& u0, std::int64_t n, std::uint64_t seed);

/// Reference sampler that keeps U_n explicitly and draws proportionally to
/// it. n <= 1e5.
UrnPath sample_path_naive(const IncrementModel& model, const SparseLaw& u0, std::int64_t n,
                          std::uint64_t seed);

/// U_m = U_0 + sum_{j<m} R_{V_j}.
UrnConfig materialize_config(const UrnPath& path, const IncrementModel& model, const SparseLaw& u0,
                             std::int64_t m);

/// E[U_{n+1} x(lambda) | U_n] evaluated term by term from the configuration:
/// sum_v (U_v / |U|) (U x(lambda) + R_v x(lambda)).
double one_step_expectation(const UrnConfig& config, const IncrementModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& lambda);

/// U x(lambda) = sum_v U_v exp(<lambda, embed(v)>).
double config_transform(const UrnConfig& config, const Embedding& embedding,
                        const Eigen::Ref<const Eigen::VectorXd>& lambda);

}  // namespace urnlab
