#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Core>

#include "urnlab/colors.hpp"

namespace urnlab {

/// Finitely supported probability mass function over colors, with the mass
/// discarded by pruning tracked separately. Used both for U_0 (n = 0) and for
/// the law of Z_n.
struct SparseLaw {
  int dim = 0;
  std::map<ColorPoint, double> entries;
  double pruned_mass = 0.0;
  std::int64_t n = 0;
  std::string model_id;

  double retained_mass() const;
  double prob(const ColorPoint& c) const;
  std::size_t support_size() const { return entries.size(); }
};

SparseLaw delta_law(const ColorPoint& at);

/// Checks that `u0` is a valid initial configuration of dimension `dim`.
void validate_initial(const SparseLaw& u0, int dim);

/// U_0 x(lambda) = sum_v U_{0,v} exp(<lambda, embed(v)>).
double initial_mgf(const SparseLaw& u0, const Embedding& embedding,
                   const Eigen::Ref<const Eigen::VectorXd>& lambda);

/// sum_v U_{0,v} exp(i <t, embed(v)>).
std::complex<double> initial_cf(const SparseLaw& u0, const Embedding& embedding,
                                const Eigen::Ref<const Eigen::VectorXd>& t);

}  // namespace urnlab
