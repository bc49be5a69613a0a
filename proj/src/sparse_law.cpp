#include "urnlab/sparse_law.hpp"

#include <cmath>

#include "urnlab/error.hpp"

namespace urnlab {

double SparseLaw::retained_mass() const {
  double sum = 0.0;
  double comp = 0.0;
  for (const auto& [c, p] : entries) {
    const double y = p - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double SparseLaw::prob(const ColorPoint& c) const {
  const auto it = entries.find(c);
  return it == entries.end() ? 0.0 : it->second;
}

SparseLaw delta_law(const ColorPoint& at) {
  SparseLaw law;
  law.dim = at.dim();
  law.entries.emplace(at, 1.0);
  return law;
}

void validate_initial(const SparseLaw& u0, int dim) {
  if (u0.dim != dim) throw UrnError(ErrorKind::InvalidSpec, "initial configuration has wrong dimension");
  if (u0.entries.empty()) throw UrnError(ErrorKind::InvalidSpec, "initial configuration is empty");
  for (const auto& [c, p] : u0.entries) {
    if (c.dim() != dim || !(p > 0.0)) {
      throw UrnError(ErrorKind::InvalidSpec, "initial configuration has an invalid atom");
    }
  }
  if (std::abs(u0.retained_mass() + u0.pruned_mass - 1.0) > 1e-12) {
    throw UrnError(ErrorKind::InvalidSpec, "initial configuration is not a probability vector");
  }
}

double initial_mgf(const SparseLaw& u0, const Embedding& embedding,
                   const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  double sum = 0.0;
  for (const auto& [c, p] : u0.entries) sum += p * std::exp(lambda.dot(embedding.embed(c)));
  return sum;
}

std::complex<double> initial_cf(const SparseLaw& u0, const Embedding& embedding,
                                const Eigen::Ref<const Eigen::VectorXd>& t) {
  std::complex<double> sum = 0.0;
  for (const auto& [c, p] : u0.entries) sum += p * std::polar(1.0, t.dot(embedding.embed(c)));
  return sum;
}

}  // namespace urnlab
