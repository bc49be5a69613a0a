#include "urnlab/colors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "urnlab/error.hpp"

namespace urnlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::SigmaNotPositiveDefinite: return "SigmaNotPositiveDefinite";
    case ErrorKind::NotLatticeValued: return "NotLatticeValued";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::GammaPole: return "GammaPole";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::SupportCapExceeded: return "SupportCapExceeded";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::LatticeMismatch: return "LatticeMismatch";
  }
  return "Unknown";
}

ColorPoint& ColorPoint::operator+=(const ColorPoint& other) {
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] += other.coeffs[k];
  return *this;
}

ColorPoint& ColorPoint::operator-=(const ColorPoint& other) {
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] -= other.coeffs[k];
  return *this;
}

bool ColorPoint::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](std::int64_t c) { return c == 0; });
}

std::size_t ColorPointHash::operator()(const ColorPoint& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::int64_t c : p.coeffs) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Embedding::Embedding(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() < 1 || basis_.rows() != basis_.cols()) {
    throw UrnError(ErrorKind::InvalidSpec, "embedding basis must be square with d >= 1");
  }
  if (!(std::abs(basis_.determinant()) > 1e-12)) {
    throw UrnError(ErrorKind::InvalidSpec, "embedding basis is singular");
  }
}

Embedding Embedding::identity(int dim) { return Embedding(Eigen::MatrixXd::Identity(dim, dim)); }

double Embedding::det_abs() const { return std::abs(basis_.determinant()); }

Eigen::VectorXd Embedding::embed(const ColorPoint& c) const {
  Eigen::VectorXd coeffs(c.dim());
  for (int k = 0; k < c.dim(); ++k) coeffs[k] = static_cast<double>(c[k]);
  return basis_.transpose() * coeffs;
}

IncrementModel::IncrementModel(std::string name, std::vector<Atom> atoms, Embedding embedding)
    : name_(std::move(name)), atoms_(std::move(atoms)), embedding_(std::move(embedding)) {
  if (atoms_.empty()) throw UrnError(ErrorKind::InvalidSpec, "increment support is empty");
  const int d = embedding_.dim();
  std::set<ColorPoint> seen;
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (a.point.dim() != d) {
      throw UrnError(ErrorKind::InvalidSpec, "atom dimension does not match embedding");
    }
    if (!(a.prob > 0.0 && a.prob <= 1.0)) {
      throw UrnError(ErrorKind::InvalidSpec, "atom probability must lie in (0, 1]");
    }
    if (!seen.insert(a.point).second) {
      throw UrnError(ErrorKind::InvalidSpec, "duplicate atom in increment support");
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw UrnError(ErrorKind::InvalidSpec, "atom probabilities do not sum to 1");
  }
  embedded_.resize(d, static_cast<Eigen::Index>(atoms_.size()));
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    embedded_.col(static_cast<Eigen::Index>(i)) = embedding_.embed(atoms_[i].point);
  }
}

Eigen::VectorXd IncrementModel::probabilities() const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(atoms_.size()));
  for (std::size_t i = 0; i < atoms_.size(); ++i) p[static_cast<Eigen::Index>(i)] = atoms_[i].prob;
  return p;
}

IncrementModel IncrementModel::in_coefficient_space() const {
  return IncrementModel(name_, atoms_, Embedding::identity(dim()));
}

IncrementModel right_shift() {
  return IncrementModel("right-shift", {{ColorPoint{1}, 1.0}}, Embedding::identity(1));
}

IncrementModel ssrw(int dim) {
  if (dim < 1) throw UrnError(ErrorKind::InvalidSpec, "ssrw dimension must be >= 1");
  std::vector<Atom> atoms;
  const double p = 1.0 / (2.0 * dim);
  for (int k = 0; k < dim; ++k) {
    for (int sign : {1, -1}) {
      ColorPoint c = ColorPoint::zero(dim);
      c[k] = sign;
      atoms.push_back({c, p});
    }
  }
  return IncrementModel("ssrw" + std::to_string(dim), std::move(atoms), Embedding::identity(dim));
}

IncrementModel triangular() {
  Eigen::MatrixXd basis(2, 2);
  basis << 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
  // Unit vectors at angles 0, 60, ..., 300 degrees in the basis (1,0), (1/2, sqrt3/2).
  const std::vector<ColorPoint> steps = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  std::vector<Atom> atoms;
  for (const ColorPoint& s : steps) atoms.push_back({s, 1.0 / 6.0});
  return IncrementModel("triangular", std::move(atoms), Embedding(basis));
}

MomentSummary moments(const IncrementModel& model) {
  const Eigen::MatrixXd& x = model.embedded_atoms();
  const Eigen::VectorXd p = model.probabilities();
  MomentSummary m;
  m.mu = x * p;
  m.sigma = x * p.asDiagonal() * x.transpose();
  m.sigma = 0.5 * (m.sigma + m.sigma.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.sigma);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  if (ev.minCoeff() <= 1e-10) {
    throw UrnError(ErrorKind::SigmaNotPositiveDefinite,
                   "second-moment matrix has eigenvalue " + std::to_string(ev.minCoeff()));
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  m.sigma_sqrt = v * ev.cwiseSqrt().asDiagonal() * v.transpose();
  m.sigma_inv_sqrt = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  return m;
}

double mgf(const IncrementModel& model, const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  const Eigen::VectorXd exponents = model.embedded_atoms().transpose() * lambda;
  return model.probabilities().dot(exponents.array().exp().matrix());
}

std::complex<double> cf(const IncrementModel& model, const Eigen::Ref<const Eigen::VectorXd>& t) {
  const Eigen::VectorXd phase = model.embedded_atoms().transpose() * t;
  const Eigen::VectorXd p = model.probabilities();
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index i = 0; i < phase.size(); ++i) {
    re += p[i] * std::cos(phase[i]);
    im += p[i] * std::sin(phase[i]);
  }
  return {re, im};
}

}  // namespace urnlab
