#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace urnlab {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// A color, given by its integer coefficients in the model's generating basis.
struct ColorPoint {
  std::vector<std::int64_t> coeffs;

  ColorPoint() = default;
  explicit ColorPoint(std::vector<std::int64_t> c) : coeffs(std::move(c)) {}
  ColorPoint(std::initializer_list<std::int64_t> c) : coeffs(c) {}

  static ColorPoint zero(int dim) { return ColorPoint(std::vector<std::int64_t>(dim, 0)); }

  int dim() const { return static_cast<int>(coeffs.size()); }
  std::int64_t operator[](int k) const { return coeffs[k]; }
  std::int64_t& operator[](int k) { return coeffs[k]; }

  ColorPoint& operator+=(const ColorPoint& other);
  ColorPoint& operator-=(const ColorPoint& other);
  friend ColorPoint operator+(ColorPoint a, const ColorPoint& b) { return a += b; }
  friend ColorPoint operator-(ColorPoint a, const ColorPoint& b) { return a -= b; }

  bool is_zero() const;

  auto operator<=>(const ColorPoint&) const = default;
  bool operator==(const ColorPoint&) const = default;
};

struct ColorPointHash {
  std::size_t operator()(const ColorPoint& p) const noexcept;
};

/// Maps coefficient vectors into R^d. Rows of `basis` are the generators b_i,
/// so embed(c) = sum_i c_i b_i.
class Embedding {
 public:
  explicit Embedding(Eigen::MatrixXd basis);
  static Embedding identity(int dim);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  double det_abs() const;

  Eigen::VectorXd embed(const ColorPoint& c) const;

 private:
  Eigen::MatrixXd basis_;
};

struct Atom {
  ColorPoint point;
  double prob;
};

/// Finite-support increment distribution p of the underlying walk.
class IncrementModel {
 public:
  IncrementModel(std::string name, std::vector<Atom> atoms, Embedding embedding);

  const std::string& name() const { return name_; }
  int dim() const { return embedding_.dim(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Embedding& embedding() const { return embedding_; }
  /// Embedded atom locations, one column per atom.
  const Eigen::MatrixXd& embedded_atoms() const { return embedded_; }
  Eigen::VectorXd probabilities() const;

  /// Same atoms with the identity embedding; transforms then act on coefficients.
  IncrementModel in_coefficient_space() const;

 private:
  std::string name_;
  std::vector<Atom> atoms_;
  Embedding embedding_;
  Eigen::MatrixXd embedded_;
};

IncrementModel right_shift();
IncrementModel ssrw(int dim);
IncrementModel triangular();

struct MomentSummary {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;  // second-moment matrix E[X^T X]
  Eigen::MatrixXd sigma_sqrt;
  Eigen::MatrixXd sigma_inv_sqrt;
};

MomentSummary moments(const IncrementModel& model);

/// e(lambda) = E exp(<lambda, X>).
double mgf(const IncrementModel& model, const Eigen::Ref<const Eigen::VectorXd>& lambda);

/// E exp(i <t, X>).
std::complex<double> cf(const IncrementModel& model, const Eigen::Ref<const Eigen::VectorXd>& t);

}  // namespace urnlab
