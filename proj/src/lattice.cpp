#include "urnlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/LU>

#include "urnlab/error.hpp"

namespace urnlab {
namespace {

struct ExtendedGcd {
  std::int64_t g, x, y;  // x*a + y*b = g >= 0
};

ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
    old_t -= q * t;
    std::swap(old_t, t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

// Best rational approximation p/q of x with q <= max_den, via continued fractions.
bool reconstruct_rational(double x, std::int64_t max_den, std::int64_t& num, std::int64_t& den) {
  const double tol = 1e-13 * std::max(1.0, std::abs(x));
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    if (std::abs(a) > 1e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) {
      num = p1;
      den = q1;
      return true;
    }
    const double frac = rest - a;
    if (frac == 0.0) break;
    rest = 1.0 / frac;
  }
  return false;
}

}  // namespace

bool LatticeSpec::contains(const ColorPoint& c) const {
  if (!has_coeff_form()) {
    throw UrnError(ErrorKind::InvalidSpec, "lattice has no coefficient form");
  }
  std::vector<std::int64_t> r(c.coeffs);
  for (int k = 0; k < dim; ++k) r[k] -= coeff_offset[k];
  for (Eigen::Index i = 0; i < coeff_basis.rows(); ++i) {
    Eigen::Index pivot = 0;
    while (pivot < coeff_basis.cols() && coeff_basis(i, pivot) == 0) ++pivot;
    if (pivot == coeff_basis.cols()) continue;
    if (r[pivot] % coeff_basis(i, pivot) != 0) return false;
    const std::int64_t k = r[pivot] / coeff_basis(i, pivot);
    for (Eigen::Index j = 0; j < coeff_basis.cols(); ++j) r[j] -= k * coeff_basis(i, j);
  }
  return std::all_of(r.begin(), r.end(), [](std::int64_t v) { return v == 0; });
}

LatticeSpec LatticeSpec::shifted(const ColorPoint& by, const Embedding& embedding) const {
  LatticeSpec out = *this;
  out.offset += embedding.embed(by);
  if (has_coeff_form()) out.coeff_offset += by;
  return out;
}

IntMatrix hermite_normal_form(IntMatrix a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Eigen::Index r = 0;
  for (Eigen::Index col = 0; col < cols && r < rows; ++col) {
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (a(i, col) == 0) continue;
      const std::int64_t x = a(r, col);
      const std::int64_t y = a(i, col);
      const ExtendedGcd e = extended_gcd(x, y);
      const Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic> row_r = a.row(r);
      const Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic> row_i = a.row(i);
      a.row(r) = e.x * row_r + e.y * row_i;
      a.row(i) = (x / e.g) * row_i - (y / e.g) * row_r;
    }
    if (a(r, col) == 0) continue;
    if (a(r, col) < 0) a.row(r) *= -1;
    for (Eigen::Index i = 0; i < r; ++i) {
      const std::int64_t q = floor_div(a(i, col), a(r, col));
      if (q != 0) a.row(i) -= q * a.row(r);
    }
    ++r;
  }
  return a.topRows(r);
}

LatticeSpec detect_span_1d(std::span<const double> support, bool include_zero) {
  if (support.empty()) throw UrnError(ErrorKind::InvalidSpec, "empty support");
  std::vector<double> values(support.begin(), support.end());
  if (include_zero) values.push_back(0.0);

  constexpr std::int64_t kMaxDen = 1'000'000;
  std::vector<std::int64_t> nums(values.size());
  std::int64_t common = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::int64_t num = 0, den = 1;
    if (!reconstruct_rational(values[i], kMaxDen, num, den)) {
      throw UrnError(ErrorKind::NotLatticeValued,
                     "no rational with denominator <= 1e6 matches " + std::to_string(values[i]));
    }
    nums[i] = num;
    const std::int64_t next = std::lcm(common, den);
    if (next > 1'000'000'000'000LL) {
      throw UrnError(ErrorKind::NotLatticeValued, "common denominator too large");
    }
    // rescale numerators already collected
    const std::int64_t scale = next / common;
    for (std::size_t j = 0; j < i; ++j) nums[j] *= scale;
    nums[i] *= next / den;
    common = next;
  }

  std::int64_t g = 0;
  for (std::size_t i = 1; i < nums.size(); ++i) g = std::gcd(g, std::abs(nums[i] - nums[0]));
  if (g == 0) {
    throw UrnError(ErrorKind::NotLatticeValued, "single-point support has no finite span");
  }

  LatticeSpec spec;
  spec.dim = 1;
  const double h = static_cast<double>(g) / static_cast<double>(common);
  spec.basis = Eigen::MatrixXd::Constant(1, 1, h);
  spec.det_abs = h;
  spec.offset =
      Eigen::VectorXd::Constant(1, static_cast<double>(floor_mod(nums[0], g)) / static_cast<double>(common));
  return spec;
}

namespace {

std::vector<ColorPoint> support_points(const IncrementModel& model, bool include_zero) {
  std::set<ColorPoint> pts;
  for (const Atom& a : model.atoms()) pts.insert(a.point);
  if (include_zero) pts.insert(ColorPoint::zero(model.dim()));
  return {pts.begin(), pts.end()};
}

LatticeSpec detect_lattice_1d(const IncrementModel& model, bool include_zero) {
  const std::vector<ColorPoint> pts = support_points(model, include_zero);
  std::int64_t g = 0;
  for (const ColorPoint& p : pts) g = std::gcd(g, std::abs(p[0] - pts.front()[0]));
  if (g == 0) {
    throw UrnError(ErrorKind::NotLatticeValued, "single-point support has no finite span");
  }
  const double b = model.embedding().basis()(0, 0);
  LatticeSpec spec;
  spec.dim = 1;
  spec.coeff_basis = IntMatrix::Constant(1, 1, g);
  spec.coeff_offset = ColorPoint{floor_mod(pts.front()[0], g)};
  spec.basis = Eigen::MatrixXd::Constant(1, 1, static_cast<double>(g) * b);
  spec.det_abs = std::abs(static_cast<double>(g) * b);
  spec.offset = model.embedding().embed(spec.coeff_offset);
  return spec;
}

}  // namespace

LatticeSpec detect_minimal_lattice(const IncrementModel& model, bool include_zero) {
  const int d = model.dim();
  if (d < 2) throw UrnError(ErrorKind::InvalidSpec, "minimal-lattice detection needs d >= 2");
  const std::vector<ColorPoint> pts = support_points(model, include_zero);
  const ColorPoint& base = pts.front();  // lexicographically smallest

  IntMatrix diffs(static_cast<Eigen::Index>(pts.size()), d);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int k = 0; k < d; ++k) diffs(static_cast<Eigen::Index>(i), k) = pts[i][k] - base[k];
  }
  IntMatrix hnf = hermite_normal_form(diffs);
  if (hnf.rows() < d) {
    throw UrnError(ErrorKind::RankDeficient, "support differences span rank " +
                                                 std::to_string(hnf.rows()) + " < " +
                                                 std::to_string(d));
  }

  LatticeSpec spec;
  spec.dim = d;
  spec.coeff_basis = hnf;
  spec.coeff_offset = base;
  spec.basis = hnf.cast<double>() * model.embedding().basis();
  spec.det_abs = std::abs(spec.basis.determinant());
  spec.offset = model.embedding().embed(base);
  return spec;
}

LatticeSpec detect_lattice(const IncrementModel& model, bool include_zero) {
  return model.dim() == 1 ? detect_lattice_1d(model, include_zero)
                          : detect_minimal_lattice(model, include_zero);
}

}  // namespace urnlab
