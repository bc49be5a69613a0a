#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "urnlab/colors.hpp"
#include "urnlab/error.hpp"
#include "urnlab/lattice.hpp"

using namespace urnlab;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const UrnError& e) {
    return e.kind();
  }
  FAIL("no UrnError thrown");
  return ErrorKind::InvalidSpec;
}

double int_det(const IntMatrix& m) { return m.cast<double>().determinant(); }

bool on_lattice(const LatticeSpec& s, const Eigen::VectorXd& x) {
  const Eigen::VectorXd c = s.basis.transpose().fullPivLu().solve(x - s.offset);
  return (c - c.array().round().matrix()).cwiseAbs().maxCoeff() < 1e-9;
}

}  // namespace

TEST_CASE("one-dimensional spans") {
  const std::vector<double> pm{-1.0, 1.0};
  const LatticeSpec plain = detect_span_1d(pm, false);
  CHECK(plain.det_abs == doctest::Approx(2.0));
  CHECK(plain.offset[0] == doctest::Approx(1.0));
  const LatticeSpec thinned = detect_span_1d(pm, true);
  CHECK(thinned.det_abs == doctest::Approx(1.0));
  CHECK(thinned.offset[0] == doctest::Approx(0.0));

  const std::vector<double> odd{1.0, 3.0};
  const LatticeSpec s = detect_span_1d(odd, false);
  CHECK(s.det_abs == doctest::Approx(2.0));
  CHECK(s.offset[0] == doctest::Approx(1.0));

  const std::vector<double> thirds{1.0 / 3.0, 1.0};
  CHECK(detect_span_1d(thirds, false).det_abs == doctest::Approx(2.0 / 3.0));
  CHECK(detect_span_1d(thirds, true).det_abs == doctest::Approx(1.0 / 3.0));

  const std::vector<double> irrational{1.0, std::sqrt(2.0)};
  CHECK(kind_of([&] { detect_span_1d(irrational, false); }) == ErrorKind::NotLatticeValued);
}

TEST_CASE("model lattices in one dimension") {
  const LatticeSpec inc = detect_lattice(ssrw(1), false);
  CHECK(inc.det_abs == 2.0);
  const LatticeSpec thin = detect_lattice(ssrw(1), true);
  CHECK(thin.det_abs == 1.0);
  CHECK(kind_of([] { detect_lattice(right_shift(), false); }) == ErrorKind::NotLatticeValued);
  CHECK(detect_lattice(right_shift(), true).det_abs == 1.0);
}

TEST_CASE("minimal lattices in two dimensions") {
  const LatticeSpec thin = detect_minimal_lattice(ssrw(2), true);
  CHECK(thin.det_abs == doctest::Approx(1.0));
  CHECK(thin.coeff_basis == IntMatrix::Identity(2, 2));

  const LatticeSpec checker = detect_minimal_lattice(ssrw(2), false);
  CHECK(checker.det_abs == doctest::Approx(2.0));
  CHECK(checker.contains(ColorPoint{1, 0}));
  CHECK(checker.contains(ColorPoint{1, 2}));
  CHECK_FALSE(checker.contains(ColorPoint{0, 0}));
  CHECK(checker.contains(ColorPoint{2, 1}));
  CHECK_FALSE(checker.contains(ColorPoint{1, 1}));

  const IncrementModel corner("corner", {{ColorPoint{1, 0}, 0.25}, {ColorPoint{0, 1}, 0.25}, {ColorPoint{0, 0}, 0.5}},
                              Embedding::identity(2));
  CHECK(detect_minimal_lattice(corner, false).det_abs == doctest::Approx(1.0));

  const LatticeSpec tri = detect_minimal_lattice(triangular(), true);
  CHECK(tri.det_abs == doctest::Approx(std::sqrt(3.0) / 2.0));

  const IncrementModel line("line", {{ColorPoint{1, 0}, 0.5}, {ColorPoint{-1, 0}, 0.5}}, Embedding::identity(2));
  CHECK(kind_of([&] { detect_minimal_lattice(line, true); }) == ErrorKind::RankDeficient);
  CHECK(kind_of([] { detect_minimal_lattice(ssrw(1), true); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("lattice invariants for every model") {
  for (const IncrementModel& model : {ssrw(1), ssrw(2), ssrw(3), triangular()}) {
    for (bool thinned : {false, true}) {
      CAPTURE(model.name());
      CAPTURE(thinned);
      const LatticeSpec s = detect_lattice(model, thinned);
      CHECK(std::abs(std::abs(s.basis.determinant()) - s.det_abs) <= 1e-10);
      for (const Atom& a : model.atoms()) {
        CHECK(s.contains(a.point));
        CHECK(on_lattice(s, model.embedding().embed(a.point)));
      }
      if (thinned) CHECK(s.contains(ColorPoint::zero(model.dim())));
    }
  }
}

TEST_CASE("Hermite normal form properties on random integer matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> entry(-9, 9);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 3;
    const int rows = d + trial % 4;
    IntMatrix g(rows, d);
    for (int i = 0; i < rows; ++i) {
      for (int k = 0; k < d; ++k) g(i, k) = entry(rng);
    }
    const IntMatrix h = hermite_normal_form(g);
    if (h.rows() < d) continue;
    REQUIRE(h.rows() == d);
    for (int i = 0; i < d; ++i) {
      CHECK(h(i, i) > 0);
      for (int k = 0; k < i; ++k) CHECK(h(i, k) == 0);
      for (int r = 0; r < i; ++r) CHECK((h(r, i) >= 0 && h(r, i) < h(i, i)));
    }
    // Every generator lies in the row lattice of h.
    const Eigen::MatrixXd hinv = h.cast<double>().inverse();
    for (int i = 0; i < rows; ++i) {
      const Eigen::RowVectorXd c = g.row(i).cast<double>() * hinv;
      CHECK((c - c.array().round().matrix()).cwiseAbs().maxCoeff() < 1e-9);
    }
    // Square input: same lattice, same determinant.
    if (rows == d) CHECK(std::abs(int_det(h)) == doctest::Approx(std::abs(int_det(g))));
  }
}
