#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_set>

#include "urnlab/colors.hpp"
#include "urnlab/error.hpp"

using namespace urnlab;

namespace {

std::vector<IncrementModel> builtin_models() { return {right_shift(), ssrw(1), ssrw(2), ssrw(3), triangular()}; }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const UrnError& e) {
    return e.kind();
  }
  FAIL("no UrnError thrown");
  return ErrorKind::InvalidSpec;
}

}  // namespace

TEST_CASE("color points compare and hash coefficient-wise") {
  const ColorPoint a{1, -2};
  const ColorPoint b{1, -2};
  const ColorPoint c{-2, 1};
  CHECK(a == b);
  CHECK(a != c);
  CHECK(ColorPointHash{}(a) == ColorPointHash{}(b));
  CHECK(a + c == ColorPoint{-1, -1});
  CHECK(a - b == ColorPoint::zero(2));
  CHECK((a - b).is_zero());
  std::unordered_set<ColorPoint, ColorPointHash> set{a, b, c};
  CHECK(set.size() == 2);
}

TEST_CASE("embedding maps unit coefficients to generators") {
  const IncrementModel tri = triangular();
  const Embedding& e = tri.embedding();
  const Eigen::VectorXd b0 = e.embed(ColorPoint{1, 0});
  const Eigen::VectorXd b1 = e.embed(ColorPoint{0, 1});
  CHECK(b0.isApprox(Eigen::Vector2d(1.0, 0.0)));
  CHECK(b1.isApprox(Eigen::Vector2d(0.5, std::sqrt(3.0) / 2.0)));
  CHECK(kind_of([] { Embedding(Eigen::MatrixXd::Zero(2, 2)); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("builders") {
  const IncrementModel s2 = ssrw(2);
  REQUIRE(s2.atoms().size() == 4);
  for (const Atom& a : s2.atoms()) CHECK(a.prob == 0.25);

  const IncrementModel rs = right_shift();
  REQUIRE(rs.atoms().size() == 1);
  CHECK(rs.atoms()[0].point == ColorPoint{1});
  CHECK(rs.atoms()[0].prob == 1.0);

  const IncrementModel tri = triangular();
  REQUIRE(tri.atoms().size() == 6);
  for (Eigen::Index k = 0; k < tri.embedded_atoms().cols(); ++k) {
    CHECK(std::abs(tri.embedded_atoms().col(k).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("invalid models are rejected") {
  const Embedding id = Embedding::identity(1);
  CHECK(kind_of([&] { IncrementModel("e", {}, id); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([&] { IncrementModel("s", {{ColorPoint{1}, 0.6}, {ColorPoint{-1}, 0.6}}, id); }) ==
        ErrorKind::InvalidSpec);
  CHECK(kind_of([&] { IncrementModel("d", {{ColorPoint{1}, 0.5}, {ColorPoint{1}, 0.5}}, id); }) ==
        ErrorKind::InvalidSpec);
  CHECK(kind_of([&] { IncrementModel("z", {{ColorPoint{1}, 1.0}, {ColorPoint{2}, 0.0}}, id); }) ==
        ErrorKind::InvalidSpec);
  CHECK(kind_of([&] { IncrementModel("w", {{ColorPoint{1, 0}, 1.0}}, id); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("moments of the built-in walks") {
  for (int d = 1; d <= 3; ++d) {
    const MomentSummary m = moments(ssrw(d));
    CHECK(m.mu.isZero(0.0));
    CHECK(m.sigma == Eigen::MatrixXd::Identity(d, d) / static_cast<double>(d));
  }
  const MomentSummary rs = moments(right_shift());
  CHECK(rs.mu[0] == 1.0);
  CHECK(rs.sigma(0, 0) == 1.0);

  const MomentSummary tri = moments(triangular());
  CHECK(tri.mu.norm() < 1e-12);
  CHECK((tri.sigma - 0.5 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate second-moment matrix is refused") {
  const IncrementModel line("line", {{ColorPoint{1, 0}, 0.5}, {ColorPoint{-1, 0}, 0.5}}, Embedding::identity(2));
  CHECK(kind_of([&] { moments(line); }) == ErrorKind::SigmaNotPositiveDefinite);
}

TEST_CASE("mgf and cf examples") {
  const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(mgf(right_shift(), one) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(mgf(ssrw(1), one) == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  const Eigen::VectorXd pi = Eigen::VectorXd::Constant(1, std::numbers::pi);
  CHECK(std::abs(cf(ssrw(1), pi) - std::complex<double>(-1.0, 0.0)) < 1e-15);
  const Eigen::VectorXd half_pi = Eigen::VectorXd::Constant(1, std::numbers::pi / 2.0);
  CHECK(std::abs(cf(right_shift(), half_pi) - std::complex<double>(0.0, 1.0)) < 1e-15);
}

TEST_CASE("transform and moment invariants hold for every model") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> t(-10.0, 10.0);
  for (const IncrementModel& model : builtin_models()) {
    CAPTURE(model.name());
    CHECK(std::abs(model.probabilities().sum() - 1.0) < 1e-12);
    CHECK(mgf(model, Eigen::VectorXd::Zero(model.dim())) == 1.0);
    CHECK(std::abs(cf(model, Eigen::VectorXd::Zero(model.dim())) - 1.0) <= 1e-15);
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::VectorXd x(model.dim());
      for (int k = 0; k < model.dim(); ++k) x[k] = t(rng);
      CHECK(std::abs(cf(model, x)) <= 1.0 + 1e-12);
    }
    const MomentSummary m = moments(model);
    CHECK((m.sigma - m.sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((m.sigma_sqrt * m.sigma_sqrt - m.sigma).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((m.sigma_inv_sqrt * m.sigma_sqrt - Eigen::MatrixXd::Identity(model.dim(), model.dim()))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
  }
}
