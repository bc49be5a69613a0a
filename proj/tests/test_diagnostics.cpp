#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "urnlab/diagnostics.hpp"
#include "urnlab/error.hpp"
#include "urnlab/exact_law.hpp"
#include "urnlab/gaussian.hpp"

using namespace urnlab;

namespace {

SparseLaw origin(int d) { return delta_law(ColorPoint::zero(d)); }

// Lattice points weighted by phi_d(x(v)) / normalizer: a law whose local
// statistic vanishes when the normalization is right.
SparseLaw lattice_gaussian(const IncrementModel& model, const LatticeSpec& lattice, std::int64_t n, int reach) {
  const MomentSummary m = moments(model);
  const Standardization s = Standardization::make(m, n);
  const double norm = llt_normalizer(m, lattice, n);
  SparseLaw law;
  law.dim = model.dim();
  law.n = n;
  for (int a = -reach; a <= reach; ++a) {
    for (int b = -reach; b <= reach; ++b) {
      const ColorPoint c = model.dim() == 1 ? ColorPoint{a} : ColorPoint{a, b};
      if (model.dim() == 1 && b != 0) continue;
      if (!lattice.contains(c)) continue;
      const double p = gaussian_density(s.apply(model.embedding().embed(c))) / norm;
      if (p > 0.0) law.entries[c] = p;
    }
  }
  return law;
}

}  // namespace

TEST_CASE("gaussian helpers") {
  CHECK(gaussian_density(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(gaussian_density(Eigen::Vector2d::Zero()) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(gaussian_cdf_1d(0.0) == 0.5);
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    CHECK(std::abs(gaussian_cdf_1d(x) + gaussian_cdf_1d(-x) - 1.0) < 1e-15);
  }
  CHECK(gaussian_cdf_1d(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  // E[Phi((X - a)/s)] by quadrature.
  for (double a : {-1.0, 0.0, 0.5, 2.0}) {
    double q = 0.0;
    const double h = 1e-3;
    for (double x = -12.0; x <= 12.0; x += h) q += h * gaussian_density(x) * gaussian_cdf_1d((x - a) / 0.25);
    CHECK(smoothed_step_mean(a, 0.25) == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("standardization") {
  const MomentSummary rs = moments(right_shift());
  const Standardization s = Standardization::make(rs, 1000);
  const double ln = std::log(1000.0);
  const Eigen::VectorXd v = Eigen::VectorXd::Constant(1, std::round(ln));
  CHECK(s.apply(v)[0] == doctest::Approx((std::round(ln) - ln) / std::sqrt(ln)).epsilon(1e-14));
  CHECK(std::abs(s.apply(v)[0]) <= 0.5 / std::sqrt(ln));
  const Standardization g = Standardization::make(rs, 1000, true);
  CHECK(g.center[0] == doctest::Approx(ln + std::numbers::egamma));
  CHECK_THROWS_AS(Standardization::make(rs, 2), UrnError);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  const MomentSummary tri = moments(triangular());
  const Standardization t = Standardization::make(tri, 12345);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d y(5.0 * z(rng), 5.0 * z(rng));
    CHECK((t.invert(t.apply(y)) - y).cwiseAbs().maxCoeff() <= 1e-12);
  }

  DpOptions opt;
  opt.prune_eps = 1e-9;
  for (std::int64_t n : {100LL, 5000LL}) {
    const SparseLaw law = exact_law_dp(ssrw(1), origin(1), n, opt);
    const StandardizedLaw sl = standardize(law, ssrw(1).embedding(), moments(ssrw(1)));
    CHECK(std::abs(sl.probs.sum() - (1.0 - law.pruned_mass)) <= 1e-12);
    CHECK(sl.pruned_mass == law.pruned_mass);
    const auto zero = std::distance(law.entries.begin(), law.entries.find(ColorPoint{0}));
    CHECK(sl.points(0, zero) == 0.0);
  }
}

TEST_CASE("Kolmogorov distance") {
  StandardizedLaw point;
  point.points = Eigen::MatrixXd::Zero(1, 1);
  point.probs = Eigen::VectorXd::Ones(1);
  point.n = 10;
  CHECK(ks_distance_1d(point).value == doctest::Approx(0.5).epsilon(1e-15));

  StandardizedLaw two;
  two.points.resize(1, 3);
  two.points << 1.0, -1.0, 1.0;
  two.probs = Eigen::Vector3d(0.25, 0.5, 0.25);
  const double expect =
      std::max({gaussian_cdf_1d(-1.0), std::abs(0.5 - gaussian_cdf_1d(-1.0)), std::abs(0.5 - gaussian_cdf_1d(1.0)),
                1.0 - gaussian_cdf_1d(1.0)});
  CHECK(ks_distance_1d(two).value == doctest::Approx(expect).epsilon(1e-15));
  two.pruned_mass = 1e-3;
  CHECK(ks_distance_1d(two).upper_bound() == doctest::Approx(expect + 1e-3));

  DpOptions opt;
  opt.prune_eps = 1e-10;
  const MomentSummary m = moments(right_shift());
  const auto ks = [&](std::int64_t n) {
    return ks_distance_1d(standardize(exact_law_dp(right_shift(), origin(1), n, opt), right_shift().embedding(), m))
        .value;
  };
  const double big = ks(1'000'000);
  CHECK(big < ks(100));
  CHECK(big >= 0.01);
}

TEST_CASE("characteristic function distance") {
  const Eigen::MatrixXd grid = default_t_grid(2);
  REQUIRE(grid.cols() == 81);
  CHECK(grid.minCoeff() == -3.0);
  CHECK(grid.maxCoeff() == 3.0);

  StandardizedLaw point;
  point.points = Eigen::MatrixXd::Zero(2, 1);
  point.probs = Eigen::VectorXd::Ones(1);
  const Eigen::MatrixXd origin_only = Eigen::MatrixXd::Zero(2, 1);
  CHECK(cf_distance(point, origin_only).value == 0.0);
  CHECK(cf_distance(point, grid).value == doctest::Approx(1.0 - std::exp(-9.0)).epsilon(1e-14));

  const MomentSummary m = moments(ssrw(2));
  const auto dist = [&](std::int64_t n) {
    DpOptions opt;
    opt.prune_eps = 1e-10;
    return cf_distance(standardize(exact_law_dp(ssrw(2), origin(2), n, opt), ssrw(2).embedding(), m), grid).value;
  };
  CHECK(dist(100000) < dist(100));
}

TEST_CASE("local statistic normalization is self-consistent") {
  for (const IncrementModel& model : {ssrw(1), ssrw(2), triangular()}) {
    const LatticeSpec lattice = detect_lattice(model, true);
    const SparseLaw law = lattice_gaussian(model, lattice, 10000, 60);
    const LLTStatistic s = llt_statistic(law, model.embedding(), moments(model), lattice);
    CAPTURE(model.name());
    CHECK(s.sup_value <= 1e-3);
    CHECK(s.normalizer > 0.0);
    CHECK(s.points_checked >= law.support_size());
  }
  const MomentSummary m1 = moments(ssrw(1));
  CHECK(llt_normalizer(m1, detect_lattice(ssrw(1), true), 10000) == doctest::Approx(std::sqrt(std::log(1e4))));
  const MomentSummary m2 = moments(ssrw(2));
  CHECK(llt_normalizer(m2, detect_lattice(ssrw(2), true), 10000) == doctest::Approx(0.5 * std::log(1e4)));
}

TEST_CASE("local statistic ladders and guards") {
  const MomentSummary m1 = moments(ssrw(1));
  const LatticeSpec l1 = detect_lattice(ssrw(1), true);
  DpOptions opt;
  opt.prune_eps = 1e-10;
  double prev = INFINITY;
  for (std::int64_t n : {100LL, 10000LL, 1000000LL}) {
    const LLTStatistic s = llt_statistic(exact_law_dp(ssrw(1), origin(1), n, opt), ssrw(1).embedding(), m1, l1);
    CHECK(s.sup_value < prev);
    CHECK(s.sup_value >= 0.0);
    prev = s.sup_value;
  }
  SparseLaw point = origin(2);
  point.n = 100;
  const LLTStatistic empty_ball =
      llt_statistic(point, ssrw(2).embedding(), moments(ssrw(2)), detect_lattice(ssrw(2), true));
  CHECK(empty_ball.points_checked > 100);
  const Standardization st = Standardization::make(moments(ssrw(2)), 100);
  CHECK(empty_ball.sup_value >= gaussian_density(st.apply(Eigen::Vector2d(1.0, 0.0))));

  const SparseLaw law = exact_law_dp(ssrw(2), origin(2), 100);

  const LatticeSpec checker = detect_lattice(ssrw(2), false);
  try {
    llt_statistic(law, ssrw(2).embedding(), moments(ssrw(2)), checker);
    FAIL("expected LatticeMismatch");
  } catch (const UrnError& e) {
    CHECK(e.kind() == ErrorKind::LatticeMismatch);
  }
}

TEST_CASE("random configuration distance") {
  const IncrementModel model = ssrw(1);
  const MomentSummary m = moments(model);
  const TestFamily family = TestFamily::defaults(1);
  CHECK(family.t_grid.cols() == 9);
  CHECK(family.intervals.size() == 4);

  // Direct evaluation from the materialized configuration.
  const UrnPath path = sample_path(model, origin(1), 500, 21);
  const UrnConfig u = materialize_config(path, model, origin(1), 500);
  const Standardization s = Standardization::make(m, 500);
  double direct = 0.0;
  for (Eigen::Index c = 0; c < family.t_grid.cols(); ++c) {
    std::complex<double> acc = 0.0;
    for (const auto& [v, w] : u) acc += w * std::exp(std::complex<double>(0.0, family.t_grid(0, c) * s.apply(model.embedding().embed(v))[0]));
    acc /= 501.0;
    direct = std::max({direct, std::abs(acc.real() - std::exp(-0.5 * family.t_grid(0, c) * family.t_grid(0, c))),
                       std::abs(acc.imag())});
  }
  for (const auto& [a, b] : family.intervals) {
    double acc = 0.0;
    for (const auto& [v, w] : u) {
      const double x = s.apply(model.embedding().embed(v))[0];
      acc += w * (gaussian_cdf_1d((x - a) / 0.25) - gaussian_cdf_1d((x - b) / 0.25));
    }
    const double target = smoothed_step_mean(a, 0.25) - smoothed_step_mean(b, 0.25);
    direct = std::max(direct, std::abs(acc / 501.0 - target));
  }
  CHECK(configuration_distance(path, model, origin(1), m, family) == doctest::Approx(direct).epsilon(1e-12));

  ConvergenceOptions opt;
  opt.n_list = {100, 1000};
  opt.reps = 100;
  opt.eps = {0.3, 2.0};
  opt.seed = 9;
  const auto rows = random_config_convergence(model, origin(1), opt);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].exceedance == 0.0);
  CHECK(rows[3].exceedance == 0.0);
  const auto again = random_config_convergence(model, origin(1), opt);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].mean_distance == again[i].mean_distance);
  opt.reps = 50;
  CHECK_THROWS_AS(random_config_convergence(model, origin(1), opt), UrnError);
}
