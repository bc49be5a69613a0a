#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "urnlab/exact_law.hpp"
#include "urnlab/martingale.hpp"
#include "urnlab/product_formula.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/urn_process.hpp"

using namespace urnlab;

namespace {

SparseLaw origin(int d) { return delta_law(ColorPoint::zero(d)); }

std::map<ColorPoint, double> empirical_last(const IncrementModel& model, const SparseLaw& u0, std::int64_t n,
                                            int reps, std::uint64_t seed, bool naive) {
  std::map<ColorPoint, double> counts;
  for (int r = 0; r < reps; ++r) {
    const std::uint64_t s = stream_seed(seed, static_cast<std::uint64_t>(r));
    const UrnPath path = naive ? sample_path_naive(model, u0, n, s) : sample_path(model, u0, n, s);
    counts[path.color(n - 1)] += 1.0;
  }
  return counts;
}

// p-value of the two-sample chi-square homogeneity test on two count tables.
double homogeneity_p_value(const std::map<ColorPoint, double>& a, const std::map<ColorPoint, double>& b) {
  double na = 0.0, nb = 0.0;
  for (const auto& [c, k] : a) na += k;
  for (const auto& [c, k] : b) nb += k;
  std::map<ColorPoint, std::pair<double, double>> cells;
  for (const auto& [c, k] : a) cells[c].first = k;
  for (const auto& [c, k] : b) cells[c].second = k;
  double stat = 0.0;
  int bins = 0;
  std::pair<double, double> pooled{0.0, 0.0};
  auto add = [&](double x, double y) {
    const double tot = x + y;
    const double ea = tot * na / (na + nb);
    const double eb = tot * nb / (na + nb);
    stat += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
    ++bins;
  };
  for (const auto& [c, xy] : cells) {
    if (xy.first + xy.second < 10.0) {
      pooled.first += xy.first;
      pooled.second += xy.second;
    } else {
      add(xy.first, xy.second);
    }
  }
  if (pooled.first + pooled.second > 0.0) add(pooled.first, pooled.second);
  const boost::math::chi_squared dist(bins - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("paths are reproducible from the seed") {
  const UrnPath a = sample_path(triangular(), origin(2), 5000, 99);
  const UrnPath b = sample_path(triangular(), origin(2), 5000, 99);
  const UrnPath c = sample_path(triangular(), origin(2), 5000, 100);
  CHECK(a.length() == 5000);
  CHECK(a.draws == b.draws);
  CHECK(a.draws != c.draws);
  const UrnPath na = sample_path_naive(ssrw(1), origin(1), 300, 5);
  CHECK(na.draws == sample_path_naive(ssrw(1), origin(1), 300, 5).draws);
}

TEST_CASE("right-shift paths stay on the non-negative integers") {
  const UrnPath p = sample_path(right_shift(), origin(1), 10000, 3);
  CHECK(p.color(0) == ColorPoint{0});
  for (std::int64_t m = 0; m < p.length(); ++m) {
    CHECK(p.draw(m)[0] >= 0);
    CHECK(p.draw(m)[0] <= m);
  }
}

TEST_CASE("first draw comes from the initial configuration") {
  SparseLaw u0;
  u0.dim = 1;
  u0.entries[ColorPoint{-4}] = 0.2;
  u0.entries[ColorPoint{7}] = 0.8;
  const auto counts = empirical_last(ssrw(1), u0, 1, 100000, 11, false);
  REQUIRE(counts.size() == 2);
  const double p = counts.at(ColorPoint{7}) / 100000.0;
  CHECK(std::abs(p - 0.8) < 3.0 * std::sqrt(0.8 * 0.2 / 100000.0));
}

TEST_CASE("empirical law of Z_5 matches the enumerated law") {
  const int reps = 1'000'000;
  for (const IncrementModel& model : {ssrw(1), triangular()}) {
    const SparseLaw exact = brute_force_law(model, origin(model.dim()), 5);
    const auto counts = empirical_last(model, origin(model.dim()), 6, reps, 2024, false);
    for (const auto& [c, k] : counts) CHECK(exact.prob(c) > 0.0);
    for (const auto& [c, p] : exact.entries) {
      const auto it = counts.find(c);
      const double hat = (it == counts.end() ? 0.0 : it->second) / reps;
      CAPTURE(model.name());
      CHECK(std::abs(hat - p) <= 3.0 * std::sqrt(p * (1.0 - p) / reps) + 1e-12);
    }
  }
}

TEST_CASE("fast and naive samplers agree in law") {
  const auto fast = empirical_last(ssrw(1), origin(1), 11, 100000, 77, false);
  const auto naive = empirical_last(ssrw(1), origin(1), 11, 100000, 78, true);
  CHECK(homogeneity_p_value(fast, naive) > 0.001);

  const auto fast3 = empirical_last(triangular(), origin(2), 4, 1'000'000, 5, false);
  const auto naive3 = empirical_last(triangular(), origin(2), 4, 1'000'000, 6, true);
  CHECK(homogeneity_p_value(fast3, naive3) > 0.001);
  const SparseLaw exact = brute_force_law(triangular(), origin(2), 3);
  for (const auto& [c, p] : exact.entries) {
    const double hat = naive3.count(c) ? naive3.at(c) / 1e6 : 0.0;
    CHECK(std::abs(hat - p) <= 3.0 * std::sqrt(p * (1.0 - p) / 1e6) + 1e-12);
  }
  CHECK_THROWS(sample_path_naive(ssrw(1), origin(1), 100001, 1));
}

TEST_CASE("configurations carry mass n + 1") {
  const IncrementModel model = ssrw(2);
  const UrnPath path = sample_path_naive(model, origin(2), 200, 8);
  for (std::int64_t m = 0; m <= 200; m += 13) {
    double mass = 0.0;
    for (const auto& [c, w] : materialize_config(path, model, origin(2), m)) mass += w;
    CHECK(std::abs(mass - static_cast<double>(m + 1)) <= 1e-9);
  }
  const UrnConfig u1 = materialize_config(path, model, origin(2), 1);
  CHECK(u1.at(ColorPoint{0, 0}) == 1.0);
  for (const Atom& a : model.atoms()) CHECK(u1.at(a.point) == a.prob);
}

TEST_CASE("exact one-step expectation is the martingale factor") {
  SplitMix64 rng(31337);
  for (const IncrementModel& model : {right_shift(), ssrw(1), ssrw(2), triangular()}) {
    const int d = model.dim();
    double worst = 0.0;
    for (int state = 0; state < 100; ++state) {
      const std::int64_t m = 1 + static_cast<std::int64_t>(rng.below(400));
      const UrnPath path = sample_path(model, origin(d), m, rng());
      const UrnConfig config = materialize_config(path, model, origin(d), m);
      Eigen::VectorXd lambda(d);
      for (int k = 0; k < d; ++k) lambda[k] = 0.6 * rng.uniform() - 0.3;
      const double ux = config_transform(config, model.embedding(), lambda);
      const double expected = (1.0 + mgf(model, lambda) / static_cast<double>(m + 1)) * ux;
      worst = std::max(worst, std::abs(one_step_expectation(config, model, lambda) / expected - 1.0));
    }
    CAPTURE(model.name());
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("martingale trace structure") {
  const IncrementModel model = ssrw(2);
  const UrnPath path = sample_path(model, origin(2), 2000, 4);
  const Eigen::Vector2d lambda(0.4, -0.25);
  const MartingaleTrace t = martingale_trace(path, model, origin(2), lambda);
  REQUIRE(t.values.size() == 2001);
  CHECK(t.values[0] == 1.0);
  CHECK(t.values[1] == doctest::Approx(1.0).epsilon(1e-15));
  const double e = mgf(model, lambda);
  for (std::size_t j = 0; j < t.values.size(); ++j) {
    CHECK(t.values[j] > 0.0);
    CHECK(std::abs(t.values[j] / std::exp(t.log_u_x[j] - t.log_pi[j]) - 1.0) <= 1e-9);
    if (j % 250 == 0) {
      CHECK(t.log_pi[j] == doctest::Approx(pi_n(e, static_cast<std::int64_t>(j)).log_mag()).epsilon(1e-12));
    }
  }
  const UrnConfig u = materialize_config(path, model, origin(2), 2000);
  CHECK(std::exp(t.log_u_x.back()) == doctest::Approx(config_transform(u, model.embedding(), lambda)).epsilon(1e-11));

  const Eigen::Vector2d far(30.0, 30.0);
  const MartingaleTrace big = martingale_trace(path, model, origin(2), far);
  for (double v : big.values) CHECK(std::isfinite(v));
}

TEST_CASE("martingale mean is preserved") {
  const int reps = 100000;
  const std::int64_t n = 200;
  for (const IncrementModel& model : {ssrw(1), ssrw(2)}) {
    const int d = model.dim();
    std::vector<Eigen::VectorXd> lambdas;
    for (int i = 0; i < (d == 1 ? 3 : 9); ++i) {
      Eigen::VectorXd l(d);
      l[0] = 0.2 * (i % 3 - 1);
      if (d == 2) l[1] = 0.2 * (i / 3 - 1);
      lambdas.push_back(l);
    }
    std::vector<double> sum(lambdas.size(), 0.0), sq(lambdas.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
      const UrnPath path = sample_path(model, origin(d), n, stream_seed(555, static_cast<std::uint64_t>(r)));
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double v = martingale_trace(path, model, origin(d), lambdas[i]).values.back();
        sum[i] += v;
        sq[i] += v * v;
      }
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double mean = sum[i] / reps;
      const double se = std::sqrt(std::max(0.0, sq[i] / reps - mean * mean) / reps);
      CAPTURE(model.name());
      CAPTURE(i);
      CHECK(std::abs(mean - 1.0) <= 4.0 * se + 1e-12);
    }
  }
}
