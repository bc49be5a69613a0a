#include "urnlab/martingale.hpp"

#include <cmath>
#include <functional>

#include "urnlab/error.hpp"
#include "urnlab/numeric.hpp"

namespace urnlab {

MartingaleTrace martingale_trace(const UrnPath& path, const IncrementModel& model, const SparseLaw& u0,
                                 const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  if (path.dim != model.dim()) throw UrnError(ErrorKind::InvalidSpec, "path dimension mismatch");
  const double e = mgf(model, lambda);
  const double log_e = std::log(e);
  // <lambda, embed(c)> = <basis * lambda, c>
  const Eigen::VectorXd w = model.embedding().basis() * lambda;
  const std::int64_t n = path.length();

  MartingaleTrace trace;
  trace.lambda = lambda;
  trace.values.resize(n + 1);
  trace.log_u_x.resize(n + 1);
  trace.log_pi.resize(n + 1);

  LogSumAccumulator ux;
  ux.add_log(std::log(initial_mgf(u0, model.embedding(), lambda)));
  CompensatedSum log_pi;
  trace.log_u_x[0] = ux.log_value();
  trace.log_pi[0] = 0.0;
  trace.values[0] = std::exp(trace.log_u_x[0]);
  for (std::int64_t m = 0; m < n; ++m) {
    const auto v = path.draw(m);
    double dot = 0.0;
    for (int k = 0; k < path.dim; ++k) dot += w[k] * static_cast<double>(v[k]);
    ux.add_log(log_e + dot);
    log_pi += std::log1p(e / static_cast<double>(m + 1));
    trace.log_u_x[m + 1] = ux.log_value();
    trace.log_pi[m + 1] = log_pi.value();
    trace.values[m + 1] = std::exp(trace.log_u_x[m + 1] - trace.log_pi[m + 1]);
  }
  return trace;
}

std::vector<double> second_moment_exact(const IncrementModel& model, const SparseLaw& u0,
                                        const Eigen::Ref<const Eigen::VectorXd>& lambda, std::int64_t n) {
  if (n < 0) throw UrnError(ErrorKind::DomainError, "n must be >= 0");
  validate_initial(u0, model.dim());
  std::vector<double> m2(n + 1);
  if (lambda.isZero(0.0)) {
    // x(0) = 1, so M_j(0) = (j + 1) / Pi_j(1) = 1 on every path.
    std::fill(m2.begin(), m2.end(), 1.0);
    return m2;
  }
  const Embedding& emb = model.embedding();
  const Eigen::VectorXd twice = 2.0 * lambda;
  const double e = mgf(model, lambda);
  const double e2 = mgf(model, twice);
  const double m0 = initial_mgf(u0, emb, lambda);
  const double log_m0_twice = std::log(initial_mgf(u0, emb, twice));

  m2[0] = m0 * m0;
  CompensatedSum log_pi_e;   // log Pi_k(e(lambda))
  CompensatedSum log_pi_e2;  // log Pi_k(e(2 lambda))
  for (std::int64_t k = 0; k < n; ++k) {
    const double r = 1.0 / static_cast<double>(k + 1);
    log_pi_e += std::log1p(e * r);
    const double contraction = (1.0 + 2.0 * e * r) / ((1.0 + e * r) * (1.0 + e * r));
    const double fresh = e * e * r * std::exp(log_pi_e2.value() + log_m0_twice - 2.0 * log_pi_e.value());
    m2[k + 1] = contraction * m2[k] + fresh;
    log_pi_e2 += std::log1p(e2 * r);
  }
  return m2;
}

double l2_margin(const IncrementModel& model, const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  const Eigen::VectorXd twice = 2.0 * lambda;
  return 2.0 * mgf(model, lambda) - mgf(model, twice);
}

namespace {

// Visits every integer point of {-k..k}^d with max-norm exactly k.
void for_each_shell_point(int d, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> pt(d);
  std::function<void(int, bool)> rec = [&](int axis, bool on_shell) {
    if (axis == d - 1) {
      if (on_shell) {
        for (int v = -k; v <= k; ++v) {
          pt[axis] = v;
          f(pt);
        }
      } else {
        for (int v : {-k, k}) {
          pt[axis] = v;
          f(pt);
        }
      }
      return;
    }
    for (int v = -k; v <= k; ++v) {
      pt[axis] = v;
      rec(axis + 1, on_shell || v == -k || v == k);
    }
  };
  rec(0, false);
}

}  // namespace

L2BoundReport l2_bound_scan(const IncrementModel& model, const SparseLaw& u0, double delta_max,
                            std::int64_t n_max, int grid, int points_per_axis) {
  if (!(delta_max > 0.0) || grid < 1 || n_max < 2 || points_per_axis < 1) {
    throw UrnError(ErrorKind::DomainError, "l2_bound_scan needs delta_max > 0, grid >= 1, n_max >= 2");
  }
  const int d = model.dim();
  L2BoundReport report;
  report.resolution = delta_max / grid;
  report.n_max = n_max;
  report.saturated = true;
  report.delta_star = delta_max;
  Eigen::VectorXd lam(d);
  for (int k = 1; k <= grid && report.saturated; ++k) {
    for_each_shell_point(d, k, [&](const std::vector<int>& pt) {
      if (!report.saturated) return;
      for (int a = 0; a < d; ++a) lam[a] = pt[a] * report.resolution;
      if (!(l2_margin(model, lam) > 0.0)) {
        report.saturated = false;
        report.delta_star = (k - 1) * report.resolution;
      }
    });
  }

  // Bound evaluation on an equispaced grid over [-delta*, delta*]^d.
  std::vector<int> idx(d, 0);
  while (true) {
    for (int a = 0; a < d; ++a) {
      lam[a] = points_per_axis == 1
                   ? 0.0
                   : -report.delta_star + 2.0 * report.delta_star * idx[a] / (points_per_axis - 1);
    }
    const std::vector<double> m2 = second_moment_exact(model, u0, lam, n_max);
    L2ScanPoint p;
    p.lambda = lam;
    for (double v : m2) p.max_second_moment = std::max(p.max_second_moment, v);
    p.growth_ratio = m2[n_max] / m2[n_max / 2];
    p.growing = p.growth_ratio > 1.05;
    report.points.push_back(std::move(p));
    int a = d - 1;
    while (a >= 0 && ++idx[a] == points_per_axis) idx[a--] = 0;
    if (a < 0) break;
  }
  return report;
}

std::vector<double> variance_vanishes(const IncrementModel& model, const SparseLaw& u0,
                                      const Eigen::Ref<const Eigen::VectorXd>& lambda,
                                      std::span<const std::int64_t> n_list) {
  std::vector<double> out;
  std::int64_t prev = 0;
  for (std::int64_t n : n_list) {
    if (n < 3 || n <= prev) throw UrnError(ErrorKind::DomainError, "n_list must be increasing with n >= 3");
    prev = n;
    const Eigen::VectorXd scaled = lambda / std::sqrt(std::log(static_cast<double>(n)));
    out.push_back(second_moment_exact(model, u0, scaled, n).back() - 1.0);
  }
  return out;
}

}  // namespace urnlab
