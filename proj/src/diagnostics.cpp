#include "urnlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <Eigen/LU>

#include "urnlab/error.hpp"
#include "urnlab/gaussian.hpp"
#include "urnlab/numeric.hpp"
#include "urnlab/parallel.hpp"
#include "urnlab/rng.hpp"

namespace urnlab {

Standardization Standardization::make(const MomentSummary& m, std::int64_t n, bool use_gamma) {
  if (n < 3) throw UrnError(ErrorKind::DomainError, "standardization needs n >= 3");
  const double log_n = std::log(static_cast<double>(n));
  Standardization s;
  s.n = n;
  s.center = m.mu * (use_gamma ? log_n + std::numbers::egamma : log_n);
  s.scale_inv = m.sigma_inv_sqrt / std::sqrt(log_n);
  s.scale = m.sigma_sqrt * std::sqrt(log_n);
  return s;
}

StandardizedLaw standardize(const SparseLaw& law, const Embedding& embedding, const MomentSummary& m,
                            bool use_gamma) {
  const Standardization s = Standardization::make(m, law.n, use_gamma);
  StandardizedLaw out;
  out.n = law.n;
  out.pruned_mass = law.pruned_mass;
  out.points.resize(law.dim, static_cast<Eigen::Index>(law.entries.size()));
  out.probs.resize(static_cast<Eigen::Index>(law.entries.size()));
  Eigen::Index i = 0;
  for (const auto& [c, p] : law.entries) {
    out.points.col(i) = s.apply(embedding.embed(c));
    out.probs[i] = p;
    ++i;
  }
  return out;
}

DistanceStatistic ks_distance_1d(const StandardizedLaw& law) {
  if (law.dim() != 1) throw UrnError(ErrorKind::DomainError, "KS distance is one-dimensional");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(law.probs.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return law.points(0, a) < law.points(0, b); });

  DistanceStatistic stat;
  stat.pruned_mass = law.pruned_mass;
  stat.argmax = Eigen::VectorXd::Zero(1);
  CompensatedSum cdf;
  std::size_t i = 0;
  while (i < order.size()) {
    const double x = law.points(0, order[i]);
    const double before = cdf.value();
    while (i < order.size() && law.points(0, order[i]) == x) cdf += law.probs[order[i++]];
    const double phi = gaussian_cdf_1d(x);
    const double gap = std::max(std::abs(before - phi), std::abs(cdf.value() - phi));
    if (gap > stat.value) {
      stat.value = gap;
      stat.argmax[0] = x;
    }
  }
  return stat;
}

Eigen::MatrixXd default_t_grid(int dim, int per_axis, double half_width) {
  Eigen::Index count = 1;
  for (int k = 0; k < dim; ++k) count *= per_axis;
  Eigen::MatrixXd grid(dim, count);
  const Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(per_axis, -half_width, half_width);
  for (Eigen::Index c = 0; c < count; ++c) {
    Eigen::Index rest = c;
    for (int k = dim - 1; k >= 0; --k) {
      grid(k, c) = axis[rest % per_axis];
      rest /= per_axis;
    }
  }
  return grid;
}

DistanceStatistic cf_distance(const StandardizedLaw& law, const Eigen::MatrixXd& t_grid) {
  DistanceStatistic stat;
  stat.pruned_mass = law.pruned_mass;
  stat.argmax = Eigen::VectorXd::Zero(law.dim());
  for (Eigen::Index c = 0; c < t_grid.cols(); ++c) {
    const Eigen::ArrayXd phase = (t_grid.col(c).transpose() * law.points).transpose().array();
    const std::complex<double> emp{law.probs.dot(phase.cos().matrix()), law.probs.dot(phase.sin().matrix())};
    const double gap = std::abs(emp - std::exp(-0.5 * t_grid.col(c).squaredNorm()));
    if (gap > stat.value) {
      stat.value = gap;
      stat.argmax = t_grid.col(c);
    }
  }
  return stat;
}

double llt_normalizer(const MomentSummary& m, const LatticeSpec& lattice, std::int64_t n) {
  const double d = static_cast<double>(m.mu.size());
  return m.sigma_sqrt.determinant() * std::pow(std::log(static_cast<double>(n)), 0.5 * d) / lattice.det_abs;
}

LLTStatistic llt_statistic(const SparseLaw& law, const Embedding& embedding, const MomentSummary& m,
                           const LatticeSpec& lattice) {
  const int d = law.dim;
  if (!lattice.has_coeff_form() || lattice.dim != d) {
    throw UrnError(ErrorKind::InvalidSpec, "LLT needs a lattice in coefficient form of matching dimension");
  }
  const Standardization s = Standardization::make(m, law.n);

  LLTStatistic stat;
  stat.n = law.n;
  stat.pruned_mass = law.pruned_mass;
  stat.normalizer = llt_normalizer(m, lattice, law.n);
  stat.argmax_point = Eigen::VectorXd::Zero(d);

  auto consider = [&](double gap, const Eigen::VectorXd& x) {
    ++stat.points_checked;
    if (gap > stat.sup_value) {
      stat.sup_value = gap;
      stat.argmax_point = x;
    }
  };

  CompensatedSum off_lattice;
  for (const auto& [c, p] : law.entries) {
    if (!lattice.contains(c)) {
      off_lattice += p;
      continue;
    }
    const Eigen::VectorXd x = s.apply(embedding.embed(c));
    consider(std::abs(stat.normalizer * p - gaussian_density(x)), x);
  }
  if (off_lattice.value() > 1e-9) {
    throw UrnError(ErrorKind::LatticeMismatch,
                   "mass " + std::to_string(off_lattice.value()) + " lies off the declared lattice");
  }

  // Lattice points where phi_d > 1e-12 but the law has no entry.
  const double radius =
      std::sqrt(2.0 * (std::log(1e12) - 0.5 * d * std::log(2.0 * std::numbers::pi)));
  const Eigen::MatrixXd to_coeff = embedding.basis().transpose().inverse();
  const Eigen::MatrixXd a = to_coeff * s.scale;
  const Eigen::VectorXd mid = to_coeff * s.center;
  std::vector<std::int64_t> lo(d), hi(d);
  for (int k = 0; k < d; ++k) {
    const double reach = radius * a.row(k).norm();
    lo[k] = static_cast<std::int64_t>(std::floor(mid[k] - reach));
    hi[k] = static_cast<std::int64_t>(std::ceil(mid[k] + reach));
  }
  ColorPoint c(lo);
  while (true) {
    if (lattice.contains(c) && !law.entries.contains(c)) {
      const Eigen::VectorXd x = s.apply(embedding.embed(c));
      if (x.norm() <= radius) consider(gaussian_density(x), x);
    }
    int k = d - 1;
    while (k >= 0 && ++c[k] > hi[k]) {
      c[k] = lo[k];
      --k;
    }
    if (k < 0) break;
  }
  return stat;
}

TestFamily TestFamily::defaults(int dim) {
  TestFamily f;
  f.t_grid = default_t_grid(dim);
  f.intervals = {{-1.0, 1.0}, {0.0, 2.0}, {-2.0, 0.0}, {-0.5, 0.5}};
  f.smoothing = 0.25;
  return f;
}

namespace {

// Visits (color, multiplicity) for every distinct draw of the path.
template <typename F>
void for_each_draw_count(const UrnPath& path, F&& f) {
  const int d = path.dim;
  const std::int64_t n = path.length();
  if (n == 0) return;
  std::vector<std::int64_t> lo(d, INT64_MAX), hi(d, INT64_MIN);
  for (std::int64_t m = 0; m < n; ++m) {
    const auto v = path.draw(m);
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  std::size_t cells = 1;
  for (int k = 0; k < d; ++k) cells *= static_cast<std::size_t>(hi[k] - lo[k] + 1);
  if (cells <= (std::size_t{1} << 24)) {
    std::vector<std::int64_t> counts(cells, 0);
    for (std::int64_t m = 0; m < n; ++m) {
      const auto v = path.draw(m);
      std::size_t idx = 0;
      for (int k = 0; k < d; ++k) idx = idx * static_cast<std::size_t>(hi[k] - lo[k] + 1) + (v[k] - lo[k]);
      ++counts[idx];
    }
    ColorPoint c(lo);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      if (counts[idx] > 0) {
        std::size_t rest = idx;
        for (int k = d - 1; k >= 0; --k) {
          const auto w = static_cast<std::size_t>(hi[k] - lo[k] + 1);
          c[k] = lo[k] + static_cast<std::int64_t>(rest % w);
          rest /= w;
        }
        f(c, static_cast<double>(counts[idx]));
      }
    }
    return;
  }
  std::map<ColorPoint, std::int64_t> counts;
  for (std::int64_t m = 0; m < n; ++m) ++counts[path.color(m)];
  for (const auto& [c, k] : counts) f(c, static_cast<double>(k));
}

double box_value(const TestFamily& family, std::size_t b, const Eigen::VectorXd& x) {
  const auto [lo, hi] = family.intervals[b];
  double v = 1.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    v *= gaussian_cdf_1d((x[k] - lo) / family.smoothing) - gaussian_cdf_1d((x[k] - hi) / family.smoothing);
  }
  return v;
}

}  // namespace

double configuration_distance(const UrnPath& path, const IncrementModel& model, const SparseLaw& u0,
                              const MomentSummary& m, const TestFamily& family, bool use_gamma) {
  const std::int64_t n = path.length();
  const Standardization s = Standardization::make(m, n, use_gamma);
  const Embedding& emb = model.embedding();
  const Eigen::MatrixXd step_x = s.scale_inv * model.embedded_atoms();
  const Eigen::VectorXd p = model.probabilities();
  const Eigen::Index nt = family.t_grid.cols();
  const std::size_t nb = family.intervals.size();

  // Characteristic function of one standardized increment at each t.
  Eigen::VectorXcd step_cf(nt);
  for (Eigen::Index c = 0; c < nt; ++c) {
    const Eigen::ArrayXd phase = (family.t_grid.col(c).transpose() * step_x).transpose().array();
    step_cf[c] = {p.dot(phase.cos().matrix()), p.dot(phase.sin().matrix())};
  }

  Eigen::VectorXcd from_u0 = Eigen::VectorXcd::Zero(nt);
  Eigen::VectorXcd from_draws = Eigen::VectorXcd::Zero(nt);
  Eigen::VectorXd boxes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nb));

  for (const auto& [c, w] : u0.entries) {
    const Eigen::VectorXd x = s.apply(emb.embed(c));
    const Eigen::ArrayXd phase = (family.t_grid.transpose() * x).array();
    from_u0.real() += w * phase.cos().matrix();
    from_u0.imag() += w * phase.sin().matrix();
    for (std::size_t b = 0; b < nb; ++b) boxes[static_cast<Eigen::Index>(b)] += w * box_value(family, b, x);
  }
  for_each_draw_count(path, [&](const ColorPoint& c, double count) {
    const Eigen::VectorXd x = s.apply(emb.embed(c));
    const Eigen::ArrayXd phase = (family.t_grid.transpose() * x).array();
    from_draws.real() += count * phase.cos().matrix();
    from_draws.imag() += count * phase.sin().matrix();
    for (std::size_t b = 0; b < nb; ++b) {
      double smoothed = 0.0;
      for (Eigen::Index a = 0; a < step_x.cols(); ++a) {
        smoothed += p[a] * box_value(family, b, x + step_x.col(a));
      }
      boxes[static_cast<Eigen::Index>(b)] += count * smoothed;
    }
  });

  const double total = static_cast<double>(n + 1);
  double distance = 0.0;
  for (Eigen::Index c = 0; c < nt; ++c) {
    const std::complex<double> lambda_f = (from_u0[c] + step_cf[c] * from_draws[c]) / total;
    const double target = std::exp(-0.5 * family.t_grid.col(c).squaredNorm());
    distance = std::max({distance, std::abs(lambda_f.real() - target), std::abs(lambda_f.imag())});
  }
  const double sq = family.smoothing;
  for (std::size_t b = 0; b < nb; ++b) {
    const auto [lo, hi] = family.intervals[b];
    const double axis_mean = smoothed_step_mean(lo, sq) - smoothed_step_mean(hi, sq);
    const double target = std::pow(axis_mean, static_cast<double>(m.mu.size()));
    distance = std::max(distance, std::abs(boxes[static_cast<Eigen::Index>(b)] / total - target));
  }
  return distance;
}

std::vector<ConvergenceRow> random_config_convergence(const IncrementModel& model, const SparseLaw& u0,
                                                      const ConvergenceOptions& options) {
  if (options.reps < 100) throw UrnError(ErrorKind::DomainError, "random_config_convergence needs reps >= 100");
  const MomentSummary m = moments(model);
  const TestFamily family = options.family.value_or(TestFamily::defaults(model.dim()));
  std::vector<ConvergenceRow> rows;
  std::int64_t prev = 0;
  for (std::int64_t n : options.n_list) {
    if (n < 3 || n <= prev) throw UrnError(ErrorKind::DomainError, "n_list must be increasing with n >= 3");
    prev = n;
    const std::uint64_t base = stream_seed(options.seed, static_cast<std::uint64_t>(n));
    std::vector<double> dist(static_cast<std::size_t>(options.reps));
    parallel_for(dist.size(), [&](std::size_t r) {
      const UrnPath path = sample_path(model, u0, n, stream_seed(base, r));
      dist[r] = configuration_distance(path, model, u0, m, family, options.use_gamma);
    });
    CompensatedSum mean;
    for (double v : dist) mean += v;
    for (double eps : options.eps) {
      const auto exceed = std::count_if(dist.begin(), dist.end(), [&](double v) { return v > eps; });
      rows.push_back({n, eps, static_cast<double>(exceed) / static_cast<double>(dist.size()),
                      mean.value() / static_cast<double>(dist.size())});
    }
  }
  return rows;
}

}  // namespace urnlab
