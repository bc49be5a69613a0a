#include "urnlab/exact_law.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "urnlab/error.hpp"
#include "urnlab/format.hpp"
#include "urnlab/numeric.hpp"
#include "urnlab/product_formula.hpp"

namespace urnlab {
namespace {

using Index = std::int64_t;

// Dense double buffers over a box of coefficient space, last axis contiguous.
// Both buffers are kept zero outside the active box.
class DenseGrid {
 public:
  DenseGrid(const SparseLaw& u0, std::size_t cap) : d_(u0.dim), cap_(cap) {
    lo_.assign(d_, INT64_MAX);
    hi_.assign(d_, INT64_MIN);
    for (const auto& [c, p] : u0.entries) {
      for (int k = 0; k < d_; ++k) {
        lo_[k] = std::min(lo_[k], c[k]);
        hi_[k] = std::max(hi_[k], c[k]);
      }
    }
    allocate(lo_, hi_);
    for (const auto& [c, p] : u0.entries) cur_[index(c.coeffs)] = p;
  }

  int dim() const { return d_; }
  const std::vector<Index>& lo() const { return lo_; }
  const std::vector<Index>& hi() const { return hi_; }

  // Makes sure [need_lo, need_hi] fits inside the allocated box.
  void ensure(const std::vector<Index>& need_lo, const std::vector<Index>& need_hi) {
    for (int k = 0; k < d_; ++k) {
      if (need_lo[k] < origin_[k] || need_hi[k] >= origin_[k] + extent_[k]) {
        std::vector<double> old = std::move(cur_);
        const auto old_origin = origin_;
        const auto old_stride = stride_;
        allocate(need_lo, need_hi);
        for_each_row(lo_, hi_, [&](const std::vector<Index>& row, Index len) {
          Index src = 0;
          for (int a = 0; a < d_; ++a) src += (row[a] - old_origin[a]) * old_stride[a];
          std::copy_n(old.data() + src, len, cur_.data() + index(row));
        });
        return;
      }
    }
  }

  Index index(const std::vector<Index>& c) const {
    Index idx = 0;
    for (int k = 0; k < d_; ++k) idx += (c[k] - origin_[k]) * stride_[k];
    return idx;
  }

  Index flat_offset(const ColorPoint& b) const {
    Index off = 0;
    for (int k = 0; k < d_; ++k) off += b[k] * stride_[k];
    return off;
  }

  // Calls f(row_start_coords, row_length) for every row of the box.
  template <typename F>
  void for_each_row(const std::vector<Index>& lo, const std::vector<Index>& hi, F&& f) const {
    for (int k = 0; k < d_; ++k) {
      if (lo[k] > hi[k]) return;
    }
    std::vector<Index> row(lo);
    const Index len = hi[d_ - 1] - lo[d_ - 1] + 1;
    while (true) {
      f(row, len);
      int k = d_ - 2;
      while (k >= 0) {
        if (++row[k] <= hi[k]) break;
        row[k] = lo[k];
        --k;
      }
      if (k < 0) return;
    }
  }

  std::vector<double>& cur() { return cur_; }
  std::vector<double>& next() { return next_; }

  void commit(std::vector<Index> new_lo, std::vector<Index> new_hi) {
    for_each_row(lo_, hi_, [&](const std::vector<Index>& row, Index len) {
      std::fill_n(cur_.data() + index(row), len, 0.0);
    });
    std::swap(cur_, next_);
    lo_ = std::move(new_lo);
    hi_ = std::move(new_hi);
  }

  double sum_active() const {
    CompensatedSum s;
    for_each_row(lo_, hi_, [&](const std::vector<Index>& row, Index len) {
      const double* p = cur_.data() + index(row);
      for (Index t = 0; t < len; ++t) s += p[t];
    });
    return s.value();
  }

  SparseLaw to_law() const {
    SparseLaw law;
    law.dim = d_;
    for_each_row(lo_, hi_, [&](const std::vector<Index>& row, Index len) {
      const double* p = cur_.data() + index(row);
      for (Index t = 0; t < len; ++t) {
        if (p[t] > 0.0) {
          std::vector<Index> c(row);
          c[d_ - 1] += t;
          law.entries.emplace_hint(law.entries.end(), ColorPoint(std::move(c)), p[t]);
        }
      }
    });
    return law;
  }

 private:
  void allocate(const std::vector<Index>& need_lo, const std::vector<Index>& need_hi) {
    origin_.resize(d_);
    extent_.resize(d_);
    stride_.resize(d_);
    std::size_t cells = 1;
    for (int k = 0; k < d_; ++k) {
      const Index width = need_hi[k] - need_lo[k] + 1;
      const Index pad = std::max<Index>(8, width / 2);
      origin_[k] = need_lo[k] - pad;
      extent_[k] = width + 2 * pad;
      cells *= static_cast<std::size_t>(extent_[k]);
      if (cells > cap_) {
        throw UrnError(ErrorKind::SupportCapExceeded,
                       "dense grid would exceed " + std::to_string(cap_) + " cells");
      }
    }
    Index s = 1;
    for (int k = d_ - 1; k >= 0; --k) {
      stride_[k] = s;
      s *= extent_[k];
    }
    cur_.assign(cells, 0.0);
    next_.assign(cells, 0.0);
  }

  int d_;
  std::size_t cap_;
  std::vector<Index> origin_, extent_, stride_;
  std::vector<Index> lo_, hi_;
  std::vector<double> cur_, next_;
};

struct Shift {
  ColorPoint step;
  double prob;
};

}  // namespace

SparseLaw exact_law_dp(const IncrementModel& model, const SparseLaw& u0, std::int64_t n,
                       const DpOptions& options) {
  const int d = model.dim();
  validate_initial(u0, d);
  if (n < 0) throw UrnError(ErrorKind::DomainError, "n must be >= 0");
  if (!(options.prune_eps >= 0.0)) throw UrnError(ErrorKind::DomainError, "prune_eps must be >= 0");
  if (n == 0) {
    SparseLaw out = u0;
    out.n = 0;
    out.model_id = model.name();
    return out;
  }

  double zero_prob = 0.0;
  std::vector<Shift> shifts;
  std::vector<Index> amin(d, 0), amax(d, 0);
  for (const Atom& a : model.atoms()) {
    if (a.point.is_zero()) {
      zero_prob += a.prob;
      continue;
    }
    shifts.push_back({a.point, a.prob});
    for (int k = 0; k < d; ++k) {
      amin[k] = std::min(amin[k], a.point[k]);
      amax[k] = std::max(amax[k], a.point[k]);
    }
  }

  DenseGrid grid(u0, options.support_cap);
  const double threshold = options.prune_eps / (2.0 * static_cast<double>(n));
  CompensatedSum pruned;
  std::vector<std::pair<double, Index>> candidates;

  std::vector<Index> new_lo(d), new_hi(d), need_lo(d), need_hi(d);
  std::vector<Index> offsets(shifts.size());
  std::vector<double> weights(shifts.size());

  for (std::int64_t step = 1; step <= n; ++step) {
    const std::int64_t j = options.order == KernelOrder::Ascending ? step : n + 1 - step;
    const double q = 1.0 / static_cast<double>(j + 1);
    const double stay = (1.0 - q) + q * zero_prob;
    // Cells below the threshold are dropped smallest first while the
    // cumulative pruned mass stays within prune_eps * step / n.
    const double allowance =
        options.prune_eps * static_cast<double>(step) / static_cast<double>(n) - pruned.value();
    const double cutoff = std::min(threshold, allowance);

    for (int k = 0; k < d; ++k) {
      new_lo[k] = grid.lo()[k] + amin[k];
      new_hi[k] = grid.hi()[k] + amax[k];
      need_lo[k] = new_lo[k] - (amax[k] - amin[k]);
      need_hi[k] = new_hi[k] + (amax[k] - amin[k]);
    }
    grid.ensure(need_lo, need_hi);
    for (std::size_t s = 0; s < shifts.size(); ++s) {
      offsets[s] = grid.flat_offset(shifts[s].step);
      weights[s] = q * shifts[s].prob;
    }

    const double* __restrict in = grid.cur().data();
    double* __restrict out = grid.next().data();
    candidates.clear();

    grid.for_each_row(new_lo, new_hi, [&](const std::vector<Index>& row, Index len) {
      const Index base = grid.index(row);
      double* __restrict o = out + base;
      const double* __restrict src = in + base;
      for (Index t = 0; t < len; ++t) o[t] = stay * src[t];
      for (std::size_t s = 0; s < offsets.size(); ++s) {
        const double* __restrict from = in + base - offsets[s];
        const double w = weights[s];
        for (Index t = 0; t < len; ++t) o[t] += w * from[t];
      }
      if (cutoff > 0.0) {
        for (Index t = 0; t < len; ++t) {
          if (o[t] > 0.0 && o[t] < cutoff) candidates.emplace_back(o[t], base + t);
        }
      }
    });

    if (!candidates.empty()) {
      std::sort(candidates.begin(), candidates.end());
      double used = 0.0;
      for (const auto& [v, idx] : candidates) {
        if (used + v > allowance) break;
        used += v;
        out[idx] = 0.0;
      }
      pruned += used;
    }

    std::vector<Index> tight_lo(d, INT64_MAX), tight_hi(d, INT64_MIN);
    grid.for_each_row(new_lo, new_hi, [&](const std::vector<Index>& row, Index len) {
      const double* o = out + grid.index(row);
      Index first = 0;
      while (first < len && o[first] == 0.0) ++first;
      if (first == len) return;
      Index last = len - 1;
      while (o[last] == 0.0) --last;
      for (int k = 0; k < d - 1; ++k) {
        tight_lo[k] = std::min(tight_lo[k], row[k]);
        tight_hi[k] = std::max(tight_hi[k], row[k]);
      }
      tight_lo[d - 1] = std::min(tight_lo[d - 1], row[d - 1] + first);
      tight_hi[d - 1] = std::max(tight_hi[d - 1], row[d - 1] + last);
    });
    if (tight_lo[0] == INT64_MAX) {
      throw UrnError(ErrorKind::BudgetExceeded, "all mass pruned at step " + std::to_string(step));
    }
    grid.commit(std::move(tight_lo), std::move(tight_hi));
    if (options.on_step) options.on_step(step, grid.sum_active(), u0.pruned_mass + pruned.value());
  }

  SparseLaw law = grid.to_law();
  law.n = n;
  law.pruned_mass = u0.pruned_mass + pruned.value();
  law.model_id = model.name();
  return law;
}

SparseLaw exact_law_cf(const IncrementModel& model, const SparseLaw& u0, std::int64_t n, int grid) {
  const int d = model.dim();
  if (d > 2) throw UrnError(ErrorKind::DomainError, "Fourier inversion supports d <= 2");
  validate_initial(u0, d);
  if (n < 0) throw UrnError(ErrorKind::DomainError, "n must be >= 0");

  const IncrementModel coeff_model = model.in_coefficient_space();
  const Embedding identity = Embedding::identity(d);
  auto u0_mgf = [&](const Eigen::VectorXd& l) { return initial_mgf(u0, identity, l); };
  auto u0_cf = [&](const Eigen::VectorXd& t) { return initial_cf(u0, identity, t); };

  // Exact support bounds, then Chernoff tightening.
  std::vector<Index> lo(d), hi(d);
  for (int k = 0; k < d; ++k) {
    Index u0_lo = INT64_MAX, u0_hi = INT64_MIN, step_lo = 0, step_hi = 0;
    for (const auto& [c, p] : u0.entries) {
      u0_lo = std::min(u0_lo, c[k]);
      u0_hi = std::max(u0_hi, c[k]);
    }
    for (const Atom& a : model.atoms()) {
      step_lo = std::min(step_lo, a.point[k]);
      step_hi = std::max(step_hi, a.point[k]);
    }
    lo[k] = u0_lo + n * step_lo;
    hi[k] = u0_hi + n * step_hi;

    const double log_tail = std::log(1e-12 / (4.0 * d));
    double upper = INFINITY, lower = -INFINITY;
    for (int i = 1; i <= 160; ++i) {
      const double l = 0.05 * i;
      Eigen::VectorXd lam = Eigen::VectorXd::Zero(d);
      lam[k] = l;
      upper = std::min(upper, (log_mgf_zn(coeff_model, u0_mgf, lam, n) - log_tail) / l);
      lam[k] = -l;
      lower = std::max(lower, (log_mgf_zn(coeff_model, u0_mgf, lam, n) - log_tail) / (-l));
    }
    hi[k] = std::min(hi[k], static_cast<Index>(std::ceil(upper)) - 1);
    lo[k] = std::max(lo[k], static_cast<Index>(std::floor(lower)) + 1);
  }

  std::vector<Index> size(2, 1);
  for (int k = 0; k < d; ++k) {
    const Index width = hi[k] - lo[k] + 1;
    if (grid == 0) {
      size[k] = width;
    } else if (grid < width) {
      throw UrnError(ErrorKind::WindowTooSmall, "grid " + std::to_string(grid) +
                                                    " is narrower than the tail window " +
                                                    std::to_string(width));
    } else {
      size[k] = grid;
    }
  }

  constexpr double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXcd cf_grid(size[0], size[1]);
  Eigen::VectorXd t(d);
  for (Index m0 = 0; m0 < size[0]; ++m0) {
    for (Index m1 = 0; m1 < size[1]; ++m1) {
      t[0] = two_pi * static_cast<double>(m0) / static_cast<double>(size[0]);
      if (d == 2) t[1] = two_pi * static_cast<double>(m1) / static_cast<double>(size[1]);
      cf_grid(m0, m1) = cf_zn(coeff_model, u0_cf, t, n).value();
    }
  }

  // P = F0 * C * F1^T with F_k(z, m) = exp(-2 pi i m z / G_k) / G_k.
  auto inverse_dft = [&](int k) {
    const Index width = k < d ? hi[k] - lo[k] + 1 : 1;
    Eigen::MatrixXcd f(width, size[k]);
    for (Index r = 0; r < width; ++r) {
      const double z = k < d ? static_cast<double>(lo[k] + r) : 0.0;
      for (Index m = 0; m < size[k]; ++m) {
        f(r, m) = std::polar(1.0 / static_cast<double>(size[k]),
                             -two_pi * static_cast<double>(m) * z / static_cast<double>(size[k]));
      }
    }
    return f;
  };
  const Eigen::MatrixXcd probs = inverse_dft(0) * cf_grid * inverse_dft(1).transpose();

  SparseLaw law;
  law.dim = d;
  law.n = n;
  law.model_id = model.name();
  for (Index r0 = 0; r0 < probs.rows(); ++r0) {
    for (Index r1 = 0; r1 < probs.cols(); ++r1) {
      const double p = probs(r0, r1).real();
      if (p <= 1e-13) continue;
      std::vector<Index> c{lo[0] + r0};
      if (d == 2) c.push_back(lo[1] + r1);
      law.entries.emplace(ColorPoint(std::move(c)), p);
    }
  }
  law.pruned_mass = std::max(0.0, 1.0 - law.retained_mass());
  return law;
}

SparseLaw brute_force_law(const IncrementModel& model, const SparseLaw& u0, int n) {
  if (n > 14) throw UrnError(ErrorKind::TooLarge, "brute force enumeration is limited to n <= 14");
  if (n < 0) throw UrnError(ErrorKind::DomainError, "n must be >= 0");
  const int d = model.dim();
  validate_initial(u0, d);

  // Distribution of the number of selected increments, by enumerating all
  // Bernoulli patterns (I_1, ..., I_n).
  std::vector<CompensatedSum> by_count(n + 1);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double p = 1.0;
    for (int j = 1; j <= n; ++j) {
      const double q = 1.0 / (j + 1.0);
      p *= (mask >> (j - 1)) & 1u ? q : 1.0 - q;
    }
    by_count[std::popcount(mask)] += p;
  }

  std::vector<std::int64_t> factorial(n + 1, 1);
  for (int i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * i;

  const auto& atoms = model.atoms();
  const int m = static_cast<int>(atoms.size());
  std::map<ColorPoint, double> acc;
  std::vector<int> counts(m, 0);

  // Walks every multiset of k atoms; probability k!/prod(c!) prod(p^c).
  auto emit = [&](int k, double weight) {
    std::int64_t denom = 1;
    double p = 1.0;
    ColorPoint pos = ColorPoint::zero(d);
    for (int b = 0; b < m; ++b) {
      denom *= factorial[counts[b]];
      p *= std::pow(atoms[b].prob, counts[b]);
      for (int a = 0; a < d; ++a) pos[a] += counts[b] * atoms[b].point[a];
    }
    const double multinomial = static_cast<double>(factorial[k] / denom);
    for (const auto& [start, u] : u0.entries) acc[pos + start] += weight * u * multinomial * p;
  };
  std::function<void(int, int, int, double)> compose = [&](int b, int left, int k, double weight) {
    if (b == m - 1) {
      counts[b] = left;
      emit(k, weight);
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[b] = c;
      compose(b + 1, left - c, k, weight);
    }
  };
  for (int k = 0; k <= n; ++k) compose(0, k, k, by_count[k].value());

  SparseLaw law;
  law.dim = d;
  law.n = n;
  law.model_id = model.name();
  for (const auto& [c, p] : acc) {
    if (p > 0.0) law.entries.emplace(c, p);
  }
  return law;
}

LawMoments law_moments(const SparseLaw& law, const Embedding& embedding) {
  const double mass = law.retained_mass();
  if (mass < 1.0 - 1e-6) throw UrnError(ErrorKind::DomainError, "law has lost more than 1e-6 mass");
  const int d = law.dim;
  LawMoments m;
  m.mean = Eigen::VectorXd::Zero(d);
  for (const auto& [c, p] : law.entries) m.mean += p * embedding.embed(c);
  m.mean /= mass;
  m.cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [c, p] : law.entries) {
    const Eigen::VectorXd y = embedding.embed(c) - m.mean;
    m.cov += p * y * y.transpose();
  }
  m.cov /= mass;
  return m;
}

void write_law_csv(std::ostream& out, const SparseLaw& law, const Embedding& embedding) {
  for (int k = 0; k < law.dim; ++k) out << 'c' << k << ',';
  for (int k = 0; k < law.dim; ++k) out << 'x' << k << ',';
  out << "prob\n";
  for (const auto& [c, p] : law.entries) {
    for (int k = 0; k < law.dim; ++k) out << c[k] << ',';
    const Eigen::VectorXd x = embedding.embed(c);
    for (int k = 0; k < law.dim; ++k) out << fmt17(x[k]) << ',';
    out << fmt17(p) << '\n';
  }
}

}  // namespace urnlab
