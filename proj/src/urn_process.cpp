#include "urnlab/urn_process.hpp"

#include <algorithm>
#include <cmath>

#include "urnlab/error.hpp"
#include "urnlab/numeric.hpp"

namespace urnlab {

ColorPoint UrnPath::color(std::int64_t m) const {
  const auto d = draw(m);
  return ColorPoint(std::vector<std::int64_t>(d.begin(), d.end()));
}

DiscreteSampler::DiscreteSampler(std::vector<double> weights) : cumulative_(std::move(weights)) {
  if (cumulative_.empty()) throw UrnError(ErrorKind::InvalidSpec, "sampler needs at least one weight");
  for (std::size_t i = 1; i < cumulative_.size(); ++i) cumulative_[i] += cumulative_[i - 1];
  const double total = cumulative_.back();
  for (double& c : cumulative_) c /= total;
}

std::size_t DiscreteSampler::operator()(SplitMix64& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

namespace {

struct InitialDraws {
  std::vector<ColorPoint> points;
  DiscreteSampler sampler;
};

InitialDraws initial_draws(const SparseLaw& u0) {
  std::vector<ColorPoint> pts;
  std::vector<double> w;
  for (const auto& [c, p] : u0.entries) {
    pts.push_back(c);
    w.push_back(p);
  }
  return {std::move(pts), DiscreteSampler(std::move(w))};
}

DiscreteSampler step_sampler(const IncrementModel& model) {
  std::vector<double> w;
  for (const Atom& a : model.atoms()) w.push_back(a.prob);
  return DiscreteSampler(std::move(w));
}

}  // namespace

UrnPath sample_path(const IncrementModel& model, const SparseLaw& u0, std::int64_t n, std::uint64_t seed) {
  const int d = model.dim();
  validate_initial(u0, d);
  if (n < 0) throw UrnError(ErrorKind::DomainError, "n must be >= 0");
  const InitialDraws start = initial_draws(u0);
  const DiscreteSampler steps = step_sampler(model);
  const auto& atoms = model.atoms();

  UrnPath path;
  path.dim = d;
  path.seed = seed;
  path.draws.resize(static_cast<std::size_t>(n) * d);
  SplitMix64 rng(seed);
  std::int64_t* out = path.draws.data();
  for (std::int64_t m = 0; m < n; ++m, out += d) {
    const std::uint64_t ancestor = rng.below(static_cast<std::uint64_t>(m) + 1);
    if (ancestor == 0) {
      const ColorPoint& c = start.points[start.sampler(rng)];
      std::copy(c.coeffs.begin(), c.coeffs.end(), out);
    } else {
      const std::int64_t* from = path.draws.data() + (ancestor - 1) * d;
      const ColorPoint& step = atoms[steps(rng)].point;
      for (int k = 0; k < d; ++k) out[k] = from[k] + step[k];
    }
  }
  path.z0 = n > 0 ? path.color(0) : ColorPoint::zero(d);
  return path;
}

UrnPath sample_path_naive(const IncrementModel& model, const SparseLaw& u0, std::int64_t n,
                          std::uint64_t seed) {
  if (n > 100'000) throw UrnError(ErrorKind::TooLarge, "naive sampler is limited to n <= 1e5");
  const int d = model.dim();
  validate_initial(u0, d);
  if (n < 0) throw UrnError(ErrorKind::DomainError, "n must be >= 0");

  UrnConfig config(u0.entries.begin(), u0.entries.end());
  double total = u0.retained_mass();
  UrnPath path;
  path.dim = d;
  path.seed = seed;
  path.draws.reserve(static_cast<std::size_t>(n) * d);
  SplitMix64 rng(seed);
  for (std::int64_t m = 0; m < n; ++m) {
    const double u = rng.uniform() * total;
    double acc = 0.0;
    auto chosen = std::prev(config.end());
    for (auto it = config.begin(); it != config.end(); ++it) {
      acc += it->second;
      if (u < acc) {
        chosen = it;
        break;
      }
    }
    const ColorPoint v = chosen->first;
    path.draws.insert(path.draws.end(), v.coeffs.begin(), v.coeffs.end());
    for (const Atom& a : model.atoms()) config[v + a.point] += a.prob;
    total += 1.0;
  }
  path.z0 = n > 0 ? path.color(0) : ColorPoint::zero(d);
  return path;
}

UrnConfig materialize_config(const UrnPath& path, const IncrementModel& model, const SparseLaw& u0,
                             std::int64_t m) {
  if (m < 0 || m > path.length()) throw UrnError(ErrorKind::DomainError, "time index outside path");
  UrnConfig config(u0.entries.begin(), u0.entries.end());
  for (std::int64_t j = 0; j < m; ++j) {
    const ColorPoint v = path.color(j);
    for (const Atom& a : model.atoms()) config[v + a.point] += a.prob;
  }
  return config;
}

double config_transform(const UrnConfig& config, const Embedding& embedding,
                        const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  CompensatedSum sum;
  for (const auto& [c, mass] : config) sum += mass * std::exp(lambda.dot(embedding.embed(c)));
  return sum.value();
}

double one_step_expectation(const UrnConfig& config, const IncrementModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  const Embedding& emb = model.embedding();
  CompensatedSum total;
  for (const auto& [c, mass] : config) total += mass;
  const double ux = config_transform(config, emb, lambda);

  CompensatedSum expectation;
  for (const auto& [v, mass] : config) {
    CompensatedSum added;
    for (const Atom& a : model.atoms()) added += a.prob * std::exp(lambda.dot(emb.embed(v + a.point)));
    expectation += (mass / total.value()) * (ux + added.value());
  }
  return expectation.value();
}

}  // namespace urnlab
