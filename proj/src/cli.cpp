#include "urnlab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "urnlab/diagnostics.hpp"
#include "urnlab/error.hpp"
#include "urnlab/exact_law.hpp"
#include "urnlab/format.hpp"
#include "urnlab/lattice.hpp"
#include "urnlab/martingale.hpp"
#include "urnlab/model_io.hpp"
#include "urnlab/urn_process.hpp"

namespace urnlab {

using nlohmann::json;

void RunConfig::validate() const {
  if (!(prune_eps >= 0.0 && prune_eps <= 1e-6)) {
    throw UrnError(ErrorKind::InvalidSpec, "prune_eps must lie in [0, 1e-6]");
  }
  if (n < 0) throw UrnError(ErrorKind::InvalidSpec, "n must be non-negative");
  if (n_list.empty()) throw UrnError(ErrorKind::InvalidSpec, "n_list must not be empty");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) throw UrnError(ErrorKind::InvalidSpec, "n_list must be strictly increasing");
  }
  if (reps < 0) throw UrnError(ErrorKind::InvalidSpec, "reps must be non-negative");
  for (double e : eps) {
    if (!(e > 0.0)) throw UrnError(ErrorKind::InvalidSpec, "eps values must be positive");
  }
}

namespace {

struct Artifact {
  std::string body;
  json summary;
  int exit_code = 0;
};

const char* command_name(Command c) {
  switch (c) {
    case Command::ExactLaw: return "exact-law";
    case Command::Simulate: return "simulate";
    case Command::Clt: return "clt";
    case Command::Llt: return "llt";
    case Command::Martingale: return "martingale";
    case Command::LatticeInfo: return "lattice-info";
    case Command::OracleCheck: return "oracle-check";
  }
  return "?";
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return rows;
}

Eigen::VectorXd lambda_for(const RunConfig& config, int dim) {
  if (config.lambda.empty()) return Eigen::VectorXd::Constant(dim, 0.1);
  if (config.lambda.size() == 1) return Eigen::VectorXd::Constant(dim, config.lambda[0]);
  if (static_cast<int>(config.lambda.size()) != dim) {
    throw UrnError(ErrorKind::InvalidSpec, "lambda needs 1 or " + std::to_string(dim) + " components");
  }
  return Eigen::Map<const Eigen::VectorXd>(config.lambda.data(), dim);
}

std::string ladder_csv(const std::vector<std::pair<std::int64_t, double>>& rows) {
  std::string s = "n,statistic\n";
  for (const auto& [n, v] : rows) s += std::to_string(n) + "," + fmt17(v) + "\n";
  return s;
}

Artifact exact_law_command(const RunConfig& c, const IncrementModel& model, const SparseLaw& u0) {
  DpOptions options;
  options.prune_eps = c.prune_eps;
  const SparseLaw law = exact_law_dp(model, u0, c.n, options);
  Artifact a;
  if (c.format == OutputFormat::Csv) {
    std::ostringstream body;
    write_law_csv(body, law, model.embedding());
    a.body = body.str();
  } else {
    json entries = json::array();
    for (const auto& [pt, p] : law.entries) entries.push_back({{"coeffs", pt.coeffs}, {"prob", p}});
    a.body = json{{"n", law.n}, {"pruned_mass", law.pruned_mass}, {"entries", entries}}.dump() + "\n";
  }
  a.summary = {{"n", c.n},
               {"support", law.support_size()},
               {"retained_mass", law.retained_mass()},
               {"pruned_mass", law.pruned_mass}};
  return a;
}

Artifact simulate_command(const RunConfig& c, const IncrementModel& model, const SparseLaw& u0) {
  const UrnPath path = sample_path(model, u0, c.n, c.seed);
  Artifact a;
  const int d = model.dim();
  if (c.format == OutputFormat::Csv) {
    std::string s = "step";
    for (int k = 0; k < d; ++k) s += ",c" + std::to_string(k);
    s += "\n";
    for (std::int64_t m = 0; m < path.length(); ++m) {
      s += std::to_string(m);
      for (std::int64_t v : path.draw(m)) s += "," + std::to_string(v);
      s += "\n";
    }
    a.body = std::move(s);
  } else {
    a.body = json{{"seed", c.seed}, {"dim", d}, {"draws", path.draws}}.dump() + "\n";
  }
  a.summary = {{"n", c.n}, {"seed", c.seed}};
  if (path.length() > 0) a.summary["last"] = path.color(path.length() - 1).coeffs;
  return a;
}

Artifact clt_configurations(const RunConfig& c, const IncrementModel& model, const SparseLaw& u0) {
  ConvergenceOptions options;
  options.n_list = c.n_list;
  options.reps = c.reps;
  options.eps = c.eps;
  options.seed = c.seed;
  options.use_gamma = c.use_gamma;
  const auto rows = random_config_convergence(model, u0, options);
  Artifact a;
  if (c.format == OutputFormat::Csv) {
    std::string s = "n,eps,exceedance,mean_distance\n";
    for (const auto& r : rows) {
      s += std::to_string(r.n) + "," + fmt17(r.eps) + "," + fmt17(r.exceedance) + "," + fmt17(r.mean_distance) + "\n";
    }
    a.body = std::move(s);
  } else {
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"n", r.n}, {"eps", r.eps}, {"exceedance", r.exceedance}, {"mean_distance", r.mean_distance}});
    }
    a.body = out.dump() + "\n";
  }
  a.summary = {{"reps", c.reps}, {"seed", c.seed}, {"rows", rows.size()}};
  return a;
}

Artifact ladder_command(const RunConfig& c, const IncrementModel& model, const SparseLaw& u0) {
  const MomentSummary m = moments(model);
  const bool local = c.command == Command::Llt;
  std::optional<LatticeSpec> lattice;
  if (local) lattice = detect_lattice(model, true).shifted(u0.entries.begin()->first, model.embedding());

  std::vector<std::pair<std::int64_t, double>> rows;
  json reports = json::array();
  DpOptions options;
  options.prune_eps = c.prune_eps;
  for (std::int64_t n : c.n_list) {
    const SparseLaw law = exact_law_dp(model, u0, n, options);
    json report;
    if (local) {
      const LLTStatistic s = llt_statistic(law, model.embedding(), m, *lattice);
      rows.emplace_back(n, s.sup_value);
      report = {{"n", n},
                {"statistic", s.sup_value},
                {"pruned_mass", s.pruned_mass},
                {"argmax", to_json(s.argmax_point)},
                {"normalizer", s.normalizer}};
    } else {
      const StandardizedLaw z = standardize(law, model.embedding(), m, c.use_gamma);
      const DistanceStatistic s = model.dim() == 1 ? ks_distance_1d(z) : cf_distance(z, default_t_grid(model.dim()));
      rows.emplace_back(n, s.value);
      report = {{"n", n},
                {"statistic", s.value},
                {"pruned_mass", s.pruned_mass},
                {"argmax", to_json(s.argmax)},
                {"normalizer", nullptr}};
    }
    reports.push_back(report);
  }
  Artifact a;
  a.body = c.format == OutputFormat::Csv ? ladder_csv(rows) : reports.dump() + "\n";
  a.summary = {{"statistic", local ? "llt" : (model.dim() == 1 ? "ks" : "cf")},
               {"n_list", c.n_list},
               {"final", rows.back().second}};
  return a;
}

Artifact martingale_command(const RunConfig& c, const IncrementModel& model, const SparseLaw& u0) {
  const Eigen::VectorXd lambda = lambda_for(c, model.dim());
  const UrnPath path = sample_path(model, u0, c.n, c.seed);
  const MartingaleTrace trace = martingale_trace(path, model, u0, lambda);
  const std::vector<double> m2 = second_moment_exact(model, u0, lambda, c.n);
  Artifact a;
  if (c.format == OutputFormat::Csv) {
    std::string s = "step,m_value\n";
    for (std::size_t j = 0; j < trace.values.size(); ++j) s += std::to_string(j) + "," + fmt17(trace.values[j]) + "\n";
    a.body = std::move(s);
  } else {
    a.body = json{{"lambda", to_json(lambda)}, {"values", trace.values}, {"second_moment", m2}}.dump() + "\n";
  }
  a.summary = {{"n", c.n},
               {"seed", c.seed},
               {"lambda", to_json(lambda)},
               {"m_final", trace.values.back()},
               {"second_moment_exact", m2.back()},
               {"l2_margin", l2_margin(model, lambda)}};
  return a;
}

json lattice_json(const IncrementModel& model, bool thinned) {
  try {
    const LatticeSpec s = detect_lattice(model, thinned);
    json j = {{"offset", to_json(s.offset)}, {"basis", to_json(s.basis)}, {"det", s.det_abs}};
    if (model.dim() == 1) j["span"] = s.det_abs;
    return j;
  } catch (const UrnError& e) {
    if (e.kind() != ErrorKind::NotLatticeValued && e.kind() != ErrorKind::RankDeficient) throw;
    return nullptr;
  }
}

Artifact lattice_command(const RunConfig&, const IncrementModel& model) {
  json report = {{"model", model.name()}, {"dim", model.dim()}};
  report["increment"] = lattice_json(model, false);
  report["thinned"] = lattice_json(model, true);
  if (model.dim() == 1) {
    report["h_tilde"] = report["increment"].is_null() ? json(nullptr) : report["increment"]["span"];
    report["h"] = report["thinned"].is_null() ? json(nullptr) : report["thinned"]["span"];
  } else {
    report["l"] = report["thinned"].is_null() ? json(nullptr) : report["thinned"]["det"];
  }
  try {
    const MomentSummary m = moments(model);
    report["mu"] = to_json(m.mu);
    report["sigma"] = to_json(m.sigma);
  } catch (const UrnError& e) {
    if (e.kind() != ErrorKind::SigmaNotPositiveDefinite) throw;
    report["mu"] = nullptr;
    report["sigma"] = nullptr;
  }
  Artifact a;
  a.body = report.dump() + "\n";
  a.summary = report;
  return a;
}

Artifact oracle_command(const RunConfig& c, const IncrementModel& model, const SparseLaw& u0) {
  constexpr double kTolerance = 1e-13;
  std::vector<std::pair<std::int64_t, double>> rows;
  double worst = 0.0;
  for (std::int64_t k = 1; k <= c.n; ++k) {
    const SparseLaw dp = exact_law_dp(model, u0, k);
    const SparseLaw bf = brute_force_law(model, u0, static_cast<int>(k));
    double diff = 0.0;
    for (const auto& [pt, p] : dp.entries) diff = std::max(diff, std::abs(p - bf.prob(pt)));
    for (const auto& [pt, p] : bf.entries) diff = std::max(diff, std::abs(p - dp.prob(pt)));
    rows.emplace_back(k, diff);
    worst = std::max(worst, diff);
  }
  Artifact a;
  a.body = ladder_csv(rows);
  const bool pass = worst <= kTolerance;
  a.summary = {{"n", c.n}, {"max_abs_diff", worst}, {"tolerance", kTolerance}, {"result", pass ? "PASS" : "FAIL"}};
  a.exit_code = pass ? 0 : 1;
  return a;
}

Artifact dispatch(const RunConfig& c) {
  const IncrementModel model = resolve_model(c.model_ref);
  if (c.command == Command::LatticeInfo) return lattice_command(c, model);
  const SparseLaw u0 = resolve_initial(c.u0_ref, model.dim());
  switch (c.command) {
    case Command::ExactLaw: return exact_law_command(c, model, u0);
    case Command::Simulate: return simulate_command(c, model, u0);
    case Command::Clt: return c.reps > 0 ? clt_configurations(c, model, u0) : ladder_command(c, model, u0);
    case Command::Llt: return ladder_command(c, model, u0);
    case Command::Martingale: return martingale_command(c, model, u0);
    case Command::OracleCheck: return oracle_command(c, model, u0);
    case Command::LatticeInfo: break;
  }
  throw UrnError(ErrorKind::InvalidSpec, "unhandled command");
}

void write_atomically(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UrnError(ErrorKind::InvalidSpec, "cannot write " + tmp.string());
    f << body;
    f.flush();
    if (!f) throw UrnError(ErrorKind::InvalidSpec, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw UrnError(ErrorKind::InvalidSpec, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    Artifact a = dispatch(config);
    json summary = {{"command", command_name(config.command)}, {"model", config.model_ref}};
    summary.update(a.summary);
    if (config.output) {
      write_atomically(*config.output, a.body);
      summary["out"] = config.output->string();
      out << summary.dump() << "\n";
    } else {
      out << a.body;
      err << summary.dump() << "\n";
    }
    return a.exit_code;
  } catch (const UrnError& e) {
    err << json{{"command", command_name(config.command)}, {"error", to_string(e.kind())}, {"message", e.what()}}.dump()
        << "\n";
    return is_validation_error(e.kind()) ? 2 : 3;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Infinite-color urn schemes: exact laws, simulation and limit-theorem diagnostics", "urnlab"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  std::string format = "csv";
  std::string out;
  app.add_option("--model", c.model_ref, "ssrw<d>, right-shift, triangular or file:<path>")->capture_default_str();
  app.add_option("--u0", c.u0_ref, "delta:<c0,c1,...> or file:<path>")->capture_default_str();
  app.add_option("--n", c.n, "number of draws")->capture_default_str();
  app.add_option("--n-list", c.n_list, "comma-separated increasing n ladder")->delimiter(',')->capture_default_str();
  app.add_option("--seed", c.seed, "64-bit base seed")->capture_default_str();
  app.add_option("--reps", c.reps, "replications (clt: random-configuration experiment when > 0)")
      ->capture_default_str();
  app.add_option("--lambda", c.lambda, "martingale parameter, one value or d comma-separated")->delimiter(',');
  app.add_option("--prune-eps", c.prune_eps, "total pruned-mass budget in [0, 1e-6]")->capture_default_str();
  app.add_option("--eps", c.eps, "exceedance thresholds")->delimiter(',')->capture_default_str();
  app.add_flag("--use-gamma-centering", c.use_gamma, "center at mu (log n + Euler gamma)");
  app.add_option("--out", out, "output path (written atomically)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  const std::pair<const char*, Command> commands[] = {
      {"exact-law", Command::ExactLaw},      {"simulate", Command::Simulate},
      {"clt", Command::Clt},                 {"llt", Command::Llt},
      {"martingale", Command::Martingale},   {"lattice-info", Command::LatticeInfo},
      {"oracle-check", Command::OracleCheck}};
  for (const auto& [name, cmd] : commands) {
    app.add_subcommand(name, std::string(name) + " command")->callback([&c, cmd = cmd] { c.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (!out.empty()) c.output = out;
  return run(c, std::cout, std::cerr);
}

}  // namespace urnlab
