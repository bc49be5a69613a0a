#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace urnlab {

enum class Command { ExactLaw, Simulate, Clt, Llt, Martingale, LatticeInfo, OracleCheck };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  Command command = Command::ExactLaw;
  std::string model_ref = "ssrw1";
  std::string u0_ref = "delta:0";
  std::int64_t n = 100;
  std::vector<std::int64_t> n_list = {100, 1000, 10000};
  std::uint64_t seed = 1;
  int reps = 0;
  std::vector<double> lambda;
  double prune_eps = 0.0;
  std::vector<double> eps = {0.1, 0.2, 0.3};
  bool use_gamma = false;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::Csv;

  /// Throws UrnError(InvalidSpec) naming the violated constraint.
  void validate() const;
};

/// Executes one command. The artifact goes to `output` (written atomically)
/// or to `out` when no path is set; the one-line JSON summary goes to `out`
/// in the first case and to `err` in the second. Returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (flags > --config file > defaults) and calls run().
int cli_main(int argc, char** argv);

}  // namespace urnlab
