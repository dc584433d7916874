#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace paritydisp {

inline constexpr const char* kConfigEnvVar = "PARITYDISP_CONFIG";

enum ExitCode { kExitOk = 0, kExitCheckFailure = 1, kExitUsage = 2 };

/// Settings shared by all subcommands. Resolution order is flag, then the JSON
/// config file (--config, else $PARITYDISP_CONFIG), then these defaults.
struct CliConfig {
  int dim = 128;
  std::optional<int> interior_dim;
  double tail_tol = 1e-10;
  double safe_radius = 0.25;
  double default_tolerance = 1e-8;
  std::map<std::string, double> tolerances;
  double convergence_threshold = 1e-8;
  int jobs = 1;
  std::string format = "structured";  // or "rows"
  std::optional<std::string> out;
  std::optional<std::string> report;
  std::optional<std::string> stats;
};

/// Reads a config file; unknown keys are rejected.
CliConfig load_config(const std::string& path, CliConfig base = {});

/// Entry point behind the `paritydisp` binary. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paritydisp
