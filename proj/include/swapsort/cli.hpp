#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "swapsort/convergence.hpp"
#include "swapsort/table.hpp"

namespace swapsort {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitOperational = 2 };

/// Entry point of the `swapsort` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Table builders shared by the CLI and the tests; their headers are the stable schemas.
Table trajectory_table(const std::vector<Trajectory>& runs);
Table summary_table(const std::vector<CellResult>& cells);
Table convergence_table(const CellResult& cell);
Table bound_table(const std::vector<std::pair<ProcessParams, BoundReport>>& reports);

/// `results.csv` -> `results.summary.csv`; a path without extension gets `.summary.<ext>`.
std::string summary_path(const std::string& out, Format format);

/// Parses the sweep grid document (JSON): n, r, p arrays plus optional runs, seed,
/// epsilon and budget. An r entry of "n" means all pairs for that cell's n.
struct GridConfig {
  std::vector<ProcessParams> cells;
  int runs = 300;
  ConvergenceConfig config;
  std::uint64_t seed = 1;
};
GridConfig parse_grid(std::istream& in);

}  // namespace swapsort
