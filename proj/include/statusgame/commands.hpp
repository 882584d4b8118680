// Subcommand implementations behind the CLI binary. Each returns the
// process exit code and writes human output to `out`, diagnostics to `err`;
// machine-readable files go to the --out base path.
//
// Exit codes: 0 success, 1 assumption violations, 2 bad input (config parse
// or argument validation), 3 no stable interior equilibrium (or too many
// failed sweep rows), 4 solver non-convergence, 5 simulation rest point not
// cutoff shaped.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace statusgame::cli {

struct CommonArgs {
  std::string config_path;  // path to a scenario file, or
  std::string preset;       // name of a bundled preset
  std::optional<double> tol;  // overrides solver residual tolerance
  bool seedless = false;      // asserts the run uses no randomness (always true)
};

int cmd_validate(const CommonArgs& args, std::ostream& out, std::ostream& err);

struct SolveArgs : CommonArgs {
  bool json = false;
  bool csv = false;
  std::string out_path;  // base name; .csv/.json appended per flags
};
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);

struct StaticsArgs : CommonArgs {
  std::string out_path;  // optional; JSON report written to <base>.json
};
int cmd_statics(const StaticsArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs : CommonArgs {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  std::string out_path;  // CSV written to <base>.csv
};
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs : CommonArgs {
  std::string out_path;  // <base>.json, <base>_trace.csv, assignment dump
};
int cmd_simulate(const SimulateArgs& args, std::ostream& out,
                 std::ostream& err);

// Runs the bundled acceptance suite; one line per criterion.
int cmd_check(std::ostream& out, std::ostream& err);

}  // namespace statusgame::cli
