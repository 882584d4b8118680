// Command-line front end for the status-signaling group-choice toolkit.
#include <iostream>

#include "CLI11.hpp"
#include "statusgame/commands.hpp"

namespace {

using statusgame::cli::CommonArgs;

void add_common(CLI::App* cmd, CommonArgs& args) {
  auto* config =
      cmd->add_option("config", args.config_path, "scenario config file");
  config->check(CLI::ExistingFile);
  cmd->add_option("--preset", args.preset,
                  "bundled preset (s1, college, crime, residence)")
      ->excludes(config);
  cmd->add_option("--tol", args.tol, "override solver residual tolerance");
  cmd->add_flag("--seedless", args.seedless,
                "assert the run uses no randomness (always true)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cutoff-equilibrium toolkit for a two-stage status-signaling "
               "group-choice game"};
  app.require_subcommand(1);

  statusgame::cli::CommonArgs validate_args;
  auto* validate = app.add_subcommand(
      "validate", "check model assumptions of a scenario");
  add_common(validate, validate_args);

  statusgame::cli::SolveArgs solve_args;
  auto* solve =
      app.add_subcommand("solve", "find cutoff equilibria of a scenario");
  add_common(solve, solve_args);
  solve->add_flag("--json", solve_args.json, "write <out>.json");
  solve->add_flag("--csv", solve_args.csv, "write <out>.csv (default)");
  solve->add_option("--out", solve_args.out_path, "output base path");

  statusgame::cli::StaticsArgs statics_args;
  auto* statics = app.add_subcommand(
      "statics", "policy derivatives of the equilibrium cutoffs");
  add_common(statics, statics_args);
  statics->add_option("--out", statics_args.out_path,
                      "write JSON report to <out>.json");

  statusgame::cli::SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep", "re-solve along a parameter path, CSV output");
  add_common(sweep, sweep_args);
  sweep->add_option("--param", sweep_args.param,
                    "parameter name (alpha, beta, gamma, mu_inside, "
                    "mu_outside, delta_h, delta_l, kappa, kappa0)")
      ->required();
  sweep->add_option("--from", sweep_args.from, "start value")->required();
  sweep->add_option("--to", sweep_args.to, "end value")->required();
  sweep->add_option("--steps", sweep_args.steps, "number of rows (>= 2)")
      ->required();
  sweep->add_option("--out", sweep_args.out_path, "output base path");

  statusgame::cli::SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand(
      "simulate", "best-response dynamics on a grid population");
  add_common(simulate, simulate_args);
  simulate->add_option("--out", simulate_args.out_path,
                       "output base path (JSON summary + trace CSV)");

  auto* check = app.add_subcommand(
      "check", "run the bundled acceptance suite");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    return statusgame::cli::cmd_validate(validate_args, std::cout, std::cerr);
  }
  if (solve->parsed()) {
    return statusgame::cli::cmd_solve(solve_args, std::cout, std::cerr);
  }
  if (statics->parsed()) {
    return statusgame::cli::cmd_statics(statics_args, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    return statusgame::cli::cmd_sweep(sweep_args, std::cout, std::cerr);
  }
  if (simulate->parsed()) {
    return statusgame::cli::cmd_simulate(simulate_args, std::cout, std::cerr);
  }
  if (check->parsed()) {
    return statusgame::cli::cmd_check(std::cout, std::cerr);
  }
  return 0;
}
