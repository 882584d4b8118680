// Equilibrium search: nested scan/bisection over the group cutoff with
// per-group action-cutoff solves inside, Newton polish on the full residual
// system, stability classification, and an empirical multistart uniqueness
// scan.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "statusgame/payoffs.hpp"

namespace statusgame {

struct SolverOptions {
  double residual_tol = 1e-8;   // ceiling on returned equilibria
  double newton_tol = 1e-10;    // polish target (max-norm)
  int max_newton_iterations = 100;
  int scan_points = 512;        // group-cutoff scan resolution
  int action_scan_points = 256; // per-group action-cutoff scan resolution
  double bisection_tol = 1e-12;
  int multistart_count = 32;

  bool operator==(const SolverOptions&) const = default;
};

// A group's action margin never changes sign: either every type in the group
// prefers effort or none does.
enum class PoolingOutcome { AllAct, NoneAct };

// The action-indifference residual crossed zero more than once on the scan
// grid (possible for non-monotone densities).
struct MultipleRootsReport {
  std::vector<double> roots;
};

using ActionCutoffResult =
    std::variant<double, PoolingOutcome, MultipleRootsReport>;

// Solves the in-group effort indifference for one group, taking the group
// cutoff as given. Requires an interior group cutoff.
ActionCutoffResult solve_action_cutoff(const ModelSpec& spec, Group g,
                                       double group_cutoff,
                                       const SolverOptions& options = {});

// Damped Newton on the full residual system from a seed profile; iterates
// stay strictly inside the interior ordering. Throws NonConvergenceError
// (with the visited iterates) when it stalls or cycles.
CutoffProfile refine_profile(const ModelSpec& spec, CutoffProfile seed,
                             const SolverOptions& options = {});


enum class Stability { Stable, Unstable, Indeterminate };

std::string to_string(Stability s);

// The three slope conditions a stable equilibrium must satisfy (all strictly
// negative): effort-margin slope at each action cutoff, and the group-margin
// slope at the group cutoff.
struct StabilityCheck {
  Stability verdict = Stability::Indeterminate;
  double action_high = 0.0;
  double action_low = 0.0;
  double group = 0.0;
};

struct SegmentStat {
  double mass = 0.0;
  double mean = 0.0;
};

struct Equilibrium {
  CutoffProfile profile;
  ProfileClass profile_class = ProfileClass::Invalid;
  ResidualVector residual;
  StabilityCheck stability;
  double jacobian_det = 0.0;
  // (low, idle), (low, effort), (high, idle), (high, effort)
  std::array<SegmentStat, 4> segments{};
  double total_effort = 0.0;
  // Display values: the perceived group means and the population mean.
  double mean_low_group = 0.0;
  double mean_high_group = 0.0;
  double mean_population = 0.0;
  // Group-indifference identity check in both arrangements plus the
  // predicted gap between them (see payoffs).
  double group_identity_residual = 0.0;
  double group_identity_residual_direct = 0.0;
  double value_gap_offset = 0.0;
};

struct SolveResult {
  std::vector<Equilibrium> equilibria;
  // Classification and per-region notes when the scan found no interior
  // equilibrium (pooling / everyone-in-one-group outcomes are data).
  std::string boundary_summary;
  std::vector<std::string> notes;

  bool no_interior() const { return equilibria.empty(); }
};

SolveResult solve_equilibrium(const ModelSpec& spec,
                              const SolverOptions& options = {});
// Assembles the full equilibrium record (classification, stability slopes,
// segments, identity diagnostics) for a profile; does not re-solve.
Equilibrium summarize_equilibrium(const ModelSpec& spec,
                                  const CutoffProfile& p);


// Evaluates the stability slopes at a candidate profile. The profile must
// already solve the residual system to within options.residual_tol.
StabilityCheck check_stability(const ModelSpec& spec, const CutoffProfile& p,
                               const SolverOptions& options = {});

struct UniquenessReport {
  int starts = 0;
  std::vector<Equilibrium> distinct;
  std::vector<std::string> notes;
};

// Newton from a stratified grid of initial group cutoffs; reports distinct
// converged equilibria (pairwise profile distance > 1e-6).
UniquenessReport multistart_scan(const ModelSpec& spec, int n_starts,
                                 const SolverOptions& options = {});

}  // namespace statusgame
