// Equilibrium-free verification: a deterministic grid population plays best
// responses on group and action choices under empirically formed beliefs;
// rest points are compared against the analytic solver.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "statusgame/payoffs.hpp"

namespace statusgame {

// Belief assigned to an empty (group, action) segment: the segment's
// boundary type under the equilibrium interval convention, or a flat 0.5.
enum class EmptyBeliefRule { Boundary, Midpoint };

std::string to_string(EmptyBeliefRule r);

// How an agent compares the two groups.
//
// Reduced (default): the arrangement the solver's group condition zeroes -
// the high side carries the idle-in-high reputation with the effort-in-high
// cost, the low side the effort-in-low reputation with the idle-in-low
// cost. Rest points of these dynamics verify the same system the solver
// solves.
//
// Direct: the literal two-stage value function (own best action in each
// group). The two rules agree on action choices but generally disagree on
// the group margin by exactly value_gap_form_offset; direct-rule rest
// points are reported, never asserted against the solver.
enum class GroupChoiceRule { Reduced, Direct };

std::string to_string(GroupChoiceRule r);

struct SimOptions {
  int n = 10001;         // grid agents at (i+0.5)/n
  double damping = 0.5;  // fraction of flagged agents switched per step
  int max_iters = 500;
  EmptyBeliefRule empty_belief = EmptyBeliefRule::Boundary;
  GroupChoiceRule group_rule = GroupChoiceRule::Reduced;

  bool operator==(const SimOptions&) const = default;
};

struct Population {
  std::vector<double> types;     // (i+0.5)/n
  std::vector<double> weights;   // density weights, renormalized to sum 1
  std::vector<std::uint8_t> group;   // 0 = low, 1 = high
  std::vector<std::uint8_t> action;  // 0 = idle, 1 = effort

  std::size_t size() const { return types.size(); }
};

// Weighted segment means of the current assignment plus group and global
// means; empty segments filled per the rule.
struct Beliefs {
  double segment[2][2];  // [group][action]
  double group_mean[2];
  double population_mean;
};

Population make_population(const ModelSpec& spec, int n);
// Assign choices by cutoffs (ties at a cutoff take the higher choice).
void assign_from_profile(Population& pop, const CutoffProfile& p);
Population population_from_profile(const ModelSpec& spec, int n,
                                   const CutoffProfile& p);

Beliefs compute_beliefs(const Population& pop, EmptyBeliefRule rule);

// One synchronous best-response pass against the supplied beliefs.
struct StepResult {
  Population next;
  int changed = 0;
};
StepResult best_response_step(
    const ModelSpec& spec, const Population& pop,
    EmptyBeliefRule empty_rule = EmptyBeliefRule::Boundary,
    GroupChoiceRule group_rule = GroupChoiceRule::Reduced);

struct TraceRow {
  int iteration = 0;
  int flagged = 0;  // agents whose best response differed from their choice
  double implied_low = 0.0;
  double implied_group = 0.0;
  double implied_high = 0.0;
  bool cutoff_shaped = false;
};

struct RestPoint {
  Population population;
  bool converged = false;
  int iterations = 0;
  bool cutoff_shaped = false;
  std::optional<CutoffProfile> implied;  // set when cutoff shaped
  std::vector<TraceRow> trace;
  EmptyBeliefRule empty_belief = EmptyBeliefRule::Boundary;
};

// Damped dynamics: each step flags all agents whose best response differs
// and switches the first ceil(damping * flagged) of them (lowest index
// first). Converged after three consecutive steps with zero flagged agents.
RestPoint run_dynamics(const ModelSpec& spec, const SimOptions& options,
                       const Population& initial);

// Extracts block-boundary cutoffs; empty when the assignment is not
// monotone in type (group, and action within each group).
std::optional<CutoffProfile> implied_cutoffs(const Population& pop);

}  // namespace statusgame
