// Game primitives: costs, benefits, status sensitivities, policy shifters,
// and validation of the signaling assumptions the equilibrium analysis needs.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "statusgame/density.hpp"

namespace statusgame {

enum class Group { Low = 0, High = 1 };
enum class ActionChoice { Idle = 0, Effort = 1 };

inline const char* to_string(Group g) {
  return g == Group::High ? "h" : "l";
}

// Built-in cost family: effort costs delta_g * (1 - theta), idle costs zero.
struct LinearGapActionCost {
  double delta_h = 1.0;
  double delta_l = 0.5;
};

// Arbitrary costs sampled on a strictly increasing grid spanning [0,1],
// linearly interpolated. Indexed by [group][action].
struct TabulatedActionCost {
  std::vector<double> grid;
  std::array<std::array<std::vector<double>, 2>, 2> values;
};

using ActionCostFamily = std::variant<LinearGapActionCost, TabulatedActionCost>;

// Built-in group-cost family: joining high costs kappa*(1-theta) + kappa0,
// joining low costs zero.
struct LinearGapGroupCost {
  double kappa = 0.1;
  double kappa0 = 0.0;
};

struct TabulatedGroupCost {
  std::vector<double> grid;
  std::array<std::vector<double>, 2> values;  // indexed by group
};

using GroupCostFamily = std::variant<LinearGapGroupCost, TabulatedGroupCost>;

// Material benefit v(a, g). Only the per-group effort gaps affect cutoffs;
// the levels are carried for value reporting.
struct Benefits {
  double effort_high = 0.0;  // v(1,h)
  double idle_high = 0.0;    // v(0,h)
  double effort_low = 0.0;   // v(1,l)
  double idle_low = 0.0;     // v(0,l)

  double gap(Group g) const {
    return g == Group::High ? effort_high - idle_high : effort_low - idle_low;
  }

  bool operator==(const Benefits&) const = default;
};

// Additive policy shifters: alpha raises the effort-cost gap in the high
// group, beta in the low group, gamma raises the group-cost gap.
struct PolicyShifters {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  bool operator==(const PolicyShifters&) const = default;
};

struct ModelSpec {
  TypeDistribution dist = TypeDistribution::uniform();
  ActionCostFamily action_cost = LinearGapActionCost{};
  GroupCostFamily group_cost = LinearGapGroupCost{};
  Benefits benefits;
  double mu_inside = 0.4;
  double mu_outside = 0.5;
  // Experimental per-group override of the inside-status sensitivity.
  std::optional<double> mu_inside_high;
  std::optional<double> mu_inside_low;
  PolicyShifters policy;

  double action_cost_raw(ActionChoice a, Group g, double theta) const;
  double group_cost_raw(Group g, double theta) const;

  // Effort-cost gap d(1,g,t) - d(0,g,t) plus the group's policy shifter.
  double action_cost_gap(Group g, double theta) const;
  double action_cost_gap_slope(Group g, double theta) const;

  // Group-cost gap c(h,t) - c(l,t) plus gamma.
  double group_cost_gap(double theta) const;
  double group_cost_gap_slope(double theta) const;

  // Cost wedge d(1,h,t) - d(0,l,t) entering the group-indifference residual.
  // Deliberately unshifted by policy.
  double cross_cost_gap(double theta) const;
  double cross_cost_gap_slope(double theta) const;

  double mu_in(Group g) const {
    if (g == Group::High && mu_inside_high) return *mu_inside_high;
    if (g == Group::Low && mu_inside_low) return *mu_inside_low;
    return mu_inside;
  }

  ModelSpec with_policy(PolicyShifters p) const {
    ModelSpec out = *this;
    out.policy = p;
    return out;
  }
};

struct AssumptionViolation {
  std::string assumption;  // which requirement failed
  double theta;            // grid point, or NaN for parameter checks
  std::string detail;      // offending values, human readable
};

struct ValidationReport {
  std::vector<AssumptionViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks monotonicity and single-crossing on a 1001-point grid plus the
// parameter orderings. Violations are data, never exceptions.
ValidationReport validate(const ModelSpec& spec);

}  // namespace statusgame
