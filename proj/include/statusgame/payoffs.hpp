// Equilibrium-defining quantities: reputational gaps across segments, the
// three-equation residual system, its Jacobian, and stage-2 value gaps.
#pragma once

#include <string>

#include "statusgame/linalg.hpp"
#include "statusgame/model.hpp"

namespace statusgame {

enum class ProfileClass {
  Interior,
  PoolingLowGroup,
  PoolingHighGroup,
  AllInOneGroup,
  Invalid,
};

std::string to_string(ProfileClass c);

// Candidate cutoff triple. An interior partially-separating profile has
// 0 < action_cutoff_low < group_cutoff < action_cutoff_high < 1; everyone
// below the group cutoff joins the low group, everyone above the high
// group, and within each group types above the action cutoff exert effort.
struct CutoffProfile {
  double action_cutoff_low = 0.0;
  double group_cutoff = 0.0;
  double action_cutoff_high = 0.0;
};

ProfileClass classify_profile(const CutoffProfile& p,
                              double eps = kDegenerateIntervalEps);

// --- Reputational gaps -----------------------------------------------------
//
// Each gap is a difference of truncated conditional means over the segments
// a cutoff separates. Inner segments (those bounded by two cutoffs) must be
// non-degenerate; outer segments may collapse exactly onto 0 or 1, where the
// boundary value is used.

// Striver-vs-idler perceived-type gap inside one group.
double inside_reputation_gap(const TypeDistribution& dist,
                             const CutoffProfile& p, Group g);
// High-vs-low group perceived-type gap.
double group_reputation_gap(const TypeDistribution& dist, double group_cutoff);
// Gap between the two segments bordering the group cutoff: mean of the high
// group's idlers minus mean of the low group's strivers.
double cross_cutoff_reputation_gap(const TypeDistribution& dist,
                                   const CutoffProfile& p);

// Exact partial derivatives (interior profiles only).
double inside_reputation_gap_d_own(const TypeDistribution& dist,
                                   const CutoffProfile& p, Group g);
double inside_reputation_gap_d_group(const TypeDistribution& dist,
                                     const CutoffProfile& p, Group g);
double group_reputation_gap_deriv(const TypeDistribution& dist,
                                  double group_cutoff);
double cross_cutoff_gap_d_high(const TypeDistribution& dist,
                               const CutoffProfile& p);
double cross_cutoff_gap_d_low(const TypeDistribution& dist,
                              const CutoffProfile& p);
double cross_cutoff_gap_d_group(const TypeDistribution& dist,
                                const CutoffProfile& p);

// --- Residual system --------------------------------------------------------

// The three indifference residuals whose simultaneous zero is an equilibrium:
// marginal striver in each group, and the marginal group member.
struct ResidualVector {
  double action_high = 0.0;
  double action_low = 0.0;
  double group = 0.0;

  double max_norm() const;
};

ResidualVector equilibrium_residual(const ModelSpec& spec,
                                    const CutoffProfile& p);

// Jacobian of the residuals. Rows: (action_high, action_low, group).
// Columns: (action_cutoff_high, action_cutoff_low, group_cutoff).
// The two cross-group action entries are structural zeros.
Matrix3 residual_jacobian(const ModelSpec& spec, const CutoffProfile& p);

// --- Stage-2 value gaps ------------------------------------------------------

// Stage-2 value of type `theta` inside group `g`, given the beliefs implied
// by the profile's segments; the type picks its best action (ties -> effort).
struct StageValue {
  ActionChoice action;
  double value;
};

StageValue stage_value(const ModelSpec& spec, const CutoffProfile& p, Group g,
                       double theta);

// Direct across-group value difference V(a*,h,theta) - V(a*,l,theta).
double continuation_value_gap(const ModelSpec& spec, const CutoffProfile& p,
                              double theta);

// Value-gap form used by the reduced group-indifference equation (inside
// status of the marginal type in each group minus the cross cost wedge).
double reduced_value_gap(const ModelSpec& spec, const CutoffProfile& p);

// Group-indifference residual in its two arrangements. The reduced form is
// algebraically identical to ResidualVector::group; the direct form uses
// continuation_value_gap and differs from it by value_gap_form_offset
// whenever the marginal type's optimal actions are idle-in-high and
// effort-in-low (always true at interior equilibria).
double group_indifference_residual(const ModelSpec& spec,
                                   const CutoffProfile& p);
double group_indifference_residual_direct(const ModelSpec& spec,
                                          const CutoffProfile& p);
// Exact predicted gap between the two arrangements at the group cutoff.
double value_gap_form_offset(const ModelSpec& spec, double theta);

}  // namespace statusgame
