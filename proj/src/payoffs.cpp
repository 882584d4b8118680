#include "statusgame/payoffs.hpp"

#include <algorithm>
#include <cmath>

namespace statusgame {

namespace {

// Conditional mean of an outer segment ([hi,1] or [0,lo]); exactly collapsed
// segments take the boundary value, near-collapsed ones are still an error.
double outer_mean(const TypeDistribution& dist, double lo, double hi) {
  if (lo == hi) return lo;
  return dist.truncated_mean(lo, hi);
}

struct SegmentMoments {
  double mass;
  double mean;
};

SegmentMoments moments(const TypeDistribution& dist, double lo, double hi) {
  return {dist.interval_mass(lo, hi), dist.truncated_mean(lo, hi)};
}

}  // namespace

std::string to_string(ProfileClass c) {
  switch (c) {
    case ProfileClass::Interior: return "interior";
    case ProfileClass::PoolingLowGroup: return "pooling-low-group";
    case ProfileClass::PoolingHighGroup: return "pooling-high-group";
    case ProfileClass::AllInOneGroup: return "all-in-one-group";
    case ProfileClass::Invalid: return "invalid";
  }
  return "unknown";
}

ProfileClass classify_profile(const CutoffProfile& p, double eps) {
  const double lo = p.action_cutoff_low;
  const double mid = p.group_cutoff;
  const double hi = p.action_cutoff_high;
  const bool ordered = lo >= 0.0 && lo <= mid && mid <= hi && hi <= 1.0;
  if (!ordered || !std::isfinite(lo) || !std::isfinite(mid) ||
      !std::isfinite(hi)) {
    return ProfileClass::Invalid;
  }
  if (mid < eps || 1.0 - mid < eps) return ProfileClass::AllInOneGroup;
  if (hi - mid < eps || 1.0 - hi < eps) return ProfileClass::PoolingHighGroup;
  if (lo < eps || mid - lo < eps) return ProfileClass::PoolingLowGroup;
  return ProfileClass::Interior;
}

double inside_reputation_gap(const TypeDistribution& dist,
                             const CutoffProfile& p, Group g) {
  if (g == Group::High) {
    return outer_mean(dist, p.action_cutoff_high, 1.0) -
           dist.truncated_mean(p.group_cutoff, p.action_cutoff_high);
  }
  return dist.truncated_mean(p.action_cutoff_low, p.group_cutoff) -
         outer_mean(dist, 0.0, p.action_cutoff_low);
}

double group_reputation_gap(const TypeDistribution& dist,
                            double group_cutoff) {
  return dist.truncated_mean(group_cutoff, 1.0) -
         dist.truncated_mean(0.0, group_cutoff);
}

double cross_cutoff_reputation_gap(const TypeDistribution& dist,
                                   const CutoffProfile& p) {
  return dist.truncated_mean(p.group_cutoff, p.action_cutoff_high) -
         dist.truncated_mean(p.action_cutoff_low, p.group_cutoff);
}

double inside_reputation_gap_d_own(const TypeDistribution& dist,
                                   const CutoffProfile& p, Group g) {
  if (g == Group::High) {
    const double t = p.action_cutoff_high;
    const SegmentMoments up = moments(dist, t, 1.0);
    const SegmentMoments dn = moments(dist, p.group_cutoff, t);
    return dist.pdf(t) * ((up.mean - t) / up.mass - (t - dn.mean) / dn.mass);
  }
  const double t = p.action_cutoff_low;
  const SegmentMoments up = moments(dist, t, p.group_cutoff);
  const SegmentMoments dn = moments(dist, 0.0, t);
  return dist.pdf(t) * ((up.mean - t) / up.mass - (t - dn.mean) / dn.mass);
}

double inside_reputation_gap_d_group(const TypeDistribution& dist,
                                     const CutoffProfile& p, Group g) {
  const double cut = p.group_cutoff;
  if (g == Group::High) {
    const SegmentMoments seg = moments(dist, cut, p.action_cutoff_high);
    return -dist.pdf(cut) * (seg.mean - cut) / seg.mass;
  }
  const SegmentMoments seg = moments(dist, p.action_cutoff_low, cut);
  return dist.pdf(cut) * (cut - seg.mean) / seg.mass;
}

double group_reputation_gap_deriv(const TypeDistribution& dist,
                                  double group_cutoff) {
  const SegmentMoments up = moments(dist, group_cutoff, 1.0);
  const SegmentMoments dn = moments(dist, 0.0, group_cutoff);
  return dist.pdf(group_cutoff) *
         ((up.mean - group_cutoff) / up.mass - (group_cutoff - dn.mean) / dn.mass);
}

double cross_cutoff_gap_d_high(const TypeDistribution& dist,
                               const CutoffProfile& p) {
  const double t = p.action_cutoff_high;
  const SegmentMoments seg = moments(dist, p.group_cutoff, t);
  return dist.pdf(t) * (t - seg.mean) / seg.mass;
}

double cross_cutoff_gap_d_low(const TypeDistribution& dist,
                              const CutoffProfile& p) {
  const double t = p.action_cutoff_low;
  const SegmentMoments seg = moments(dist, t, p.group_cutoff);
  return -dist.pdf(t) * (seg.mean - t) / seg.mass;
}

double cross_cutoff_gap_d_group(const TypeDistribution& dist,
                                const CutoffProfile& p) {
  const double cut = p.group_cutoff;
  const SegmentMoments up = moments(dist, cut, p.action_cutoff_high);
  const SegmentMoments dn = moments(dist, p.action_cutoff_low, cut);
  return dist.pdf(cut) *
         ((up.mean - cut) / up.mass - (cut - dn.mean) / dn.mass);
}

double ResidualVector::max_norm() const {
  return std::max({std::abs(action_high), std::abs(action_low),
                   std::abs(group)});
}

ResidualVector equilibrium_residual(const ModelSpec& spec,
                                    const CutoffProfile& p) {
  const TypeDistribution& dist = spec.dist;
  const double mu_h = spec.mu_in(Group::High);
  const double mu_l = spec.mu_in(Group::Low);

  ResidualVector r;
  r.action_high = spec.action_cost_gap(Group::High, p.action_cutoff_high) -
                  spec.benefits.gap(Group::High) -
                  mu_h * inside_reputation_gap(dist, p, Group::High);
  r.action_low = spec.action_cost_gap(Group::Low, p.action_cutoff_low) -
                 spec.benefits.gap(Group::Low) -
                 mu_l * inside_reputation_gap(dist, p, Group::Low);

  // Marginal group member: inside status as an idler in high vs a striver in
  // low, plus the outside-status gap, net of the cost wedges.
  const double idle_high_mean =
      dist.truncated_mean(p.group_cutoff, p.action_cutoff_high);
  const double striver_low_mean =
      dist.truncated_mean(p.action_cutoff_low, p.group_cutoff);
  const double high_group_mean = dist.truncated_mean(p.group_cutoff, 1.0);
  const double low_group_mean = dist.truncated_mean(0.0, p.group_cutoff);
  r.group = mu_h * (idle_high_mean - high_group_mean) -
            mu_l * (striver_low_mean - low_group_mean) +
            spec.mu_outside * (high_group_mean - low_group_mean) -
            spec.cross_cost_gap(p.group_cutoff) -
            spec.group_cost_gap(p.group_cutoff);
  return r;
}

Matrix3 residual_jacobian(const ModelSpec& spec, const CutoffProfile& p) {
  const TypeDistribution& dist = spec.dist;
  const double mu_h = spec.mu_in(Group::High);
  const double mu_l = spec.mu_in(Group::Low);
  const double cut = p.group_cutoff;
  const double f_cut = dist.pdf(cut);

  const SegmentMoments idle_high = moments(dist, cut, p.action_cutoff_high);
  const SegmentMoments striver_low = moments(dist, p.action_cutoff_low, cut);
  const SegmentMoments high_group = moments(dist, cut, 1.0);
  const SegmentMoments low_group = moments(dist, 0.0, cut);

  Matrix3 j{};
  j[0][0] = spec.action_cost_gap_slope(Group::High, p.action_cutoff_high) -
            mu_h * inside_reputation_gap_d_own(dist, p, Group::High);
  j[0][1] = 0.0;
  j[0][2] = -mu_h * inside_reputation_gap_d_group(dist, p, Group::High);

  j[1][0] = 0.0;
  j[1][1] = spec.action_cost_gap_slope(Group::Low, p.action_cutoff_low) -
            mu_l * inside_reputation_gap_d_own(dist, p, Group::Low);
  j[1][2] = -mu_l * inside_reputation_gap_d_group(dist, p, Group::Low);

  j[2][0] = mu_h * cross_cutoff_gap_d_high(dist, p);
  j[2][1] = mu_l * cross_cutoff_gap_d_low(dist, p);

  const double d_idle_high = f_cut * (idle_high.mean - cut) / idle_high.mass;
  const double d_striver_low = f_cut * (cut - striver_low.mean) / striver_low.mass;
  const double d_high_group = f_cut * (high_group.mean - cut) / high_group.mass;
  const double d_low_group = f_cut * (cut - low_group.mean) / low_group.mass;
  j[2][2] = mu_h * (d_idle_high - d_high_group) -
            mu_l * (d_striver_low - d_low_group) +
            spec.mu_outside * (d_high_group - d_low_group) -
            spec.cross_cost_gap_slope(cut) - spec.group_cost_gap_slope(cut);
  return j;
}

StageValue stage_value(const ModelSpec& spec, const CutoffProfile& p, Group g,
                       double theta) {
  const TypeDistribution& dist = spec.dist;
  const double mu = spec.mu_in(g);
  double group_mean;
  double striver_mean;
  double idler_mean;
  if (g == Group::High) {
    group_mean = dist.truncated_mean(p.group_cutoff, 1.0);
    striver_mean = outer_mean(dist, p.action_cutoff_high, 1.0);
    idler_mean = dist.truncated_mean(p.group_cutoff, p.action_cutoff_high);
  } else {
    group_mean = dist.truncated_mean(0.0, p.group_cutoff);
    striver_mean = dist.truncated_mean(p.action_cutoff_low, p.group_cutoff);
    idler_mean = outer_mean(dist, 0.0, p.action_cutoff_low);
  }
  const double shift = g == Group::High ? spec.policy.alpha : spec.policy.beta;
  const double effort_value =
      (g == Group::High ? spec.benefits.effort_high : spec.benefits.effort_low) -
      (spec.action_cost_raw(ActionChoice::Effort, g, theta) + shift) +
      mu * (striver_mean - group_mean);
  const double idle_value =
      (g == Group::High ? spec.benefits.idle_high : spec.benefits.idle_low) -
      spec.action_cost_raw(ActionChoice::Idle, g, theta) +
      mu * (idler_mean - group_mean);
  if (effort_value >= idle_value) {
    return {ActionChoice::Effort, effort_value};
  }
  return {ActionChoice::Idle, idle_value};
}

double continuation_value_gap(const ModelSpec& spec, const CutoffProfile& p,
                              double theta) {
  return stage_value(spec, p, Group::High, theta).value -
         stage_value(spec, p, Group::Low, theta).value;
}

double reduced_value_gap(const ModelSpec& spec, const CutoffProfile& p) {
  const TypeDistribution& dist = spec.dist;
  const double mu_h = spec.mu_in(Group::High);
  const double mu_l = spec.mu_in(Group::Low);
  const double idle_high_mean =
      dist.truncated_mean(p.group_cutoff, p.action_cutoff_high);
  const double striver_low_mean =
      dist.truncated_mean(p.action_cutoff_low, p.group_cutoff);
  const double high_group_mean = dist.truncated_mean(p.group_cutoff, 1.0);
  const double low_group_mean = dist.truncated_mean(0.0, p.group_cutoff);
  return mu_h * (idle_high_mean - high_group_mean) -
         mu_l * (striver_low_mean - low_group_mean) -
         spec.cross_cost_gap(p.group_cutoff);
}

double group_indifference_residual(const ModelSpec& spec,
                                   const CutoffProfile& p) {
  return spec.mu_outside * group_reputation_gap(spec.dist, p.group_cutoff) +
         reduced_value_gap(spec, p) - spec.group_cost_gap(p.group_cutoff);
}

double group_indifference_residual_direct(const ModelSpec& spec,
                                          const CutoffProfile& p) {
  return spec.mu_outside * group_reputation_gap(spec.dist, p.group_cutoff) +
         continuation_value_gap(spec, p, p.group_cutoff) -
         spec.group_cost_gap(p.group_cutoff);
}

double value_gap_form_offset(const ModelSpec& spec, double theta) {
  return (spec.action_cost_gap(Group::High, theta) - spec.policy.alpha) +
         spec.action_cost_gap(Group::Low, theta) + spec.benefits.idle_high -
         spec.benefits.effort_low;
}

}  // namespace statusgame
