#include "statusgame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace statusgame {

namespace {

constexpr double kStabilityZeroBand = 1e-7;

std::string describe(const CutoffProfile& p, const ResidualVector& r) {
  std::ostringstream os;
  os.precision(12);
  os << "(low=" << p.action_cutoff_low << ", group=" << p.group_cutoff
     << ", high=" << p.action_cutoff_high << ") |r|=" << r.max_norm();
  return os.str();
}

// In-group effort indifference margin at candidate cutoff t, group cutoff
// held fixed. Collapsed segments at the very ends of the group interval use
// boundary beliefs so the scan can include its endpoints.
double action_margin(const ModelSpec& spec, Group g, double group_cutoff,
                     double t) {
  const TypeDistribution& dist = spec.dist;
  double striver_mean;
  double idler_mean;
  if (g == Group::High) {
    striver_mean = dist.truncated_mean_or_midpoint(t, 1.0);
    idler_mean = dist.truncated_mean_or_midpoint(group_cutoff, t);
  } else {
    striver_mean = dist.truncated_mean_or_midpoint(t, group_cutoff);
    idler_mean = dist.truncated_mean_or_midpoint(0.0, t);
  }
  return spec.action_cost_gap(g, t) - spec.benefits.gap(g) -
         spec.mu_in(g) * (striver_mean - idler_mean);
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double fa, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

bool interior_enough(const CutoffProfile& p) {
  constexpr double eps = kDegenerateIntervalEps;
  return p.action_cutoff_low >= eps && p.group_cutoff - p.action_cutoff_low >= eps &&
         p.action_cutoff_high - p.group_cutoff >= eps &&
         1.0 - p.action_cutoff_high >= eps;
}

CutoffProfile newton_polish(const ModelSpec& spec, CutoffProfile p,
                            const SolverOptions& options) {
  std::vector<std::string> trace;
  ResidualVector r = equilibrium_residual(spec, p);
  trace.push_back(describe(p, r));
  for (int iter = 0; iter < options.max_newton_iterations; ++iter) {
    if (r.max_norm() <= options.newton_tol) return p;
    const Matrix3 j = residual_jacobian(spec, p);
    const Vec3 step =
        solve3(j, {-r.action_high, -r.action_low, -r.group});
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= 1e-9) {
      CutoffProfile cand = p;
      cand.action_cutoff_high += lambda * step[0];
      cand.action_cutoff_low += lambda * step[1];
      cand.group_cutoff += lambda * step[2];
      if (interior_enough(cand)) {
        const ResidualVector rc = equilibrium_residual(spec, cand);
        if (rc.max_norm() <= (1.0 - 1e-4 * lambda) * r.max_norm()) {
          p = cand;
          r = rc;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    trace.push_back(describe(p, r));
    if (!accepted) {
      throw NonConvergenceError("newton stalled at " + describe(p, r),
                                std::move(trace));
    }
  }
  if (r.max_norm() <= options.newton_tol) return p;
  throw NonConvergenceError("newton exceeded iteration budget",
                            std::move(trace));
}

StabilityCheck stability_from_jacobian(const Matrix3& j) {
  StabilityCheck out;
  out.action_high = j[0][0];
  out.action_low = j[1][1];
  out.group = -j[2][2];
  const double worst =
      std::max({out.action_high, out.action_low, out.group});
  const double band = kStabilityZeroBand;
  if (worst > band) {
    out.verdict = Stability::Unstable;
  } else if (std::abs(out.action_high) <= band ||
             std::abs(out.action_low) <= band || std::abs(out.group) <= band) {
    out.verdict = Stability::Indeterminate;
  } else {
    out.verdict = Stability::Stable;
  }
  return out;
}

Equilibrium build_equilibrium(const ModelSpec& spec, const CutoffProfile& p) {
  const TypeDistribution& dist = spec.dist;
  Equilibrium eq;
  eq.profile = p;
  eq.profile_class = classify_profile(p);
  eq.residual = equilibrium_residual(spec, p);
  const Matrix3 j = residual_jacobian(spec, p);
  eq.stability = stability_from_jacobian(j);
  eq.jacobian_det = det3(j);

  const double lo = p.action_cutoff_low;
  const double mid = p.group_cutoff;
  const double hi = p.action_cutoff_high;
  eq.segments[0] = {dist.interval_mass(0.0, lo),
                    dist.truncated_mean_or_midpoint(0.0, lo)};
  eq.segments[1] = {dist.interval_mass(lo, mid),
                    dist.truncated_mean_or_midpoint(lo, mid)};
  eq.segments[2] = {dist.interval_mass(mid, hi),
                    dist.truncated_mean_or_midpoint(mid, hi)};
  eq.segments[3] = {dist.interval_mass(hi, 1.0),
                    dist.truncated_mean_or_midpoint(hi, 1.0)};
  eq.total_effort = eq.segments[1].mass + eq.segments[3].mass;
  eq.mean_low_group = dist.truncated_mean(0.0, mid);
  eq.mean_high_group = dist.truncated_mean(mid, 1.0);
  eq.mean_population = dist.mean();

  eq.group_identity_residual = group_indifference_residual(spec, p);
  eq.group_identity_residual_direct =
      group_indifference_residual_direct(spec, p);
  eq.value_gap_offset = value_gap_form_offset(spec, p.group_cutoff);
  return eq;
}

// Status of one group-cutoff scan point.
struct OuterPoint {
  enum class Status { Ok, PoolHigh, PoolLow, MultipleRoots } status;
  double value = 0.0;  // group residual when Ok
  CutoffProfile profile;
  PoolingOutcome pool_kind = PoolingOutcome::NoneAct;
  Group pooled_group = Group::High;
};

OuterPoint eval_outer(const ModelSpec& spec, double cut,
                      const SolverOptions& options) {
  OuterPoint pt;
  const ActionCutoffResult high =
      solve_action_cutoff(spec, Group::High, cut, options);
  if (const auto* pool = std::get_if<PoolingOutcome>(&high)) {
    pt.status = OuterPoint::Status::PoolHigh;
    pt.pool_kind = *pool;
    pt.pooled_group = Group::High;
    return pt;
  }
  if (std::holds_alternative<MultipleRootsReport>(high)) {
    pt.status = OuterPoint::Status::MultipleRoots;
    pt.pooled_group = Group::High;
    return pt;
  }
  const ActionCutoffResult low =
      solve_action_cutoff(spec, Group::Low, cut, options);
  if (const auto* pool = std::get_if<PoolingOutcome>(&low)) {
    pt.status = OuterPoint::Status::PoolLow;
    pt.pool_kind = *pool;
    pt.pooled_group = Group::Low;
    return pt;
  }
  if (std::holds_alternative<MultipleRootsReport>(low)) {
    pt.status = OuterPoint::Status::MultipleRoots;
    pt.pooled_group = Group::Low;
    return pt;
  }
  pt.status = OuterPoint::Status::Ok;
  pt.profile = {std::get<double>(low), cut, std::get<double>(high)};
  pt.value = equilibrium_residual(spec, pt.profile).group;
  return pt;
}

std::string outer_status_note(const OuterPoint& pt, double cut) {
  std::ostringstream os;
  os.precision(6);
  os << "group cutoff " << cut << ": ";
  switch (pt.status) {
    case OuterPoint::Status::Ok:
      os << "interior action cutoffs, group residual " << pt.value;
      break;
    case OuterPoint::Status::PoolHigh:
    case OuterPoint::Status::PoolLow:
      os << "pooling in group " << to_string(pt.pooled_group) << " ("
         << (pt.pool_kind == PoolingOutcome::AllAct ? "everyone acts"
                                                    : "nobody acts")
         << ")";
      break;
    case OuterPoint::Status::MultipleRoots:
      os << "multiple action-cutoff roots in group "
         << to_string(pt.pooled_group);
      break;
  }
  return os.str();
}

}  // namespace

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

CutoffProfile refine_profile(const ModelSpec& spec, CutoffProfile seed,
                             const SolverOptions& options) {
  return newton_polish(spec, seed, options);
}

Equilibrium summarize_equilibrium(const ModelSpec& spec,
                                  const CutoffProfile& p) {
  return build_equilibrium(spec, p);
}

ActionCutoffResult solve_action_cutoff(const ModelSpec& spec, Group g,
                                       double group_cutoff,
                                       const SolverOptions& options) {
  if (!(group_cutoff > 0.0 && group_cutoff < 1.0)) {
    throw PreconditionError("group cutoff must be interior");
  }
  const double lo = g == Group::High ? group_cutoff : 0.0;
  const double hi = g == Group::High ? 1.0 : group_cutoff;
  const int n = std::max(16, options.action_scan_points);
  auto margin = [&](double t) {
    return action_margin(spec, g, group_cutoff, t);
  };

  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  bool any_pos = false;
  bool any_neg = false;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(n);
    values[static_cast<std::size_t>(i)] = margin(t);
    any_pos = any_pos || values[i] > 0.0;
    any_neg = any_neg || values[i] < 0.0;
  }

  // A margin that touches zero exactly at an interval endpoint is a
  // boundary case of pooling, not an interior cutoff.
  std::vector<double> roots;
  for (int i = 0; i + 1 <= n; ++i) {
    const double a = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(n);
    const double b = lo + (hi - lo) * static_cast<double>(i + 1) /
                              static_cast<double>(n);
    const double va = values[static_cast<std::size_t>(i)];
    const double vb = values[static_cast<std::size_t>(i + 1)];
    if (va == 0.0 && i > 0) {
      roots.push_back(a);
    } else if (va != 0.0 && vb != 0.0 && (va < 0.0) != (vb < 0.0)) {
      roots.push_back(bisect(margin, a, b, va, options.bisection_tol));
    }
  }

  if (roots.empty()) {
    // Positive margin everywhere: effort too costly for every type in the
    // group. Negative everywhere: effort dominates.
    return any_pos && !any_neg ? PoolingOutcome::NoneAct
                               : PoolingOutcome::AllAct;
  }
  if (roots.size() > 1) return MultipleRootsReport{std::move(roots)};
  return roots.front();
}

StabilityCheck check_stability(const ModelSpec& spec, const CutoffProfile& p,
                               const SolverOptions& options) {
  const ResidualVector r = equilibrium_residual(spec, p);
  if (r.max_norm() > options.residual_tol) {
    throw PreconditionError(
        "check_stability requires a solved profile; residual max-norm " +
        std::to_string(r.max_norm()));
  }
  return stability_from_jacobian(residual_jacobian(spec, p));
}

SolveResult solve_equilibrium(const ModelSpec& spec,
                              const SolverOptions& options) {
  SolveResult result;
  const int n = std::max(16, options.scan_points);

  std::vector<double> cuts(static_cast<std::size_t>(n));
  std::vector<OuterPoint> points(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    cuts[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    points[k] = eval_outer(spec, cuts[k], options);
  }

  // Bracket sign changes of the group residual between consecutive interior
  // scan points, bisect, then polish on the full system.
  auto outer_value = [&](double cut) {
    const OuterPoint pt = eval_outer(spec, cut, options);
    if (pt.status != OuterPoint::Status::Ok) {
      throw NonConvergenceError(
          "group-cutoff bracket crossed a pooling region near " +
              std::to_string(cut),
          {});
    }
    return pt.value;
  };

  std::vector<CutoffProfile> seeds;
  for (int k = 0; k + 1 < n; ++k) {
    const OuterPoint& a = points[k];
    const OuterPoint& b = points[k + 1];
    if (a.status != OuterPoint::Status::Ok ||
        b.status != OuterPoint::Status::Ok) {
      continue;
    }
    if (a.value == 0.0) {
      seeds.push_back(a.profile);
      continue;
    }
    if ((a.value < 0.0) == (b.value < 0.0)) continue;
    double root;
    try {
      root = bisect(outer_value, cuts[k], cuts[k + 1], a.value,
                    options.bisection_tol);
    } catch (const NonConvergenceError&) {
      result.notes.push_back("abandoned bracket [" + std::to_string(cuts[k]) +
                             ", " + std::to_string(cuts[k + 1]) +
                             "]: pooling region inside");
      continue;
    }
    const OuterPoint at_root = eval_outer(spec, root, options);
    if (at_root.status == OuterPoint::Status::Ok) {
      seeds.push_back(at_root.profile);
    }
  }

  for (const CutoffProfile& seed : seeds) {
    const CutoffProfile polished = newton_polish(spec, seed, options);
    const ResidualVector r = equilibrium_residual(spec, polished);
    if (r.max_norm() > options.residual_tol) continue;
    if (classify_profile(polished) != ProfileClass::Interior) continue;
    const bool duplicate =
        std::any_of(result.equilibria.begin(), result.equilibria.end(),
                    [&](const Equilibrium& eq) {
                      return std::abs(eq.profile.group_cutoff -
                                      polished.group_cutoff) < 1e-8;
                    });
    if (!duplicate) result.equilibria.push_back(build_equilibrium(spec, polished));
  }
  std::sort(result.equilibria.begin(), result.equilibria.end(),
            [](const Equilibrium& a, const Equilibrium& b) {
              return a.profile.group_cutoff < b.profile.group_cutoff;
            });

  if (result.equilibria.empty()) {
    // Summarize what the scan saw so pooling/corner outcomes are reportable.
    int ok_pos = 0;
    int ok_neg = 0;
    int pool_high = 0;
    int pool_low = 0;
    int multi = 0;
    for (const OuterPoint& pt : points) {
      switch (pt.status) {
        case OuterPoint::Status::Ok:
          (pt.value > 0.0 ? ok_pos : ok_neg) += 1;
          break;
        case OuterPoint::Status::PoolHigh: pool_high += 1; break;
        case OuterPoint::Status::PoolLow: pool_low += 1; break;
        case OuterPoint::Status::MultipleRoots: multi += 1; break;
      }
    }
    std::ostringstream os;
    if (ok_neg > 0 && ok_pos == 0) {
      os << to_string(ProfileClass::AllInOneGroup)
         << " (group residual negative wherever evaluable: everyone joins "
            "the low group)";
    } else if (ok_pos > 0 && ok_neg == 0) {
      os << to_string(ProfileClass::AllInOneGroup)
         << " (group residual positive wherever evaluable: everyone joins "
            "the high group)";
    } else if (pool_high > 0 && pool_high >= pool_low) {
      os << to_string(ProfileClass::PoolingHighGroup)
         << " (no interior action cutoff in the high group on the scan)";
    } else if (pool_low > 0) {
      os << to_string(ProfileClass::PoolingLowGroup)
         << " (no interior action cutoff in the low group on the scan)";
    } else {
      os << "no interior equilibrium on the scan grid";
    }
    result.boundary_summary = os.str();
    const int stride = std::max(1, n / 8);
    for (int k = 0; k < n; k += stride) {
      result.notes.push_back(outer_status_note(points[k], cuts[k]));
    }
  }
  return result;
}

UniquenessReport multistart_scan(const ModelSpec& spec, int n_starts,
                                 const SolverOptions& options) {
  if (n_starts < 8) {
    throw PreconditionError("multistart_scan requires n_starts >= 8");
  }
  UniquenessReport report;
  report.starts = n_starts;
  for (int k = 0; k < n_starts; ++k) {
    const double cut =
        (static_cast<double>(k) + 0.5) / static_cast<double>(n_starts);
    const OuterPoint pt = eval_outer(spec, cut, options);
    if (pt.status != OuterPoint::Status::Ok) {
      report.notes.push_back(outer_status_note(pt, cut));
      continue;
    }
    CutoffProfile polished;
    try {
      polished = newton_polish(spec, pt.profile, options);
    } catch (const NonConvergenceError& e) {
      report.notes.push_back("start " + std::to_string(cut) +
                             ": " + e.what());
      continue;
    }
    if (equilibrium_residual(spec, polished).max_norm() > options.residual_tol)
      continue;
    if (classify_profile(polished) != ProfileClass::Interior) continue;
    const bool duplicate = std::any_of(
        report.distinct.begin(), report.distinct.end(),
        [&](const Equilibrium& eq) {
          const double d = std::max(
              {std::abs(eq.profile.action_cutoff_low - polished.action_cutoff_low),
               std::abs(eq.profile.group_cutoff - polished.group_cutoff),
               std::abs(eq.profile.action_cutoff_high -
                        polished.action_cutoff_high)});
          return d <= 1e-6;
        });
    if (!duplicate) {
      report.distinct.push_back(build_equilibrium(spec, polished));
    }
  }
  std::sort(report.distinct.begin(), report.distinct.end(),
            [](const Equilibrium& a, const Equilibrium& b) {
              return a.profile.group_cutoff < b.profile.group_cutoff;
            });
  return report;
}

}  // namespace statusgame
