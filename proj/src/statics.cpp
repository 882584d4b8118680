#include "statusgame/statics.hpp"

#include <cmath>
#include <limits>

namespace statusgame {

namespace {

constexpr double kSignZeroTol = 1e-12;
constexpr double kBranchJumpDistance = 0.1;

PolicyShifters shifted(PolicyShifters base, int which, double delta) {
  switch (which) {
    case 0: base.alpha += delta; break;
    case 1: base.beta += delta; break;
    default: base.gamma += delta; break;
  }
  return base;
}

double profile_distance(const CutoffProfile& a, const CutoffProfile& b) {
  return std::max({std::abs(a.action_cutoff_low - b.action_cutoff_low),
                   std::abs(a.group_cutoff - b.group_cutoff),
                   std::abs(a.action_cutoff_high - b.action_cutoff_high)});
}

// Newton continuation from the base profile on a policy-shifted spec.
CutoffProfile continue_solve(const ModelSpec& spec, const CutoffProfile& base,
                             int which, double delta,
                             const SolverOptions& options) {
  const ModelSpec moved = spec.with_policy(shifted(spec.policy, which, delta));
  CutoffProfile polished;
  try {
    polished = refine_profile(moved, base, options);
  } catch (const NonConvergenceError& e) {
    throw BranchJumpError(std::string("shifted solve did not converge: ") +
                              e.what(),
                          std::numeric_limits<double>::quiet_NaN());
  }
  const double dist = profile_distance(base, polished);
  if (dist > kBranchJumpDistance) {
    throw BranchJumpError("shifted solve landed " + std::to_string(dist) +
                              " away from the base equilibrium",
                          dist);
  }
  if (classify_profile(polished) != ProfileClass::Interior) {
    throw BranchJumpError("shifted solve left the interior region", dist);
  }
  if (equilibrium_residual(moved, polished).max_norm() > options.residual_tol) {
    throw BranchJumpError("shifted solve residual above tolerance", dist);
  }
  return polished;
}

// Rows ordered (group, high, low) to match the report layout.
std::array<double, 3> column_from_pair(const CutoffProfile& plus,
                                       const CutoffProfile& minus,
                                       double step) {
  const double inv = 0.5 / step;
  return {(plus.group_cutoff - minus.group_cutoff) * inv,
          (plus.action_cutoff_high - minus.action_cutoff_high) * inv,
          (plus.action_cutoff_low - minus.action_cutoff_low) * inv};
}

// Central difference at two step sizes, Richardson-extrapolated when the
// half step still moves the estimate.
std::array<double, 3> fd_column(const ModelSpec& spec, const Equilibrium& eq,
                                int col, double step,
                                const SolverOptions& options) {
  std::array<std::array<double, 3>, 2> est{};
  const std::array<double, 2> steps = {step, 0.5 * step};
  for (int s = 0; s < 2; ++s) {
    const CutoffProfile plus =
        continue_solve(spec, eq.profile, col, steps[s], options);
    const CutoffProfile minus =
        continue_solve(spec, eq.profile, col, -steps[s], options);
    est[s] = column_from_pair(plus, minus, steps[s]);
  }
  double max_rel = 0.0;
  for (int row = 0; row < 3; ++row) {
    const double denom = std::max(std::abs(est[1][row]), 1e-12);
    max_rel = std::max(max_rel, std::abs(est[0][row] - est[1][row]) / denom);
  }
  std::array<double, 3> out{};
  for (int row = 0; row < 3; ++row) {
    out[row] = max_rel > 1e-3 ? (4.0 * est[1][row] - est[0][row]) / 3.0
                              : est[1][row];
  }
  return out;
}

DerivSign sign_of(double v) {
  if (v > kSignZeroTol) return DerivSign::Positive;
  if (v < -kSignZeroTol) return DerivSign::Negative;
  return DerivSign::Zero;
}

}  // namespace

char to_char(DerivSign s) {
  switch (s) {
    case DerivSign::Negative: return '-';
    case DerivSign::Zero: return '0';
    case DerivSign::Positive: return '+';
  }
  return '?';
}

Matrix3 ift_derivatives(const ModelSpec& spec, const Equilibrium& eq) {
  if (eq.profile_class != ProfileClass::Interior) {
    throw NotStableError("comparative statics require an interior profile");
  }
  if (eq.stability.verdict != Stability::Stable) {
    throw NotStableError("comparative statics require a stable equilibrium (" +
                         to_string(eq.stability.verdict) + ")");
  }
  const Matrix3 j = residual_jacobian(spec, eq.profile);
  const double det = det3(j);
  if (det <= 1e-12) {
    throw SingularJacobianError(
        "residual jacobian determinant not positive: " + std::to_string(det));
  }
  // Residual gradients in the shifters: alpha enters the high-group action
  // condition, beta the low-group one, gamma the group condition negatively.
  const std::array<Vec3, 3> policy_grad = {
      Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, -1.0}};
  Matrix3 out{};
  for (int col = 0; col < 3; ++col) {
    const Vec3 g = policy_grad[col];
    // Solution ordered (high, low, group) like the jacobian columns.
    const Vec3 x = solve3(j, {-g[0], -g[1], -g[2]});
    out[0][col] = x[2];
    out[1][col] = x[0];
    out[2][col] = x[1];
  }
  return out;
}

Matrix3 fd_derivatives(const ModelSpec& spec, const Equilibrium& eq,
                       double step, const SolverOptions& options) {
  if (!(step > 0.0)) {
    throw PreconditionError("fd_derivatives requires step > 0");
  }
  if (eq.profile_class != ProfileClass::Interior) {
    throw NotStableError("comparative statics require an interior profile");
  }
  Matrix3 out{};
  for (int col = 0; col < 3; ++col) {
    const std::array<double, 3> column = fd_column(spec, eq, col, step, options);
    for (int row = 0; row < 3; ++row) out[row][col] = column[row];
  }
  return out;
}

std::array<double, 3> total_effort_responses(const ModelSpec& spec,
                                             const Equilibrium& eq,
                                             const Matrix3& ift) {
  const double f_group = spec.dist.pdf(eq.profile.group_cutoff);
  const double f_low = spec.dist.pdf(eq.profile.action_cutoff_low);
  const double f_high = spec.dist.pdf(eq.profile.action_cutoff_high);
  std::array<double, 3> out{};
  for (int col = 0; col < 3; ++col) {
    out[col] =
        f_group * ift[0][col] - f_high * ift[1][col] - f_low * ift[2][col];
  }
  return out;
}

StaticsReport comparative_statics(const ModelSpec& spec, const Equilibrium& eq,
                                  double fd_step,
                                  const SolverOptions& options) {
  StaticsReport report;
  report.ift = ift_derivatives(spec, eq);
  report.jacobian_det = det3(residual_jacobian(spec, eq.profile));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int col = 0; col < 3; ++col) {
    try {
      const std::array<double, 3> column =
          fd_column(spec, eq, col, fd_step, options);
      for (int row = 0; row < 3; ++row) report.fd[row][col] = column[row];
      report.fd_status[col] = "ok";
    } catch (const BranchJumpError& e) {
      report.fd_status[col] = e.what();
      for (int row = 0; row < 3; ++row) report.fd[row][col] = nan;
    }
  }
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      report.sign_table[row][col] = sign_of(report.ift[row][col]);
    }
  }
  // Canonical spillover pattern per shifter, rows (group, high, low).
  const std::array<std::array<DerivSign, 3>, 3> expected = {
      std::array<DerivSign, 3>{DerivSign::Negative, DerivSign::Positive,
                               DerivSign::Positive},
      std::array<DerivSign, 3>{DerivSign::Positive, DerivSign::Positive,
                               DerivSign::Positive},
      std::array<DerivSign, 3>{DerivSign::Positive, DerivSign::Positive,
                               DerivSign::Negative}};
  for (int col = 0; col < 3; ++col) {
    report.column_sign_ok[col] =
        report.sign_table[0][col] == expected[col][0] &&
        report.sign_table[1][col] == expected[col][1] &&
        report.sign_table[2][col] == expected[col][2];
  }
  report.total_effort_response = total_effort_responses(spec, eq, report.ift);
  return report;
}

}  // namespace statusgame
