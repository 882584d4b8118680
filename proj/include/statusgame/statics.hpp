// Comparative statics: cutoff sensitivities to the three policy shifters via
// implicit differentiation of the residual system, finite-difference
// re-solves as an independent cross-check, and total-effort responses.
#pragma once

#include <array>
#include <string>

#include "statusgame/solver.hpp"

namespace statusgame {

enum class DerivSign { Negative, Zero, Positive };

char to_char(DerivSign s);

// Rows: (group_cutoff, action_cutoff_high, action_cutoff_low).
// Columns: (alpha, beta, gamma).
using SignTable = std::array<std::array<DerivSign, 3>, 3>;

struct StaticsReport {
  Matrix3 ift{};  // implicit-function-theorem derivatives
  Matrix3 fd{};   // finite-difference re-solve derivatives
  std::array<std::string, 3> fd_status{};  // per-column: "ok" or error text
  SignTable sign_table{};
  // Whether each shifter column shows the canonical spillover pattern:
  // alpha (-,+,+), beta (+,+,+), gamma (+,+,-).
  std::array<bool, 3> column_sign_ok{};
  std::array<double, 3> total_effort_response{};
  double jacobian_det = 0.0;
};

// Cutoff derivatives with respect to (alpha, beta, gamma) at a stable
// interior equilibrium. Throws NotStableError / SingularJacobianError.
Matrix3 ift_derivatives(const ModelSpec& spec, const Equilibrium& eq);

// Central differences of re-solved cutoffs, Newton continuation from the
// base profile, Richardson-extrapolated when the two step sizes disagree.
// Throws BranchJumpError when a shifted solve leaves the base branch.
Matrix3 fd_derivatives(const ModelSpec& spec, const Equilibrium& eq,
                       double step = 1e-4, const SolverOptions& options = {});

// d(total effort)/d(shifter) by the chain rule on the segment masses.
std::array<double, 3> total_effort_responses(const ModelSpec& spec,
                                             const Equilibrium& eq,
                                             const Matrix3& ift);

// Full report; finite-difference failures are recorded per column rather
// than thrown.
StaticsReport comparative_statics(const ModelSpec& spec, const Equilibrium& eq,
                                  double fd_step = 1e-4,
                                  const SolverOptions& options = {});

}  // namespace statusgame
