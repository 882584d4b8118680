// Error types shared across the toolkit.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace statusgame {

// An integration interval collapsed below the configured epsilon. Signals a
// pooled / empty segment to callers that did not opt into boundary beliefs.
class DegenerateIntervalError : public std::runtime_error {
 public:
  DegenerateIntervalError(double lo, double hi)
      : std::runtime_error("degenerate interval [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]"),
        lo(lo),
        hi(hi) {}
  double lo;
  double hi;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Newton refinement failed to settle; carries the visited iterates.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::string what, std::vector<std::string> trace)
      : std::runtime_error(std::move(what)), trace(std::move(trace)) {}
  std::vector<std::string> trace;
};

class SingularJacobianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotStableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A re-solve at shifted parameters landed far from the base equilibrium:
// the continuation crossed into a different branch or a pooling region.
class BranchJumpError : public std::runtime_error {
 public:
  BranchJumpError(std::string what, double distance)
      : std::runtime_error(std::move(what)), distance(distance) {}
  double distance;
};

}  // namespace statusgame
