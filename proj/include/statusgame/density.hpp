// Type distributions on [0,1]: densities, CDFs, and the truncated conditional
// means every reputational quantity in the model is built from.
#pragma once

#include <string>
#include <vector>

#include "statusgame/errors.hpp"

namespace statusgame {

enum class DensityFamily {
  Uniform,
  LinearDecreasing,  // f(t) = 2(1-t)
  LinearIncreasing,  // f(t) = 2t
  PiecewiseLinear,   // linear between user knots spanning [0,1]
  Tabulated,         // samples on a uniform grid, linearly interpolated
};

std::string to_string(DensityFamily family);

// Interval shorter than this is treated as a collapsed segment.
inline constexpr double kDegenerateIntervalEps = 1e-10;

// Immutable full-support distribution on [0,1]. All queries are pure; the
// object is safe to share across threads.
class TypeDistribution {
 public:
  static TypeDistribution uniform();
  static TypeDistribution linear_decreasing();
  static TypeDistribution linear_increasing();
  // Knot positions must be strictly increasing, start at 0 and end at 1.
  // Values must be >= 0, strictly positive at interior knots (full support).
  // The density is renormalized to integrate to one.
  static TypeDistribution piecewise_linear(std::vector<double> positions,
                                           std::vector<double> values);
  // Samples on the uniform grid i/(n-1), same constraints as knot values.
  static TypeDistribution tabulated(std::vector<double> samples);

  DensityFamily family() const { return family_; }
  // Raw integral of the user-supplied density before rescaling (1 for the
  // closed-form families).
  double normalization() const { return normalization_; }
  // Knot/sample data after normalization; empty for closed-form families.
  const std::vector<double>& knot_positions() const { return positions_; }
  const std::vector<double>& knot_values() const { return values_; }
  // Pre-normalization user inputs, kept for lossless config round-trips.
  const std::vector<double>& raw_values() const { return raw_values_; }

  double pdf(double x) const;
  double cdf(double x) const;  // throws std::domain_error outside [0,1]
  double mean() const { return truncated_mean(0.0, 1.0); }

  // Probability mass of [lo, hi], computed by local segment integration
  // (no cancellation for short intervals).
  double interval_mass(double lo, double hi) const;

  // E[t | lo <= t <= hi]. Requires 0 <= lo < hi <= 1 and positive mass;
  // throws DegenerateIntervalError when hi - lo < eps.
  double truncated_mean(double lo, double hi,
                        double eps = kDegenerateIntervalEps) const;
  // Boundary-belief mode: a collapsed interval reports its midpoint instead
  // of throwing. Used where an empty outer segment is a legal limit.
  double truncated_mean_or_midpoint(double lo, double hi,
                                    double eps = kDegenerateIntervalEps) const;

  // d/d(hi) and d/d(lo) of the truncated mean (both positive: raising either
  // endpoint raises the conditional mean).
  double truncated_mean_deriv_hi(double lo, double hi) const;
  double truncated_mean_deriv_lo(double lo, double hi) const;

  // Two-sided gap around an interior cut:
  //   E[t | cut <= t <= hi] - E[t | lo <= t <= cut].
  // Monotone in `cut` when the density is monotone; constant for uniform.
  double jewitt_gap(double cut, double lo, double hi) const;

 private:
  TypeDistribution(DensityFamily family, std::vector<double> positions,
                   std::vector<double> values, std::vector<double> raw_values,
                   double normalization);

  // moment = integral of t*f(t) over [lo, hi], same local scheme as mass.
  void local_integrals(double lo, double hi, double* mass,
                       double* moment) const;

  DensityFamily family_;
  std::vector<double> positions_;   // knot grid (piecewise families only)
  std::vector<double> values_;      // normalized density at knots
  std::vector<double> raw_values_;  // user-supplied density at knots
  std::vector<double> cum_mass_;    // F at knots
  double normalization_;
};

}  // namespace statusgame
