#include "statusgame/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace statusgame {

namespace {

void check_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error(std::string(what) + " outside [0,1]: " +
                            std::to_string(x));
  }
}

// Mass and mean of a linear density a + slope*(t - x0) over [lo, hi],
// expressed about the interval midpoint so short intervals stay exact.
struct PieceStats {
  double mass;
  double mean;
};

PieceStats linear_piece_stats(double lo, double hi, double f_lo, double f_hi) {
  const double h = hi - lo;
  const double mid = 0.5 * (lo + hi);
  const double f_mid = 0.5 * (f_lo + f_hi);
  const double slope = (h > 0.0) ? (f_hi - f_lo) / h : 0.0;
  const double mass = f_mid * h;
  double mean = mid;
  if (mass > 0.0) {
    // integral of t*f over the piece = mid*mass + slope*h^3/12
    mean = mid + slope * h * h / (12.0 * f_mid);
  }
  return {mass, mean};
}

}  // namespace

std::string to_string(DensityFamily family) {
  switch (family) {
    case DensityFamily::Uniform: return "uniform";
    case DensityFamily::LinearDecreasing: return "linear-decreasing";
    case DensityFamily::LinearIncreasing: return "linear-increasing";
    case DensityFamily::PiecewiseLinear: return "piecewise-linear";
    case DensityFamily::Tabulated: return "tabulated";
  }
  return "unknown";
}

TypeDistribution::TypeDistribution(DensityFamily family,
                                   std::vector<double> positions,
                                   std::vector<double> values,
                                   std::vector<double> raw_values,
                                   double normalization)
    : family_(family),
      positions_(std::move(positions)),
      values_(std::move(values)),
      raw_values_(std::move(raw_values)),
      normalization_(normalization) {
  if (!positions_.empty()) {
    cum_mass_.resize(positions_.size(), 0.0);
    for (std::size_t i = 1; i < positions_.size(); ++i) {
      const PieceStats p = linear_piece_stats(positions_[i - 1], positions_[i],
                                              values_[i - 1], values_[i]);
      cum_mass_[i] = cum_mass_[i - 1] + p.mass;
    }
  }
}

TypeDistribution TypeDistribution::uniform() {
  return TypeDistribution(DensityFamily::Uniform, {}, {}, {}, 1.0);
}

TypeDistribution TypeDistribution::linear_decreasing() {
  return TypeDistribution(DensityFamily::LinearDecreasing, {}, {}, {}, 1.0);
}

TypeDistribution TypeDistribution::linear_increasing() {
  return TypeDistribution(DensityFamily::LinearIncreasing, {}, {}, {}, 1.0);
}

TypeDistribution TypeDistribution::piecewise_linear(
    std::vector<double> positions, std::vector<double> values) {
  if (positions.size() < 2 || positions.size() != values.size()) {
    throw std::invalid_argument(
        "piecewise-linear density needs matching positions/values, >= 2 knots");
  }
  if (positions.front() != 0.0 || positions.back() != 1.0) {
    throw std::invalid_argument("knot positions must span [0, 1]");
  }
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw std::invalid_argument("knot positions must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument("density values must be finite and >= 0");
    }
    const bool interior = i != 0 && i + 1 != values.size();
    if (interior && values[i] <= 0.0) {
      throw std::invalid_argument(
          "full support requires strictly positive density at interior knots");
    }
  }
  double total = 0.0;
  for (std::size_t i = 1; i < positions.size(); ++i) {
    total += linear_piece_stats(positions[i - 1], positions[i], values[i - 1],
                                values[i])
                 .mass;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("density integrates to zero");
  }
  std::vector<double> scaled(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) scaled[i] = values[i] / total;
  return TypeDistribution(DensityFamily::PiecewiseLinear, std::move(positions),
                          std::move(scaled), std::move(values), total);
}

TypeDistribution TypeDistribution::tabulated(std::vector<double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("tabulated density needs >= 2 samples");
  }
  std::vector<double> positions(samples.size());
  const double step = 1.0 / static_cast<double>(samples.size() - 1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    positions[i] = (i + 1 == samples.size())
                       ? 1.0
                       : static_cast<double>(i) * step;
  }
  TypeDistribution pl =
      piecewise_linear(std::move(positions), std::move(samples));
  pl.family_ = DensityFamily::Tabulated;
  return pl;
}

double TypeDistribution::pdf(double x) const {
  check_unit_interval(x, "pdf argument");
  switch (family_) {
    case DensityFamily::Uniform: return 1.0;
    case DensityFamily::LinearDecreasing: return 2.0 * (1.0 - x);
    case DensityFamily::LinearIncreasing: return 2.0 * x;
    default: break;
  }
  const auto it =
      std::upper_bound(positions_.begin(), positions_.end(), x);
  std::size_t seg = static_cast<std::size_t>(it - positions_.begin());
  if (seg == 0) seg = 1;
  if (seg >= positions_.size()) seg = positions_.size() - 1;
  const double x0 = positions_[seg - 1];
  const double x1 = positions_[seg];
  const double w = (x - x0) / (x1 - x0);
  return values_[seg - 1] * (1.0 - w) + values_[seg] * w;
}

double TypeDistribution::cdf(double x) const {
  check_unit_interval(x, "cdf argument");
  switch (family_) {
    case DensityFamily::Uniform: return x;
    case DensityFamily::LinearDecreasing: return x * (2.0 - x);
    case DensityFamily::LinearIncreasing: return x * x;
    default: break;
  }
  if (x >= 1.0) return 1.0;
  const auto it = std::upper_bound(positions_.begin(), positions_.end(), x);
  std::size_t seg = static_cast<std::size_t>(it - positions_.begin());
  if (seg == 0) return 0.0;
  if (seg >= positions_.size()) seg = positions_.size() - 1;
  const PieceStats partial = linear_piece_stats(
      positions_[seg - 1], x, values_[seg - 1], pdf(x));
  return cum_mass_[seg - 1] + partial.mass;
}

void TypeDistribution::local_integrals(double lo, double hi, double* mass,
                                       double* moment) const {
  switch (family_) {
    case DensityFamily::Uniform: {
      const PieceStats p = linear_piece_stats(lo, hi, 1.0, 1.0);
      *mass = p.mass;
      *moment = p.mass * p.mean;
      return;
    }
    case DensityFamily::LinearDecreasing:
    case DensityFamily::LinearIncreasing: {
      const PieceStats p = linear_piece_stats(lo, hi, pdf(lo), pdf(hi));
      *mass = p.mass;
      *moment = p.mass * p.mean;
      return;
    }
    default: break;
  }
  double m = 0.0;
  double mom = 0.0;
  double cursor = lo;
  auto it = std::upper_bound(positions_.begin(), positions_.end(), lo);
  std::size_t seg = static_cast<std::size_t>(it - positions_.begin());
  if (seg == 0) seg = 1;
  while (cursor < hi && seg < positions_.size()) {
    const double stop = std::min(hi, positions_[seg]);
    if (stop > cursor) {
      const PieceStats p = linear_piece_stats(cursor, stop, pdf(cursor),
                                              pdf(stop));
      m += p.mass;
      mom += p.mass * p.mean;
      cursor = stop;
    }
    ++seg;
  }
  *mass = m;
  *moment = mom;
}

double TypeDistribution::interval_mass(double lo, double hi) const {
  check_unit_interval(lo, "interval endpoint");
  check_unit_interval(hi, "interval endpoint");
  if (!(lo <= hi)) throw PreconditionError("interval_mass requires lo <= hi");
  double mass = 0.0;
  double moment = 0.0;
  local_integrals(lo, hi, &mass, &moment);
  return mass;
}

double TypeDistribution::truncated_mean(double lo, double hi,
                                        double eps) const {
  check_unit_interval(lo, "truncation endpoint");
  check_unit_interval(hi, "truncation endpoint");
  if (!(lo <= hi)) {
    throw PreconditionError("truncated_mean requires lo <= hi");
  }
  if (hi - lo < eps) throw DegenerateIntervalError(lo, hi);
  double mass = 0.0;
  double moment = 0.0;
  local_integrals(lo, hi, &mass, &moment);
  if (!(mass > 0.0)) throw DegenerateIntervalError(lo, hi);
  return moment / mass;
}

double TypeDistribution::truncated_mean_or_midpoint(double lo, double hi,
                                                    double eps) const {
  check_unit_interval(lo, "truncation endpoint");
  check_unit_interval(hi, "truncation endpoint");
  if (!(lo <= hi)) {
    throw PreconditionError("truncated_mean_or_midpoint requires lo <= hi");
  }
  if (hi - lo < eps) return 0.5 * (lo + hi);
  double mass = 0.0;
  double moment = 0.0;
  local_integrals(lo, hi, &mass, &moment);
  if (!(mass > 0.0)) return 0.5 * (lo + hi);
  return moment / mass;
}

double TypeDistribution::truncated_mean_deriv_hi(double lo, double hi) const {
  const double m = truncated_mean(lo, hi);
  const double mass = interval_mass(lo, hi);
  return pdf(hi) * (hi - m) / mass;
}

double TypeDistribution::truncated_mean_deriv_lo(double lo, double hi) const {
  const double m = truncated_mean(lo, hi);
  const double mass = interval_mass(lo, hi);
  return pdf(lo) * (m - lo) / mass;
}

double TypeDistribution::jewitt_gap(double cut, double lo, double hi) const {
  if (!(lo < cut && cut < hi)) {
    throw PreconditionError("jewitt_gap requires lo < cut < hi");
  }
  return truncated_mean(cut, hi) - truncated_mean(lo, cut);
}

}  // namespace statusgame
