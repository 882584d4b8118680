#include "statusgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace statusgame {

namespace {

double interp(const std::vector<double>& grid, const std::vector<double>& vals,
              double x) {
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t seg = static_cast<std::size_t>(it - grid.begin());
  if (seg == 0) seg = 1;
  if (seg >= grid.size()) seg = grid.size() - 1;
  const double x0 = grid[seg - 1];
  const double x1 = grid[seg];
  const double w = (x - x0) / (x1 - x0);
  return vals[seg - 1] * (1.0 - w) + vals[seg] * w;
}

double interp_slope(const std::vector<double>& grid,
                    const std::vector<double>& vals, double x) {
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t seg = static_cast<std::size_t>(it - grid.begin());
  if (seg == 0) seg = 1;
  if (seg >= grid.size()) seg = grid.size() - 1;
  return (vals[seg] - vals[seg - 1]) / (grid[seg] - grid[seg - 1]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

double ModelSpec::action_cost_raw(ActionChoice a, Group g, double theta) const {
  if (const auto* lin = std::get_if<LinearGapActionCost>(&action_cost)) {
    if (a == ActionChoice::Idle) return 0.0;
    const double delta = g == Group::High ? lin->delta_h : lin->delta_l;
    return delta * (1.0 - theta);
  }
  const auto& tab = std::get<TabulatedActionCost>(action_cost);
  return interp(tab.grid,
                tab.values[static_cast<int>(g)][static_cast<int>(a)], theta);
}

double ModelSpec::group_cost_raw(Group g, double theta) const {
  if (const auto* lin = std::get_if<LinearGapGroupCost>(&group_cost)) {
    if (g == Group::Low) return 0.0;
    return lin->kappa * (1.0 - theta) + lin->kappa0;
  }
  const auto& tab = std::get<TabulatedGroupCost>(group_cost);
  return interp(tab.grid, tab.values[static_cast<int>(g)], theta);
}

double ModelSpec::action_cost_gap(Group g, double theta) const {
  const double shift = g == Group::High ? policy.alpha : policy.beta;
  return action_cost_raw(ActionChoice::Effort, g, theta) -
         action_cost_raw(ActionChoice::Idle, g, theta) + shift;
}

double ModelSpec::action_cost_gap_slope(Group g, double theta) const {
  if (const auto* lin = std::get_if<LinearGapActionCost>(&action_cost)) {
    return g == Group::High ? -lin->delta_h : -lin->delta_l;
  }
  const auto& tab = std::get<TabulatedActionCost>(action_cost);
  const int gi = static_cast<int>(g);
  return interp_slope(tab.grid, tab.values[gi][1], theta) -
         interp_slope(tab.grid, tab.values[gi][0], theta);
}

double ModelSpec::group_cost_gap(double theta) const {
  return group_cost_raw(Group::High, theta) -
         group_cost_raw(Group::Low, theta) + policy.gamma;
}

double ModelSpec::group_cost_gap_slope(double theta) const {
  if (const auto* lin = std::get_if<LinearGapGroupCost>(&group_cost)) {
    return -lin->kappa;
  }
  const auto& tab = std::get<TabulatedGroupCost>(group_cost);
  return interp_slope(tab.grid, tab.values[1], theta) -
         interp_slope(tab.grid, tab.values[0], theta);
}

double ModelSpec::cross_cost_gap(double theta) const {
  return action_cost_raw(ActionChoice::Effort, Group::High, theta) -
         action_cost_raw(ActionChoice::Idle, Group::Low, theta);
}

double ModelSpec::cross_cost_gap_slope(double theta) const {
  if (const auto* lin = std::get_if<LinearGapActionCost>(&action_cost)) {
    return -lin->delta_h;
  }
  const auto& tab = std::get<TabulatedActionCost>(action_cost);
  return interp_slope(tab.grid, tab.values[1][1], theta) -
         interp_slope(tab.grid, tab.values[0][0], theta);
}

ValidationReport validate(const ModelSpec& spec) {
  constexpr int kGridPoints = 1001;
  constexpr double kStrict = 1e-12;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ValidationReport report;

  auto flag = [&](const std::string& what, double theta,
                  const std::string& detail) {
    report.violations.push_back({what, theta, detail});
  };

  if (const auto* lin = std::get_if<LinearGapActionCost>(&spec.action_cost)) {
    if (!(lin->delta_h > lin->delta_l)) {
      flag("action-cost ordering delta_h > delta_l", nan,
           "delta_h=" + fmt(lin->delta_h) + " delta_l=" + fmt(lin->delta_l));
    }
    if (!(lin->delta_l > 0.0)) {
      flag("action-cost positivity delta_l > 0", nan,
           "delta_l=" + fmt(lin->delta_l));
    }
  }
  if (const auto* lin = std::get_if<LinearGapGroupCost>(&spec.group_cost)) {
    if (!(lin->kappa > 0.0)) {
      flag("group-cost slope kappa > 0", nan, "kappa=" + fmt(lin->kappa));
    }
    if (!(lin->kappa0 >= 0.0)) {
      flag("group-cost offset kappa0 >= 0", nan, "kappa0=" + fmt(lin->kappa0));
    }
  }
  if (!(spec.mu_inside > 0.0)) {
    flag("inside-status sensitivity mu_inside > 0", nan,
         "mu_inside=" + fmt(spec.mu_inside));
  }
  if (!(spec.mu_outside > 0.0)) {
    flag("outside-status sensitivity mu_outside > 0", nan,
         "mu_outside=" + fmt(spec.mu_outside));
  }
  for (Group g : {Group::High, Group::Low}) {
    if (!(spec.mu_in(g) > 0.0)) {
      flag(std::string("inside-status sensitivity override > 0, group ") +
               to_string(g),
           nan, "mu=" + fmt(spec.mu_in(g)));
    }
  }

  // Grid checks. Raw costs may be flat (the built-in families pin the low
  // alternative at zero); the gaps must be strictly decreasing.
  auto first_violation = [&](auto value, const char* what, bool strict) {
    double prev = value(0.0);
    for (int i = 1; i < kGridPoints; ++i) {
      const double theta =
          static_cast<double>(i) / static_cast<double>(kGridPoints - 1);
      const double cur = value(theta);
      const double diff = cur - prev;
      const bool bad = strict ? !(diff < -kStrict) : !(diff <= kStrict);
      if (bad) {
        flag(what, theta,
             "value rose from " + fmt(prev) + " to " + fmt(cur) + " at theta=" +
                 fmt(theta));
        return;
      }
      prev = cur;
    }
  };

  for (Group g : {Group::High, Group::Low}) {
    for (ActionChoice a : {ActionChoice::Idle, ActionChoice::Effort}) {
      first_violation(
          [&](double t) { return spec.action_cost_raw(a, g, t); },
          a == ActionChoice::Effort
              ? (g == Group::High ? "action cost decreasing, effort in h"
                                  : "action cost decreasing, effort in l")
              : (g == Group::High ? "action cost decreasing, idle in h"
                                  : "action cost decreasing, idle in l"),
          /*strict=*/false);
    }
    first_violation(
        [&](double t) { return spec.action_cost_gap(g, t); },
        g == Group::High ? "action single-crossing, group h"
                         : "action single-crossing, group l",
        /*strict=*/true);
    first_violation(
        [&](double t) { return spec.group_cost_raw(g, t); },
        g == Group::High ? "group cost decreasing, group h"
                         : "group cost decreasing, group l",
        /*strict=*/false);
  }
  first_violation([&](double t) { return spec.group_cost_gap(t); },
                  "group single-crossing", /*strict=*/true);

  return report;
}

}  // namespace statusgame
