#include "statusgame/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace statusgame {

namespace {

struct SegmentAccum {
  double mass = 0.0;
  double weighted_type = 0.0;

  void add(double w, double t) {
    mass += w;
    weighted_type += w * t;
  }
  bool empty() const { return mass <= 0.0; }
  double mean() const { return weighted_type / mass; }
};

// Per-group constants of one synchronous evaluation pass.
struct GroupTerms {
  double effort_reputation;  // mu_I * (striver belief - group mean)
  double idle_reputation;    // mu_I * (idler belief - group mean)
  double outside;            // mu_O * (group mean - population mean)
};

GroupTerms group_terms(const ModelSpec& spec, const Beliefs& b, Group g) {
  const int gi = static_cast<int>(g);
  const double mu = spec.mu_in(g);
  return {mu * (b.segment[gi][1] - b.group_mean[gi]),
          mu * (b.segment[gi][0] - b.group_mean[gi]),
          spec.mu_outside * (b.group_mean[gi] - b.population_mean)};
}

// Best (action, stage value + group utility) for one agent in one group.
struct GroupChoice {
  std::uint8_t action;
  double utility;
};

GroupChoice evaluate_group(const ModelSpec& spec, const GroupTerms& terms,
                           Group g, double theta, GroupChoiceRule rule) {
  const double effort_shift =
      g == Group::High ? spec.policy.alpha : spec.policy.beta;
  const double effort_benefit =
      g == Group::High ? spec.benefits.effort_high : spec.benefits.effort_low;
  const double idle_benefit =
      g == Group::High ? spec.benefits.idle_high : spec.benefits.idle_low;
  const double effort_value =
      effort_benefit -
      (spec.action_cost_raw(ActionChoice::Effort, g, theta) + effort_shift) +
      terms.effort_reputation;
  const double idle_value =
      idle_benefit - spec.action_cost_raw(ActionChoice::Idle, g, theta) +
      terms.idle_reputation;
  const bool effort = effort_value >= idle_value;  // ties take the effort
  const double group_cost = spec.group_cost_raw(g, theta) +
                            (g == Group::High ? spec.policy.gamma : 0.0);
  double compare;
  if (rule == GroupChoiceRule::Direct) {
    compare = (effort ? effort_value : idle_value) - group_cost + terms.outside;
  } else {
    // Reduced arrangement: idle reputation with the raw effort cost on the
    // high side, effort reputation with the raw idle cost on the low side.
    const double reduced_stage =
        g == Group::High
            ? terms.idle_reputation -
                  spec.action_cost_raw(ActionChoice::Effort, g, theta)
            : terms.effort_reputation -
                  spec.action_cost_raw(ActionChoice::Idle, g, theta);
    compare = reduced_stage - group_cost + terms.outside;
  }
  return {static_cast<std::uint8_t>(effort ? 1 : 0), compare};
}

struct Desired {
  std::uint8_t group;
  std::uint8_t action;
};

// Synchronous best responses of every agent against fixed beliefs.
std::vector<Desired> desired_choices(const ModelSpec& spec,
                                     const Population& pop,
                                     const Beliefs& beliefs,
                                     GroupChoiceRule rule) {
  const GroupTerms low = group_terms(spec, beliefs, Group::Low);
  const GroupTerms high = group_terms(spec, beliefs, Group::High);
  std::vector<Desired> out(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double theta = pop.types[i];
    const GroupChoice in_low =
        evaluate_group(spec, low, Group::Low, theta, rule);
    const GroupChoice in_high =
        evaluate_group(spec, high, Group::High, theta, rule);
    // Ties take the high group, mirroring the cutoff convention.
    if (in_high.utility >= in_low.utility) {
      out[i] = {1, in_high.action};
    } else {
      out[i] = {0, in_low.action};
    }
  }
  return out;
}

}  // namespace

std::string to_string(EmptyBeliefRule r) {
  return r == EmptyBeliefRule::Boundary ? "boundary" : "midpoint";
}

std::string to_string(GroupChoiceRule r) {
  return r == GroupChoiceRule::Reduced ? "reduced" : "direct";
}

Population make_population(const ModelSpec& spec, int n) {
  if (n < 2) throw PreconditionError("population needs n >= 2");
  Population pop;
  pop.types.resize(static_cast<std::size_t>(n));
  pop.weights.resize(static_cast<std::size_t>(n));
  pop.group.assign(static_cast<std::size_t>(n), 0);
  pop.action.assign(static_cast<std::size_t>(n), 0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    pop.types[static_cast<std::size_t>(i)] = t;
    const double w = spec.dist.pdf(t);
    pop.weights[static_cast<std::size_t>(i)] = w;
    total += w;
  }
  for (double& w : pop.weights) w /= total;
  return pop;
}

void assign_from_profile(Population& pop, const CutoffProfile& p) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double t = pop.types[i];
    const bool high = t >= p.group_cutoff;
    pop.group[i] = high ? 1 : 0;
    const double action_cut =
        high ? p.action_cutoff_high : p.action_cutoff_low;
    pop.action[i] = t >= action_cut ? 1 : 0;
  }
}

Population population_from_profile(const ModelSpec& spec, int n,
                                   const CutoffProfile& p) {
  Population pop = make_population(spec, n);
  assign_from_profile(pop, p);
  return pop;
}

Beliefs compute_beliefs(const Population& pop, EmptyBeliefRule rule) {
  SegmentAccum seg[2][2];
  SegmentAccum groups[2];
  SegmentAccum all;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double w = pop.weights[i];
    const double t = pop.types[i];
    seg[pop.group[i]][pop.action[i]].add(w, t);
    groups[pop.group[i]].add(w, t);
    all.add(w, t);
  }

  Beliefs b{};
  b.population_mean = all.mean();

  // Boundary proxies for the segments adjoining the group cutoff: the
  // group's own empirical boundary member, falling back to the other
  // group's boundary when the whole group is empty.
  double low_top = 0.5;
  double high_bottom = 0.5;
  if (!groups[0].empty() || !groups[1].empty()) {
    if (!groups[1].empty()) {
      double min_high = 1.0;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (pop.group[i] == 1) {
          min_high = pop.types[i];
          break;
        }
      }
      high_bottom = min_high;
    }
    if (!groups[0].empty()) {
      double max_low = 0.0;
      for (std::size_t i = pop.size(); i-- > 0;) {
        if (pop.group[i] == 0) {
          max_low = pop.types[i];
          break;
        }
      }
      low_top = max_low;
    }
    if (groups[1].empty()) high_bottom = low_top;
    if (groups[0].empty()) low_top = high_bottom;
  }

  const bool midpoint = rule == EmptyBeliefRule::Midpoint;
  b.group_mean[0] = groups[0].empty() ? (midpoint ? 0.5 : 0.0)
                                      : groups[0].mean();
  b.group_mean[1] = groups[1].empty() ? (midpoint ? 0.5 : 1.0)
                                      : groups[1].mean();
  b.segment[0][0] = seg[0][0].empty() ? (midpoint ? 0.5 : 0.0)
                                      : seg[0][0].mean();
  b.segment[0][1] = seg[0][1].empty() ? (midpoint ? 0.5 : low_top)
                                      : seg[0][1].mean();
  b.segment[1][0] = seg[1][0].empty() ? (midpoint ? 0.5 : high_bottom)
                                      : seg[1][0].mean();
  b.segment[1][1] = seg[1][1].empty() ? (midpoint ? 0.5 : 1.0)
                                      : seg[1][1].mean();
  return b;
}

StepResult best_response_step(const ModelSpec& spec, const Population& pop,
                              EmptyBeliefRule empty_rule,
                              GroupChoiceRule group_rule) {
  const Beliefs beliefs = compute_beliefs(pop, empty_rule);
  const std::vector<Desired> want =
      desired_choices(spec, pop, beliefs, group_rule);
  StepResult result{pop, 0};
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (want[i].group != pop.group[i] || want[i].action != pop.action[i]) {
      result.next.group[i] = want[i].group;
      result.next.action[i] = want[i].action;
      result.changed += 1;
    }
  }
  return result;
}

std::optional<CutoffProfile> implied_cutoffs(const Population& pop) {
  const std::size_t n = pop.size();
  std::size_t first_high = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (pop.group[i] == 1) {
      first_high = i;
      break;
    }
  }
  for (std::size_t i = first_high; i < n; ++i) {
    if (pop.group[i] == 0) return std::nullopt;  // group not monotone
  }
  auto action_block_start = [&](std::size_t begin, std::size_t end)
      -> std::optional<std::size_t> {
    std::size_t first = end;
    for (std::size_t i = begin; i < end; ++i) {
      if (pop.action[i] == 1) {
        first = i;
        break;
      }
    }
    for (std::size_t i = first; i < end; ++i) {
      if (pop.action[i] == 0) return std::nullopt;  // action not monotone
    }
    return first;
  };

  const auto low_start = action_block_start(0, first_high);
  const auto high_start = action_block_start(first_high, n);
  if (!low_start || !high_start) return std::nullopt;

  CutoffProfile p;
  p.group_cutoff = first_high < n ? pop.types[first_high] : 1.0;
  p.action_cutoff_low =
      *low_start < first_high ? pop.types[*low_start] : p.group_cutoff;
  p.action_cutoff_high = *high_start < n ? pop.types[*high_start] : 1.0;
  return p;
}

RestPoint run_dynamics(const ModelSpec& spec, const SimOptions& options,
                       const Population& initial) {
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw PreconditionError("damping must lie in (0, 1]");
  }
  if (initial.size() < 1000) {
    throw PreconditionError("dynamics need a grid of at least 1000 agents");
  }
  RestPoint rest;
  rest.population = initial;
  rest.empty_belief = options.empty_belief;
  int zero_streak = 0;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    const Beliefs beliefs =
        compute_beliefs(rest.population, options.empty_belief);
    const std::vector<Desired> want =
        desired_choices(spec, rest.population, beliefs, options.group_rule);
    std::vector<std::size_t> flagged;
    for (std::size_t i = 0; i < rest.population.size(); ++i) {
      if (want[i].group != rest.population.group[i] ||
          want[i].action != rest.population.action[i]) {
        flagged.push_back(i);
      }
    }
    rest.iterations = iter + 1;
    if (flagged.empty()) {
      zero_streak += 1;
    } else {
      zero_streak = 0;
      const std::size_t to_switch = static_cast<std::size_t>(
          std::ceil(options.damping * static_cast<double>(flagged.size())));
      for (std::size_t k = 0; k < to_switch && k < flagged.size(); ++k) {
        const std::size_t i = flagged[k];
        rest.population.group[i] = want[i].group;
        rest.population.action[i] = want[i].action;
      }
    }

    TraceRow row;
    row.iteration = iter;
    row.flagged = static_cast<int>(flagged.size());
    const auto implied = implied_cutoffs(rest.population);
    row.cutoff_shaped = implied.has_value();
    if (implied) {
      row.implied_low = implied->action_cutoff_low;
      row.implied_group = implied->group_cutoff;
      row.implied_high = implied->action_cutoff_high;
    }
    rest.trace.push_back(row);

    if (zero_streak >= 3) {
      rest.converged = true;
      break;
    }
  }
  const auto implied = implied_cutoffs(rest.population);
  rest.cutoff_shaped = implied.has_value();
  rest.implied = implied;
  return rest;
}

}  // namespace statusgame
