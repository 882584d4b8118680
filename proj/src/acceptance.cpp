#include "statusgame/acceptance.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "statusgame/commands.hpp"
#include "statusgame/simulate.hpp"
#include "statusgame/statics.hpp"

namespace statusgame {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Independent closed-form reduction for a uniform density with linear-gap
// costs and zero benefits/policy. Both reputational gaps are constant in the
// own action cutoff, which makes each action cutoff affine in the group
// cutoff and the group condition affine overall:
//   high cutoff: 1 - mu_i (1 - c) / (2 delta_h)
//   low cutoff:  1 - mu_i c / (2 delta_l)
//   group condition: A c + B = 0 with
//     A = mu_i^2/2 (1/(2 delta_l) + 1/(2 delta_h)) + delta_h + kappa
//     B = -mu_i^2/(4 delta_h) - (mu_i - mu_o)/2 - delta_h - kappa - kappa0
struct UniformClosedForm {
  bool interior = false;
  double low = 0.0;
  double group = 0.0;
  double high = 0.0;
};

UniformClosedForm uniform_closed_form(double delta_h, double delta_l,
                                      double mu_i, double mu_o, double kappa,
                                      double kappa0) {
  const double a = 0.5 * mu_i * mu_i * (0.5 / delta_l + 0.5 / delta_h) +
                   delta_h + kappa;
  const double b = -mu_i * mu_i / (4.0 * delta_h) - 0.5 * (mu_i - mu_o) -
                   delta_h - kappa - kappa0;
  UniformClosedForm out;
  if (a == 0.0) return out;
  const double c = -b / a;
  out.group = c;
  out.high = 1.0 - mu_i * (1.0 - c) / (2.0 * delta_h);
  out.low = 1.0 - mu_i * c / (2.0 * delta_l);
  out.interior = c > 0.0 && c < 1.0 && out.low > 0.0 && out.low < c &&
                 out.high > c && out.high < 1.0;
  return out;
}

Scenario make_scenario(const std::string& name, DensityFamily family,
                       double delta_h, double delta_l, double mu_i,
                       double mu_o, double kappa, double kappa0) {
  Scenario s;
  s.name = name;
  s.family = family;
  if (family == DensityFamily::PiecewiseLinear) {
    s.positions = {0.0, 0.5, 1.0};
    s.values = {1.5, 1.0, 0.5};
  }
  s.delta_h = delta_h;
  s.delta_l = delta_l;
  s.kappa = kappa;
  s.kappa0 = kappa0;
  s.mu_inside = mu_i;
  s.mu_outside = mu_o;
  return s;
}

struct SolvedEntry {
  CorpusEntry entry;
  ModelSpec spec;
  std::vector<Equilibrium> stable_interior;
};

// Solves the whole corpus once; later criteria reuse the results.
struct CorpusResults {
  std::vector<SolvedEntry> solved;
  int stable_count = 0;
  double solve_seconds = 0.0;
};

const CorpusResults& corpus_results() {
  static const CorpusResults results = [] {
    CorpusResults out;
    const auto start = Clock::now();
    for (const CorpusEntry& entry : regression_corpus()) {
      SolvedEntry solved{entry, build_model(entry.scenario), {}};
      if (!validate(solved.spec).ok()) continue;
      SolveResult result;
      try {
        result = solve_equilibrium(solved.spec, entry.scenario.solver);
      } catch (const NonConvergenceError&) {
        continue;
      }
      for (const Equilibrium& eq : result.equilibria) {
        if (eq.profile_class == ProfileClass::Interior &&
            eq.stability.verdict == Stability::Stable) {
          solved.stable_interior.push_back(eq);
        }
      }
      out.stable_count += static_cast<int>(solved.stable_interior.size());
      out.solved.push_back(std::move(solved));
    }
    out.solve_seconds = seconds_since(start);
    return out;
  }();
  return results;
}

CriterionResult closed_form_oracle() {
  CriterionResult r{1, "closed-form oracle on the uniform baseline", false,
                    "", 0.0};
  const auto start = Clock::now();
  const Scenario s1 = baseline_scenario();
  const UniformClosedForm oracle = uniform_closed_form(
      s1.delta_h, s1.delta_l, s1.mu_inside, s1.mu_outside, s1.kappa, s1.kappa0);
  const ModelSpec spec = build_model(s1);
  const SolveResult solved = solve_equilibrium(spec, s1.solver);
  r.seconds = seconds_since(start);

  std::ostringstream detail;
  if (!oracle.interior) {
    r.detail = "closed form predicts no interior equilibrium";
    return r;
  }
  if (solved.equilibria.size() != 1) {
    detail << "expected exactly one equilibrium, found "
           << solved.equilibria.size();
    r.detail = detail.str();
    return r;
  }
  const CutoffProfile& p = solved.equilibria.front().profile;
  const double err = std::max({std::abs(p.action_cutoff_low - oracle.low),
                               std::abs(p.group_cutoff - oracle.group),
                               std::abs(p.action_cutoff_high - oracle.high)});
  detail << "max cutoff error " << err << ", runtime " << r.seconds << "s";
  r.detail = detail.str();
  r.pass = err <= 1e-8 && r.seconds < 1.0;
  return r;
}

CriterionResult spillover_sign_suite() {
  CriterionResult r{2, "spillover sign suite over the regression corpus",
                    false, "", 0.0};
  const auto start = Clock::now();
  const CorpusResults& corpus = corpus_results();
  int checked = 0;
  int sign_failures = 0;
  std::ostringstream detail;
  for (const SolvedEntry& solved : corpus.solved) {
    for (const Equilibrium& eq : solved.stable_interior) {
      const Matrix3 d = ift_derivatives(solved.spec, eq);
      // rows: group, high, low; columns: alpha, beta, gamma
      const bool ok = d[0][0] < 0.0 && d[1][0] > 0.0 && d[2][0] > 0.0 &&
                      d[0][1] > 0.0 && d[1][1] > 0.0 && d[2][1] > 0.0 &&
                      d[0][2] > 0.0 && d[1][2] > 0.0 && d[2][2] < 0.0;
      checked += 1;
      if (!ok) {
        sign_failures += 1;
        detail << solved.entry.name << " sign mismatch; ";
      }
    }
  }
  r.seconds = corpus.solve_seconds + seconds_since(start);
  detail << checked << " stable interior equilibria checked, "
         << sign_failures << " sign failures, corpus+check runtime "
         << r.seconds << "s";
  r.detail = detail.str();
  r.pass = checked >= 20 && sign_failures == 0 && r.seconds < 30.0;
  return r;
}

CriterionResult derivative_oracle_agreement() {
  CriterionResult r{3, "implicit-function vs finite-difference derivatives",
                    false, "", 0.0};
  const auto start = Clock::now();
  const CorpusResults& corpus = corpus_results();
  int checked = 0;
  int failures = 0;
  double worst_rel = 0.0;
  double worst_abs = 0.0;
  for (const SolvedEntry& solved : corpus.solved) {
    for (const Equilibrium& eq : solved.stable_interior) {
      const Matrix3 ift = ift_derivatives(solved.spec, eq);
      Matrix3 fd;
      try {
        fd = fd_derivatives(solved.spec, eq, 1e-4,
                            solved.entry.scenario.solver);
      } catch (const BranchJumpError&) {
        failures += 1;
        continue;
      }
      checked += 1;
      for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
          const double diff = std::abs(ift[row][col] - fd[row][col]);
          worst_abs = std::max(worst_abs, diff);
          if (diff <= 1e-6) continue;
          const double rel = diff / std::abs(ift[row][col]);
          worst_rel = std::max(worst_rel, rel);
          if (rel > 1e-3) failures += 1;
        }
      }
    }
  }
  r.seconds = seconds_since(start);
  std::ostringstream detail;
  detail << checked << " equilibria compared, worst deviation abs "
         << worst_abs << " / rel-beyond-band " << worst_rel << ", "
         << failures << " failures";
  r.detail = detail.str();
  r.pass = checked >= 20 && failures == 0;
  return r;
}

CriterionResult jacobian_structure() {
  CriterionResult r{4, "residual-jacobian sign pattern and determinant",
                    false, "", 0.0};
  const auto start = Clock::now();
  const CorpusResults& corpus = corpus_results();
  int checked = 0;
  int failures = 0;
  for (const SolvedEntry& solved : corpus.solved) {
    for (const Equilibrium& eq : solved.stable_interior) {
      const Matrix3 j = residual_jacobian(solved.spec, eq.profile);
      const bool ok = j[0][0] < 0.0 && j[0][1] == 0.0 && j[0][2] > 0.0 &&
                      j[1][0] == 0.0 && j[1][1] < 0.0 && j[1][2] < 0.0 &&
                      j[2][0] > 0.0 && j[2][1] < 0.0 && j[2][2] > 0.0 &&
                      det3(j) > 0.0;
      checked += 1;
      if (!ok) failures += 1;
    }
  }
  r.seconds = seconds_since(start);
  std::ostringstream detail;
  detail << checked << " equilibria checked, " << failures << " failures";
  r.detail = detail.str();
  r.pass = checked >= 20 && failures == 0;
  return r;
}

CriterionResult monotonicity_suite() {
  CriterionResult r{5, "monotonicity of gaps and their derivative signs",
                    false, "", 0.0};
  const auto start = Clock::now();
  std::ostringstream detail;
  bool ok = true;

  // Two-sided gap monotone in the cut for monotone densities; constant for
  // the uniform one.
  const TypeDistribution uni = TypeDistribution::uniform();
  const TypeDistribution dec = TypeDistribution::linear_decreasing();
  const TypeDistribution inc = TypeDistribution::linear_increasing();
  const double base = uni.jewitt_gap(0.5, 0.0, 1.0);
  double prev_dec = -1e300;
  double prev_inc = 1e300;
  for (int i = 1; i <= 50; ++i) {
    const double cut = static_cast<double>(i) / 51.0;
    if (std::abs(uni.jewitt_gap(cut, 0.0, 1.0) - base) > 1e-10) {
      ok = false;
      detail << "uniform gap not constant at cut " << cut << "; ";
    }
    const double zd = dec.jewitt_gap(cut, 0.0, 1.0);
    const double zi = inc.jewitt_gap(cut, 0.0, 1.0);
    if (zd < prev_dec - 1e-12) {
      ok = false;
      detail << "decreasing-density gap fell at cut " << cut << "; ";
    }
    if (zi > prev_inc + 1e-12) {
      ok = false;
      detail << "increasing-density gap rose at cut " << cut << "; ";
    }
    prev_dec = zd;
    prev_inc = zi;
  }

  // Central-difference signs of the reputational-gap derivatives on a grid
  // of interior profiles, four densities.
  const TypeDistribution pw =
      TypeDistribution::piecewise_linear({0.0, 0.5, 1.0}, {1.5, 1.0, 0.5});
  const std::vector<const TypeDistribution*> dists = {&uni, &dec, &inc, &pw};
  const double h = 1e-6;
  int profiles = 0;
  for (const TypeDistribution* dist : dists) {
    for (int a = 1; a <= 5; ++a) {
      for (int b = 1; b <= 5; ++b) {
        const double cut = 0.15 + 0.7 * static_cast<double>(a) / 6.0;
        const double low = cut * static_cast<double>(b) / 6.0;
        const double high = cut + (1.0 - cut) * static_cast<double>(b) / 6.0;
        if (low < 0.02 || high > 0.98) continue;
        profiles += 1;

        auto phi_high = [&](double c) {
          return dist->truncated_mean(high, 1.0) -
                 dist->truncated_mean(c, high);
        };
        auto phi_low = [&](double c) {
          return dist->truncated_mean(low, c) - dist->truncated_mean(0.0, low);
        };
        const double d_high = (phi_high(cut + h) - phi_high(cut - h)) / (2 * h);
        const double d_low = (phi_low(cut + h) - phi_low(cut - h)) / (2 * h);
        if (!(d_high < 0.0) || !(d_low > 0.0)) {
          ok = false;
          detail << "group-cutoff gap derivative sign failed at (" << low
                 << "," << cut << "," << high << "); ";
        }
        // Conditional means rise in either endpoint.
        const double mean_up = (dist->truncated_mean(cut, high + h) -
                                dist->truncated_mean(cut, high - h)) /
                               (2 * h);
        const double mean_dn = (dist->truncated_mean(low + h, cut) -
                                dist->truncated_mean(low - h, cut)) /
                               (2 * h);
        if (!(mean_up > 0.0) || !(mean_dn > 0.0)) {
          ok = false;
          detail << "truncated-mean monotonicity failed at (" << low << ","
                 << cut << "," << high << "); ";
        }
      }
    }
  }
  r.seconds = seconds_since(start);
  detail << profiles << " interior profiles checked";
  r.detail = detail.str();
  r.pass = ok && profiles >= 100;
  return r;
}

CriterionResult simulator_consistency() {
  CriterionResult r{6, "best-response dynamics agree with the solver", false,
                    "", 0.0};
  const auto start = Clock::now();
  const Scenario s1 = baseline_scenario();
  const ModelSpec spec = build_model(s1);
  const SolveResult solved = solve_equilibrium(spec, s1.solver);
  if (solved.equilibria.empty()) {
    r.detail = "no equilibrium to compare";
    return r;
  }
  const CutoffProfile& star = solved.equilibria.front().profile;
  const int n = 10001;
  const double cell = 1.0 / static_cast<double>(n);

  // Start two grid cells away from the solved cutoffs.
  CutoffProfile start_profile = star;
  start_profile.action_cutoff_low -= 2.0 * cell;
  start_profile.group_cutoff += 2.0 * cell;
  start_profile.action_cutoff_high -= 2.0 * cell;
  Population pop = population_from_profile(spec, n, start_profile);
  SimOptions options = s1.simulate;
  options.n = n;
  const RestPoint rest = run_dynamics(spec, options, pop);
  r.seconds = seconds_since(start);

  std::ostringstream detail;
  if (!rest.converged || !rest.implied) {
    detail << "dynamics did not converge to a cutoff shape ("
           << rest.iterations << " iterations)";
    r.detail = detail.str();
    return r;
  }
  const double dev = std::max(
      {std::abs(rest.implied->action_cutoff_low - star.action_cutoff_low),
       std::abs(rest.implied->group_cutoff - star.group_cutoff),
       std::abs(rest.implied->action_cutoff_high - star.action_cutoff_high)});
  detail << "max cutoff deviation " << dev << " (allowed " << 2.0 * cell
         << "), " << rest.iterations << " iterations, runtime " << r.seconds
         << "s";
  r.detail = detail.str();
  r.pass = dev <= 2.0 * cell && r.seconds < 10.0;
  return r;
}

CriterionResult total_effort_spillover() {
  CriterionResult r{7, "lowering the high-group effort cost raises total "
                       "effort without losing anyone",
                    false, "", 0.0};
  const auto start = Clock::now();
  const Scenario s1 = baseline_scenario();
  const ModelSpec spec = build_model(s1);
  const SolveResult solved = solve_equilibrium(spec, s1.solver);
  std::ostringstream detail;
  if (solved.equilibria.empty()) {
    r.detail = "no base equilibrium";
    return r;
  }
  const Equilibrium& base = solved.equilibria.front();
  const std::array<double, 3> responses =
      total_effort_responses(spec, base, ift_derivatives(spec, base));

  const double h = 1e-3;
  auto solve_at_alpha = [&](double alpha) {
    Scenario moved = s1;
    moved.policy.alpha = alpha;
    const ModelSpec shifted_spec = build_model(moved);
    const SolveResult res = solve_equilibrium(shifted_spec, moved.solver);
    if (res.equilibria.size() != 1) {
      throw NonConvergenceError("expected one equilibrium in spillover check",
                                {});
    }
    return res.equilibria.front();
  };
  const Equilibrium up = solve_at_alpha(h);
  const Equilibrium dn = solve_at_alpha(-h);
  const double fd_response =
      (up.total_effort - dn.total_effort) / (2.0 * h);

  const CutoffProfile& b = base.profile;
  const CutoffProfile& d = dn.profile;  // alpha decreased
  const bool direction_ok = d.group_cutoff > b.group_cutoff &&
                            d.action_cutoff_high < b.action_cutoff_high &&
                            d.action_cutoff_low < b.action_cutoff_low;
  // Strict containment of the effort-taker set [low, group] U [high, 1].
  const bool containment_ok = d.action_cutoff_low < b.action_cutoff_low &&
                              d.group_cutoff > b.group_cutoff &&
                              d.action_cutoff_high < b.action_cutoff_high &&
                              d.group_cutoff < d.action_cutoff_high;
  r.seconds = seconds_since(start);
  detail << "dE/dalpha ift " << responses[0] << ", sweep " << fd_response
         << ", direction " << (direction_ok ? "ok" : "bad") << ", containment "
         << (containment_ok ? "ok" : "bad");
  r.detail = detail.str();
  r.pass = responses[0] < 0.0 && fd_response < 0.0 && direction_ok &&
           containment_ok;
  return r;
}

CriterionResult identity_residuals() {
  CriterionResult r{8, "group-indifference identity at solved equilibria",
                    false, "", 0.0};
  const auto start = Clock::now();
  const CorpusResults& corpus = corpus_results();
  std::ostringstream detail;
  bool baseline_ok = false;
  double worst_reduced = 0.0;
  double worst_direct = 0.0;
  int checked = 0;
  for (const SolvedEntry& solved : corpus.solved) {
    for (const Equilibrium& eq : solved.stable_interior) {
      checked += 1;
      worst_reduced =
          std::max(worst_reduced, std::abs(eq.group_identity_residual));
      worst_direct =
          std::max(worst_direct, std::abs(eq.group_identity_residual_direct));
      if (solved.entry.name == "uniform/v1") {
        baseline_ok = std::abs(eq.group_identity_residual) <= 1e-8;
      }
    }
  }
  r.seconds = seconds_since(start);
  detail << checked
         << " equilibria; worst reduced-form residual " << worst_reduced
         << "; direct-form residual (diagnostic, logged only) up to "
         << worst_direct;
  r.detail = detail.str();
  r.pass = baseline_ok;
  return r;
}

CriterionResult determinism() {
  CriterionResult r{9, "byte-identical solve and sweep outputs on presets",
                    false, "", 0.0};
  const auto start = Clock::now();
  std::ostringstream detail;
  bool ok = true;

  // Per-process directory so concurrent suites cannot collide.
  const fs::path dir = fs::temp_directory_path() /
                       ("statusgame-acceptance-io-" +
                        std::to_string(static_cast<long>(getpid())));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  for (const std::string& preset : preset_names()) {
    std::array<std::string, 2> payloads;
    for (int round = 0; round < 2; ++round) {
      cli::SolveArgs args;
      args.preset = preset;
      args.json = true;
      args.csv = true;
      args.out_path =
          (dir / (preset + "-r" + std::to_string(round))).string();
      std::ostringstream sink;
      cli::cmd_solve(args, sink, sink);
      payloads[round] = slurp(args.out_path + ".csv") + "\x1e" +
                        slurp(args.out_path + ".json");
    }
    if (payloads[0] != payloads[1] || payloads[0].empty()) {
      ok = false;
      detail << "solve outputs differ for preset " << preset << "; ";
    }
  }

  {
    std::array<std::string, 2> payloads;
    for (int round = 0; round < 2; ++round) {
      cli::SweepArgs args;
      args.preset = "s1";
      args.param = "alpha";
      args.from = 0.0;
      args.to = 0.05;
      args.steps = 11;
      args.out_path = (dir / ("sweep-r" + std::to_string(round))).string();
      std::ostringstream sink;
      cli::cmd_sweep(args, sink, sink);
      payloads[round] = slurp(args.out_path + ".csv");
    }
    if (payloads[0] != payloads[1] || payloads[0].empty()) {
      ok = false;
      detail << "sweep outputs differ; ";
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);

  r.seconds = seconds_since(start);
  detail << preset_names().size() << " presets solved twice, one sweep twice";
  r.detail = detail.str();
  r.pass = ok;
  return r;
}

}  // namespace

Scenario baseline_scenario() {
  return make_scenario("s1-baseline", DensityFamily::Uniform, 1.0, 0.5, 0.4,
                       0.5, 0.1, 0.0);
}

std::vector<CorpusEntry> regression_corpus() {
  struct Variant {
    const char* name;
    double delta_h, delta_l, mu_i, mu_o, kappa, kappa0;
  };
  const std::vector<Variant> variants = {
      {"v1", 1.0, 0.5, 0.4, 0.5, 0.1, 0.0},
      {"v2", 1.2, 0.6, 0.4, 0.5, 0.1, 0.0},
      {"v3", 1.0, 0.5, 0.3, 0.45, 0.08, 0.0},
      {"v4", 0.9, 0.45, 0.35, 0.55, 0.12, 0.01},
      {"v5", 1.1, 0.4, 0.45, 0.5, 0.05, 0.02},
      {"v6", 1.0, 0.5, 0.5, 0.6, 0.15, 0.0},
  };
  struct Family {
    const char* name;
    DensityFamily family;
    std::vector<double> positions;
    std::vector<double> values;
  };
  const std::vector<Family> families = {
      {"uniform", DensityFamily::Uniform, {}, {}},
      {"linear-decreasing", DensityFamily::LinearDecreasing, {}, {}},
      {"linear-increasing", DensityFamily::LinearIncreasing, {}, {}},
      {"pw-decreasing",
       DensityFamily::PiecewiseLinear,
       {0.0, 0.5, 1.0},
       {1.5, 1.0, 0.5}},
      {"pw-hump",
       DensityFamily::PiecewiseLinear,
       {0.0, 0.5, 1.0},
       {0.5, 1.5, 0.5}},
  };
  std::vector<CorpusEntry> corpus;
  for (const Family& fam : families) {
    for (const Variant& v : variants) {
      Scenario s = make_scenario(std::string(fam.name) + "/" + v.name,
                                 fam.family, v.delta_h, v.delta_l, v.mu_i,
                                 v.mu_o, v.kappa, v.kappa0);
      if (fam.family == DensityFamily::PiecewiseLinear) {
        s.positions = fam.positions;
        s.values = fam.values;
      }
      corpus.push_back({s.name, std::move(s)});
    }
  }
  return corpus;
}

std::vector<CriterionResult> run_acceptance_suite() {
  std::vector<CriterionResult> results;
  results.push_back(closed_form_oracle());
  results.push_back(spillover_sign_suite());
  results.push_back(derivative_oracle_agreement());
  results.push_back(jacobian_structure());
  results.push_back(monotonicity_suite());
  results.push_back(simulator_consistency());
  results.push_back(total_effort_spillover());
  results.push_back(identity_residuals());
  results.push_back(determinism());
  return results;
}

}  // namespace statusgame
