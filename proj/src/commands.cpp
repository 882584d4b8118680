#include "statusgame/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "statusgame/acceptance.hpp"
#include "statusgame/scenario.hpp"
#include "statusgame/statics.hpp"

namespace statusgame::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scenario load_scenario(const CommonArgs& args) {
  if (!args.preset.empty()) {
    return parse_scenario(preset_text(args.preset),
                          "preset:" + args.preset);
  }
  if (args.config_path.empty()) {
    throw ConfigParseError("<args>", 0, 0,
                           "either a config path or --preset is required");
  }
  return load_scenario_file(args.config_path);
}

SolverOptions effective_solver_options(const Scenario& s,
                                       const CommonArgs& args) {
  SolverOptions opts = s.solver;
  if (args.tol) opts.residual_tol = *args.tol;
  return opts;
}

// Runs validate and prints any violations; true when the model is clean.
bool validate_or_report(const ModelSpec& spec, std::ostream& out) {
  const ValidationReport report = validate(spec);
  for (const auto& v : report.violations) {
    out << "violation: " << v.assumption;
    if (std::isfinite(v.theta)) out << " at theta=" << v.theta;
    out << " (" << v.detail << ")\n";
  }
  return report.ok();
}

std::string base_path(const std::string& out_path) {
  std::string base = out_path;
  for (const char* ext : {".csv", ".json"}) {
    const std::size_t n = std::string(ext).size();
    if (base.size() > n && base.compare(base.size() - n, n, ext) == 0) {
      base.resize(base.size() - n);
    }
  }
  return base;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

const char* kSegmentNames[4] = {"low_idle", "low_effort", "high_idle",
                                "high_effort"};

std::string solve_csv(const SolveResult& result) {
  std::ostringstream os;
  os << "# schema: statusgame/solve/v1\n";
  os << "index,class,stability,cutoff_low_action,cutoff_group,"
        "cutoff_high_action,residual_action_high,residual_action_low,"
        "residual_group,residual_max,jacobian_det,stab_action_high,"
        "stab_action_low,stab_group";
  for (const char* name : kSegmentNames) {
    os << ",mass_" << name << ",mean_" << name;
  }
  os << ",total_effort,mean_low_group,mean_high_group,mean_population,"
        "group_identity_residual,group_identity_residual_direct,"
        "value_gap_offset\n";
  int index = 0;
  for (const Equilibrium& eq : result.equilibria) {
    os << index++ << ',' << to_string(eq.profile_class) << ','
       << to_string(eq.stability.verdict) << ','
       << fmt17(eq.profile.action_cutoff_low) << ','
       << fmt17(eq.profile.group_cutoff) << ','
       << fmt17(eq.profile.action_cutoff_high) << ','
       << fmt17(eq.residual.action_high) << ','
       << fmt17(eq.residual.action_low) << ',' << fmt17(eq.residual.group)
       << ',' << fmt17(eq.residual.max_norm()) << ','
       << fmt17(eq.jacobian_det) << ',' << fmt17(eq.stability.action_high)
       << ',' << fmt17(eq.stability.action_low) << ','
       << fmt17(eq.stability.group);
    for (const SegmentStat& seg : eq.segments) {
      os << ',' << fmt17(seg.mass) << ',' << fmt17(seg.mean);
    }
    os << ',' << fmt17(eq.total_effort) << ',' << fmt17(eq.mean_low_group)
       << ',' << fmt17(eq.mean_high_group) << ','
       << fmt17(eq.mean_population) << ','
       << fmt17(eq.group_identity_residual) << ','
       << fmt17(eq.group_identity_residual_direct) << ','
       << fmt17(eq.value_gap_offset) << '\n';
  }
  return os.str();
}

ordered_json equilibrium_json(const Equilibrium& eq) {
  ordered_json j;
  j["class"] = to_string(eq.profile_class);
  j["stability"] = to_string(eq.stability.verdict);
  j["cutoffs"] = {{"low_action", eq.profile.action_cutoff_low},
                  {"group", eq.profile.group_cutoff},
                  {"high_action", eq.profile.action_cutoff_high}};
  j["residual"] = {{"action_high", eq.residual.action_high},
                   {"action_low", eq.residual.action_low},
                   {"group", eq.residual.group},
                   {"max", eq.residual.max_norm()}};
  j["stability_slopes"] = {{"action_high", eq.stability.action_high},
                           {"action_low", eq.stability.action_low},
                           {"group", eq.stability.group}};
  j["jacobian_det"] = eq.jacobian_det;
  ordered_json segments;
  for (int i = 0; i < 4; ++i) {
    segments[kSegmentNames[i]] = {{"mass", eq.segments[i].mass},
                                  {"mean", eq.segments[i].mean}};
  }
  j["segments"] = segments;
  j["total_effort"] = eq.total_effort;
  j["group_means"] = {{"low", eq.mean_low_group},
                      {"high", eq.mean_high_group},
                      {"population", eq.mean_population}};
  j["group_identity_residual"] = eq.group_identity_residual;
  j["group_identity_residual_direct"] = eq.group_identity_residual_direct;
  j["value_gap_offset"] = eq.value_gap_offset;
  return j;
}

std::string solve_json(const std::string& name, const SolveResult& result) {
  ordered_json j;
  j["schema"] = "statusgame/solve/v1";
  j["scenario"] = name;
  j["equilibria"] = ordered_json::array();
  for (const Equilibrium& eq : result.equilibria) {
    j["equilibria"].push_back(equilibrium_json(eq));
  }
  if (result.no_interior()) {
    j["boundary_summary"] = result.boundary_summary;
    j["notes"] = result.notes;
  }
  return j.dump(2) + "\n";
}

void print_equilibrium(std::ostream& out, const Equilibrium& eq, int index) {
  out << "equilibrium " << index << " [" << to_string(eq.profile_class)
      << ", " << to_string(eq.stability.verdict) << "]\n";
  out << "  cutoffs: low=" << fmt17(eq.profile.action_cutoff_low)
      << " group=" << fmt17(eq.profile.group_cutoff)
      << " high=" << fmt17(eq.profile.action_cutoff_high) << "\n";
  out << "  residual max-norm: " << fmt17(eq.residual.max_norm())
      << "  jacobian det: " << fmt17(eq.jacobian_det) << "\n";
  out << "  segments (mass@mean):";
  for (int i = 0; i < 4; ++i) {
    out << ' ' << kSegmentNames[i] << '=' << fmt17(eq.segments[i].mass) << '@'
        << fmt17(eq.segments[i].mean);
  }
  out << "\n  total effort: " << fmt17(eq.total_effort)
      << "  group means: low=" << fmt17(eq.mean_low_group)
      << " high=" << fmt17(eq.mean_high_group) << "\n";
}

constexpr const char* kShifterNames[3] = {"alpha", "beta", "gamma"};
constexpr const char* kCutoffRows[3] = {"group", "high_action", "low_action"};

std::string statics_json(const std::string& name, const StaticsReport& report,
                         const Equilibrium& eq) {
  ordered_json j;
  j["schema"] = "statusgame/statics/v1";
  j["scenario"] = name;
  j["equilibrium"] = equilibrium_json(eq);
  j["jacobian_det"] = report.jacobian_det;
  ordered_json ift, fd, signs;
  for (int row = 0; row < 3; ++row) {
    ordered_json ift_row, fd_row;
    std::string sign_row;
    for (int col = 0; col < 3; ++col) {
      ift_row[kShifterNames[col]] = report.ift[row][col];
      if (std::isfinite(report.fd[row][col])) {
        fd_row[kShifterNames[col]] = report.fd[row][col];
      } else {
        fd_row[kShifterNames[col]] = nullptr;
      }
      sign_row += to_char(report.sign_table[row][col]);
    }
    ift[kCutoffRows[row]] = ift_row;
    fd[kCutoffRows[row]] = fd_row;
    signs[kCutoffRows[row]] = sign_row;
  }
  j["ift"] = ift;
  j["fd"] = fd;
  j["fd_status"] = {{"alpha", report.fd_status[0]},
                    {"beta", report.fd_status[1]},
                    {"gamma", report.fd_status[2]}};
  j["sign_table"] = signs;
  j["column_sign_ok"] = {{"alpha", report.column_sign_ok[0]},
                         {"beta", report.column_sign_ok[1]},
                         {"gamma", report.column_sign_ok[2]}};
  j["total_effort_response"] = {{"alpha", report.total_effort_response[0]},
                                {"beta", report.total_effort_response[1]},
                                {"gamma", report.total_effort_response[2]}};
  return j.dump(2) + "\n";
}

void print_statics(std::ostream& out, const StaticsReport& report) {
  out << "cutoff derivatives (rows: cutoff, columns: shifter)\n";
  out << std::left;
  out << "  " << std::setw(12) << "" << std::setw(26) << "alpha"
      << std::setw(26) << "beta" << std::setw(26) << "gamma" << "\n";
  for (int row = 0; row < 3; ++row) {
    out << "  " << std::setw(12) << kCutoffRows[row];
    for (int col = 0; col < 3; ++col) {
      std::ostringstream cell;
      cell << report.ift[row][col];
      if (std::isfinite(report.fd[row][col])) {
        cell << " (fd " << report.fd[row][col] << ")";
      } else {
        cell << " (fd n/a)";
      }
      out << std::setw(26) << cell.str();
    }
    out << "\n";
  }
  out << "  sign table:";
  for (int row = 0; row < 3; ++row) {
    out << ' ' << kCutoffRows[row] << '=';
    for (int col = 0; col < 3; ++col) out << to_char(report.sign_table[row][col]);
  }
  out << "\n  spillover sign pattern: alpha "
      << (report.column_sign_ok[0] ? "PASS" : "FAIL") << ", beta "
      << (report.column_sign_ok[1] ? "PASS" : "FAIL") << ", gamma "
      << (report.column_sign_ok[2] ? "PASS" : "FAIL") << "\n";
  out << "  total effort response: d/dalpha="
      << fmt17(report.total_effort_response[0])
      << " d/dbeta=" << fmt17(report.total_effort_response[1])
      << " d/dgamma=" << fmt17(report.total_effort_response[2]) << "\n";
  for (int col = 0; col < 3; ++col) {
    if (report.fd_status[col] != "ok") {
      out << "  fd " << kShifterNames[col] << ": " << report.fd_status[col]
          << "\n";
    }
  }
}

const Equilibrium* first_stable_interior(const SolveResult& result) {
  for (const Equilibrium& eq : result.equilibria) {
    if (eq.profile_class == ProfileClass::Interior &&
        eq.stability.verdict == Stability::Stable) {
      return &eq;
    }
  }
  return nullptr;
}

}  // namespace

int cmd_validate(const CommonArgs& args, std::ostream& out,
                 std::ostream& err) {
  try {
    const Scenario scenario = load_scenario(args);
    const ModelSpec spec = build_model(scenario);
    if (validate_or_report(spec, out)) {
      out << "ok: all model assumptions hold\n";
      return 0;
    }
    return 1;
  } catch (const ConfigParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return 2;
  }
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Scenario scenario = load_scenario(args);
    const ModelSpec spec = build_model(scenario);
    if (!validate_or_report(spec, out)) return 1;
    const SolverOptions opts = effective_solver_options(scenario, args);
    const SolveResult result = solve_equilibrium(spec, opts);

    int index = 0;
    for (const Equilibrium& eq : result.equilibria) {
      print_equilibrium(out, eq, index++);
    }
    if (result.no_interior()) {
      out << "no interior equilibrium: " << result.boundary_summary << "\n";
      for (const std::string& note : result.notes) out << "  " << note << "\n";
    }

    if (!args.out_path.empty()) {
      const std::string base = base_path(args.out_path);
      const bool want_csv = args.csv || !args.json;
      if (want_csv) write_file(base + ".csv", solve_csv(result));
      if (args.json) {
        write_file(base + ".json", solve_json(scenario.name, result));
      }
    }
    return first_stable_interior(result) ? 0 : 3;
  } catch (const ConfigParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    err << "solver did not converge: " << e.what() << "\n";
    for (const std::string& step : e.trace) err << "  " << step << "\n";
    return 4;
  }
}

int cmd_statics(const StaticsArgs& args, std::ostream& out,
                std::ostream& err) {
  try {
    const Scenario scenario = load_scenario(args);
    const ModelSpec spec = build_model(scenario);
    if (!validate_or_report(spec, out)) return 1;
    const SolverOptions opts = effective_solver_options(scenario, args);
    const SolveResult result = solve_equilibrium(spec, opts);
    const Equilibrium* eq = first_stable_interior(result);
    if (eq == nullptr) {
      out << "no stable interior equilibrium";
      if (result.no_interior()) out << ": " << result.boundary_summary;
      out << "\n";
      return 3;
    }
    print_equilibrium(out, *eq, 0);
    const StaticsReport report = comparative_statics(spec, *eq, 1e-4, opts);
    print_statics(out, report);
    if (!args.out_path.empty()) {
      write_file(base_path(args.out_path) + ".json",
                 statics_json(scenario.name, report, *eq));
    }
    return 0;
  } catch (const ConfigParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    err << "solver did not converge: " << e.what() << "\n";
    return 4;
  }
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Scenario scenario = load_scenario(args);
    if (args.steps < 2) {
      throw PreconditionError("sweep requires --steps >= 2");
    }
    if (!(args.from < args.to)) {
      throw PreconditionError("sweep requires --from < --to");
    }
    {
      // Rejects unknown parameter names up front.
      Scenario probe = scenario;
      apply_parameter(probe, args.param, args.from);
    }

    std::ostringstream csv;
    csv << "# schema: statusgame/sweep/v1\n";
    csv << "param,value,status,cutoff_low_action,cutoff_group,"
           "cutoff_high_action,mass_low_idle,mass_low_effort,mass_high_idle,"
           "mass_high_effort,total_effort,stability,residual_max\n";

    int ok_rows = 0;
    std::optional<CutoffProfile> carry;
    for (int k = 0; k < args.steps; ++k) {
      const double value =
          args.from + (args.to - args.from) * static_cast<double>(k) /
                          static_cast<double>(args.steps - 1);
      Scenario step_scenario = scenario;
      apply_parameter(step_scenario, args.param, value);
      const ModelSpec spec = build_model(step_scenario);
      const SolverOptions opts = effective_solver_options(step_scenario, args);

      std::string status = "ok";
      const Equilibrium* picked = nullptr;
      SolveResult result;
      Equilibrium continued;
      try {
        bool have_continued = false;
        if (carry) {
          // Continuation: track the branch found at the previous value.
          try {
            const CutoffProfile refined = refine_profile(spec, *carry, opts);
            if (classify_profile(refined) == ProfileClass::Interior &&
                equilibrium_residual(spec, refined).max_norm() <=
                    opts.residual_tol) {
              continued = summarize_equilibrium(spec, refined);
              have_continued = true;
            }
          } catch (const NonConvergenceError&) {
          }
        }
        if (have_continued) {
          picked = &continued;
        } else {
          result = solve_equilibrium(spec, opts);
          picked = first_stable_interior(result);
          if (picked == nullptr && !result.equilibria.empty()) {
            picked = &result.equilibria.front();
          }
          if (picked == nullptr) status = "no-interior";
        }
      } catch (const NonConvergenceError&) {
        status = "non-convergence";
      }

      csv << args.param << ',' << fmt17(value) << ',' << status;
      if (picked != nullptr) {
        carry = picked->profile;
        ok_rows += 1;
        csv << ',' << fmt17(picked->profile.action_cutoff_low) << ','
            << fmt17(picked->profile.group_cutoff) << ','
            << fmt17(picked->profile.action_cutoff_high) << ','
            << fmt17(picked->segments[0].mass) << ','
            << fmt17(picked->segments[1].mass) << ','
            << fmt17(picked->segments[2].mass) << ','
            << fmt17(picked->segments[3].mass) << ','
            << fmt17(picked->total_effort) << ','
            << to_string(picked->stability.verdict) << ','
            << fmt17(picked->residual.max_norm()) << '\n';
      } else {
        carry.reset();
        csv << ",,,,,,,,,,\n";
      }
    }

    if (!args.out_path.empty()) {
      write_file(base_path(args.out_path) + ".csv", csv.str());
    } else {
      out << csv.str();
    }
    out << "sweep: " << ok_rows << "/" << args.steps << " rows solved\n";
    return ok_rows * 2 >= args.steps ? 0 : 3;
  } catch (const ConfigParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "bad arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return 2;
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out,
                 std::ostream& err) {
  try {
    const Scenario scenario = load_scenario(args);
    const ModelSpec spec = build_model(scenario);
    if (!validate_or_report(spec, out)) return 1;
    const SolverOptions opts = effective_solver_options(scenario, args);
    const SolveResult solved = solve_equilibrium(spec, opts);
    const Equilibrium* eq = first_stable_interior(solved);
    if (eq == nullptr) {
      out << "no stable interior equilibrium to compare against\n";
      return 3;
    }

    Population initial = make_population(spec, scenario.simulate.n);
    switch (scenario.sim_start) {
      case SimStart::Equilibrium:
        assign_from_profile(initial, eq->profile);
        break;
      case SimStart::AllLow:
        break;  // all (low, idle) is the default assignment
      case SimStart::AllHigh:
        for (auto& g : initial.group) g = 1;
        break;
    }
    const RestPoint rest = run_dynamics(spec, scenario.simulate, initial);

    std::ostringstream trace;
    trace << "# schema: statusgame/simulate-trace/v1\n";
    trace << "iteration,flagged,implied_low,implied_group,implied_high,"
             "cutoff_shaped\n";
    for (const TraceRow& row : rest.trace) {
      trace << row.iteration << ',' << row.flagged << ','
            << fmt17(row.implied_low) << ',' << fmt17(row.implied_group) << ','
            << fmt17(row.implied_high) << ','
            << (row.cutoff_shaped ? 1 : 0) << '\n';
    }

    ordered_json j;
    j["schema"] = "statusgame/simulate/v1";
    j["scenario"] = scenario.name;
    j["n"] = scenario.simulate.n;
    j["damping"] = scenario.simulate.damping;
    j["empty_belief"] = to_string(scenario.simulate.empty_belief);
    j["group_rule"] = to_string(scenario.simulate.group_rule);
    j["start"] = to_string(scenario.sim_start);
    j["converged"] = rest.converged;
    j["iterations"] = rest.iterations;
    j["cutoff_shaped"] = rest.cutoff_shaped;
    j["solver_cutoffs"] = {{"low_action", eq->profile.action_cutoff_low},
                           {"group", eq->profile.group_cutoff},
                           {"high_action", eq->profile.action_cutoff_high}};
    if (rest.implied) {
      j["implied_cutoffs"] = {
          {"low_action", rest.implied->action_cutoff_low},
          {"group", rest.implied->group_cutoff},
          {"high_action", rest.implied->action_cutoff_high}};
      j["abs_diff"] = {
          {"low_action", std::abs(rest.implied->action_cutoff_low -
                                  eq->profile.action_cutoff_low)},
          {"group",
           std::abs(rest.implied->group_cutoff - eq->profile.group_cutoff)},
          {"high_action", std::abs(rest.implied->action_cutoff_high -
                                   eq->profile.action_cutoff_high)}};
    }

    out << "simulate: " << (rest.converged ? "converged" : "not converged")
        << " after " << rest.iterations << " iterations, "
        << (rest.cutoff_shaped ? "cutoff shaped" : "NOT cutoff shaped")
        << "\n";
    if (rest.implied) {
      out << "  implied cutoffs: low=" << fmt17(rest.implied->action_cutoff_low)
          << " group=" << fmt17(rest.implied->group_cutoff)
          << " high=" << fmt17(rest.implied->action_cutoff_high) << "\n";
    }

    if (!args.out_path.empty()) {
      const std::string base = base_path(args.out_path);
      write_file(base + "_trace.csv", trace.str());
      write_file(base + ".json", j.dump(2) + "\n");
      if (!rest.cutoff_shaped) {
        std::ostringstream dump;
        dump << "# schema: statusgame/simulate-assignment/v1\n";
        dump << "theta,weight,group,action\n";
        for (std::size_t i = 0; i < rest.population.size(); ++i) {
          dump << fmt17(rest.population.types[i]) << ','
               << fmt17(rest.population.weights[i]) << ','
               << int(rest.population.group[i]) << ','
               << int(rest.population.action[i]) << '\n';
        }
        write_file(base + "_assignment.csv", dump.str());
      }
    }
    return rest.cutoff_shaped ? 0 : 5;
  } catch (const ConfigParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    err << "solver did not converge: " << e.what() << "\n";
    return 4;
  }
}

int cmd_check(std::ostream& out, std::ostream& err) {
  const std::vector<CriterionResult> results = run_acceptance_suite();
  bool all_pass = true;
  for (const CriterionResult& r : results) {
    out << "criterion " << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] "
        << r.name << " (" << std::fixed << std::setprecision(2) << r.seconds
        << "s)";
    out.unsetf(std::ios_base::floatfield);
    if (!r.detail.empty()) out << " - " << r.detail;
    out << "\n";
    all_pass = all_pass && r.pass;
  }
  if (!all_pass) {
    err << "acceptance suite failed\n";
    return 1;
  }
  out << "acceptance suite passed\n";
  return 0;
}

}  // namespace statusgame::cli
