#include "statusgame/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace statusgame {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt_double(v[i]);
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;
};

using EntryMap = std::map<std::string, Entry>;  // "section.key" -> entry

const std::map<std::string, std::set<std::string>>& key_table() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"scenario", {"name"}},
      {"distribution", {"family", "positions", "values", "samples"}},
      {"costs",
       {"action_family", "delta_h", "delta_l", "action_grid",
        "effort_high_cost", "idle_high_cost", "effort_low_cost",
        "idle_low_cost", "group_family", "kappa", "kappa0", "group_grid",
        "high_group_cost", "low_group_cost"}},
      {"benefits", {"effort_high", "idle_high", "effort_low", "idle_low"}},
      {"sensitivities",
       {"mu_inside", "mu_outside", "mu_inside_high", "mu_inside_low"}},
      {"policy", {"alpha", "beta", "gamma"}},
      {"solver",
       {"residual_tol", "newton_tol", "max_newton_iterations", "scan_points",
        "action_scan_points", "bisection_tol", "multistart"}},
      {"simulate",
       {"n", "damping", "max_iters", "empty_belief", "group_rule", "start"}},
  };
  return table;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

class Reader {
 public:
  Reader(EntryMap entries, std::string source, std::map<std::string, int> lines)
      : entries_(std::move(entries)),
        source_(std::move(source)),
        section_lines_(std::move(lines)) {}

  bool has(const std::string& section, const std::string& key) const {
    return entries_.count(section + "." + key) > 0;
  }

  const Entry& get(const std::string& section, const std::string& key) const {
    const auto it = entries_.find(section + "." + key);
    if (it == entries_.end()) {
      const auto sec = section_lines_.find(section);
      const int line = sec == section_lines_.end() ? 1 : sec->second;
      throw ConfigParseError(source_, line, 1,
                             "missing required key '" + key +
                                 "' in section [" + section + "]");
    }
    used_.insert(it->first);
    return it->second;
  }

  double number(const std::string& section, const std::string& key) const {
    const Entry& e = get(section, key);
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0') {
      throw ConfigParseError(source_, e.line, e.column,
                             "expected a number for '" + key + "', got '" +
                                 e.value + "'");
    }
    return v;
  }

  int integer(const std::string& section, const std::string& key) const {
    const Entry& e = get(section, key);
    char* end = nullptr;
    const long v = std::strtol(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0') {
      throw ConfigParseError(source_, e.line, e.column,
                             "expected an integer for '" + key + "', got '" +
                                 e.value + "'");
    }
    return static_cast<int>(v);
  }

  std::vector<double> list(const std::string& section,
                           const std::string& key) const {
    const Entry& e = get(section, key);
    std::vector<double> out;
    std::string token;
    std::istringstream is(e.value);
    while (is >> token) {
      if (!token.empty() && token.back() == ',') token.pop_back();
      if (token.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') {
        throw ConfigParseError(source_, e.line, e.column,
                               "expected a number list for '" + key +
                                   "', got token '" + token + "'");
      }
      out.push_back(v);
    }
    if (out.empty()) {
      throw ConfigParseError(source_, e.line, e.column,
                             "empty number list for '" + key + "'");
    }
    return out;
  }

  std::string word(const std::string& section, const std::string& key) const {
    return get(section, key).value;
  }

  void fail(const std::string& section, const std::string& key,
            const std::string& message) const {
    const Entry& e = get(section, key);
    throw ConfigParseError(source_, e.line, e.column, message);
  }

  // Keys present in the file but never consumed given the chosen families.
  void reject_leftovers() const {
    for (const auto& [full, entry] : entries_) {
      if (used_.count(full)) continue;
      throw ConfigParseError(source_, entry.line, entry.column,
                             "key '" + full +
                                 "' is not applicable to this configuration");
    }
  }

 private:
  EntryMap entries_;
  std::string source_;
  std::map<std::string, int> section_lines_;
  mutable std::set<std::string> used_;
};

DensityFamily family_from_word(const Reader& r, const std::string& word) {
  if (word == "uniform") return DensityFamily::Uniform;
  if (word == "linear-decreasing") return DensityFamily::LinearDecreasing;
  if (word == "linear-increasing") return DensityFamily::LinearIncreasing;
  if (word == "piecewise-linear") return DensityFamily::PiecewiseLinear;
  if (word == "tabulated") return DensityFamily::Tabulated;
  r.fail("distribution", "family", "unknown density family '" + word + "'");
  return DensityFamily::Uniform;  // unreachable
}

}  // namespace

std::string to_string(SimStart s) {
  switch (s) {
    case SimStart::Equilibrium: return "equilibrium";
    case SimStart::AllLow: return "all-low";
    case SimStart::AllHigh: return "all-high";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& text,
                        const std::string& source_name) {
  EntryMap entries;
  std::map<std::string, int> section_lines;
  std::string section;
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const int indent =
        static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw ConfigParseError(source_name, line_no, indent,
                               "unterminated section header");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (!key_table().count(section)) {
        throw ConfigParseError(source_name, line_no, indent,
                               "unknown section [" + section + "]");
      }
      section_lines.emplace(section, line_no);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigParseError(source_name, line_no, indent,
                             "expected 'key = value'");
    }
    if (section.empty()) {
      throw ConfigParseError(source_name, line_no, indent,
                             "key outside any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigParseError(source_name, line_no, indent, "empty key");
    }
    const auto& allowed = key_table().at(section);
    if (!allowed.count(key)) {
      throw ConfigParseError(source_name, line_no, indent,
                             "unknown key '" + key + "' in section [" +
                                 section + "]");
    }
    const std::string full = section + "." + key;
    const int value_col = static_cast<int>(eq) + 2;
    if (!entries.emplace(full, Entry{value, line_no, value_col}).second) {
      throw ConfigParseError(source_name, line_no, indent,
                             "duplicate key '" + full + "'");
    }
  }

  const Reader r(std::move(entries), source_name, std::move(section_lines));
  Scenario s;

  if (r.has("scenario", "name")) s.name = r.word("scenario", "name");

  s.family = family_from_word(r, r.word("distribution", "family"));
  if (s.family == DensityFamily::PiecewiseLinear) {
    s.positions = r.list("distribution", "positions");
    s.values = r.list("distribution", "values");
  } else if (s.family == DensityFamily::Tabulated) {
    s.samples = r.list("distribution", "samples");
  }

  const std::string action_family = r.word("costs", "action_family");
  if (action_family == "linear-gap") {
    s.action_tabulated = false;
    s.delta_h = r.number("costs", "delta_h");
    s.delta_l = r.number("costs", "delta_l");
  } else if (action_family == "tabulated") {
    s.action_tabulated = true;
    s.action_grid = r.list("costs", "action_grid");
    s.effort_high_cost = r.list("costs", "effort_high_cost");
    s.idle_high_cost = r.list("costs", "idle_high_cost");
    s.effort_low_cost = r.list("costs", "effort_low_cost");
    s.idle_low_cost = r.list("costs", "idle_low_cost");
  } else {
    r.fail("costs", "action_family",
           "unknown action cost family '" + action_family + "'");
  }

  const std::string group_family = r.word("costs", "group_family");
  if (group_family == "linear-gap") {
    s.group_tabulated = false;
    s.kappa = r.number("costs", "kappa");
    s.kappa0 = r.has("costs", "kappa0") ? r.number("costs", "kappa0") : 0.0;
  } else if (group_family == "tabulated") {
    s.group_tabulated = true;
    s.group_grid = r.list("costs", "group_grid");
    s.high_group_cost = r.list("costs", "high_group_cost");
    s.low_group_cost = r.list("costs", "low_group_cost");
  } else {
    r.fail("costs", "group_family",
           "unknown group cost family '" + group_family + "'");
  }

  if (r.has("benefits", "effort_high"))
    s.benefits.effort_high = r.number("benefits", "effort_high");
  if (r.has("benefits", "idle_high"))
    s.benefits.idle_high = r.number("benefits", "idle_high");
  if (r.has("benefits", "effort_low"))
    s.benefits.effort_low = r.number("benefits", "effort_low");
  if (r.has("benefits", "idle_low"))
    s.benefits.idle_low = r.number("benefits", "idle_low");

  s.mu_inside = r.number("sensitivities", "mu_inside");
  s.mu_outside = r.number("sensitivities", "mu_outside");
  if (r.has("sensitivities", "mu_inside_high"))
    s.mu_inside_high = r.number("sensitivities", "mu_inside_high");
  if (r.has("sensitivities", "mu_inside_low"))
    s.mu_inside_low = r.number("sensitivities", "mu_inside_low");

  if (r.has("policy", "alpha")) s.policy.alpha = r.number("policy", "alpha");
  if (r.has("policy", "beta")) s.policy.beta = r.number("policy", "beta");
  if (r.has("policy", "gamma")) s.policy.gamma = r.number("policy", "gamma");

  if (r.has("solver", "residual_tol"))
    s.solver.residual_tol = r.number("solver", "residual_tol");
  if (r.has("solver", "newton_tol"))
    s.solver.newton_tol = r.number("solver", "newton_tol");
  if (r.has("solver", "max_newton_iterations"))
    s.solver.max_newton_iterations = r.integer("solver", "max_newton_iterations");
  if (r.has("solver", "scan_points"))
    s.solver.scan_points = r.integer("solver", "scan_points");
  if (r.has("solver", "action_scan_points"))
    s.solver.action_scan_points = r.integer("solver", "action_scan_points");
  if (r.has("solver", "bisection_tol"))
    s.solver.bisection_tol = r.number("solver", "bisection_tol");
  if (r.has("solver", "multistart"))
    s.solver.multistart_count = r.integer("solver", "multistart");

  if (r.has("simulate", "n")) s.simulate.n = r.integer("simulate", "n");
  if (r.has("simulate", "damping"))
    s.simulate.damping = r.number("simulate", "damping");
  if (r.has("simulate", "max_iters"))
    s.simulate.max_iters = r.integer("simulate", "max_iters");
  if (r.has("simulate", "empty_belief")) {
    const std::string rule = r.word("simulate", "empty_belief");
    if (rule == "boundary") {
      s.simulate.empty_belief = EmptyBeliefRule::Boundary;
    } else if (rule == "midpoint") {
      s.simulate.empty_belief = EmptyBeliefRule::Midpoint;
    } else {
      r.fail("simulate", "empty_belief",
             "unknown empty-belief rule '" + rule + "'");
    }
  }
  if (r.has("simulate", "group_rule")) {
    const std::string rule = r.word("simulate", "group_rule");
    if (rule == "reduced") {
      s.simulate.group_rule = GroupChoiceRule::Reduced;
    } else if (rule == "direct") {
      s.simulate.group_rule = GroupChoiceRule::Direct;
    } else {
      r.fail("simulate", "group_rule",
             "unknown group-choice rule '" + rule + "'");
    }
  }
  if (r.has("simulate", "start")) {
    const std::string start = r.word("simulate", "start");
    if (start == "equilibrium") {
      s.sim_start = SimStart::Equilibrium;
    } else if (start == "all-low") {
      s.sim_start = SimStart::AllLow;
    } else if (start == "all-high") {
      s.sim_start = SimStart::AllHigh;
    } else {
      r.fail("simulate", "start", "unknown start mode '" + start + "'");
    }
  }

  r.reject_leftovers();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigParseError(path, 0, 0, "cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "[scenario]\n";
  os << "name = " << s.name << "\n\n";

  os << "[distribution]\n";
  os << "family = " << to_string(s.family) << "\n";
  if (s.family == DensityFamily::PiecewiseLinear) {
    os << "positions = " << fmt_list(s.positions) << "\n";
    os << "values = " << fmt_list(s.values) << "\n";
  } else if (s.family == DensityFamily::Tabulated) {
    os << "samples = " << fmt_list(s.samples) << "\n";
  }
  os << "\n[costs]\n";
  if (s.action_tabulated) {
    os << "action_family = tabulated\n";
    os << "action_grid = " << fmt_list(s.action_grid) << "\n";
    os << "effort_high_cost = " << fmt_list(s.effort_high_cost) << "\n";
    os << "idle_high_cost = " << fmt_list(s.idle_high_cost) << "\n";
    os << "effort_low_cost = " << fmt_list(s.effort_low_cost) << "\n";
    os << "idle_low_cost = " << fmt_list(s.idle_low_cost) << "\n";
  } else {
    os << "action_family = linear-gap\n";
    os << "delta_h = " << fmt_double(s.delta_h) << "\n";
    os << "delta_l = " << fmt_double(s.delta_l) << "\n";
  }
  if (s.group_tabulated) {
    os << "group_family = tabulated\n";
    os << "group_grid = " << fmt_list(s.group_grid) << "\n";
    os << "high_group_cost = " << fmt_list(s.high_group_cost) << "\n";
    os << "low_group_cost = " << fmt_list(s.low_group_cost) << "\n";
  } else {
    os << "group_family = linear-gap\n";
    os << "kappa = " << fmt_double(s.kappa) << "\n";
    os << "kappa0 = " << fmt_double(s.kappa0) << "\n";
  }

  os << "\n[benefits]\n";
  os << "effort_high = " << fmt_double(s.benefits.effort_high) << "\n";
  os << "idle_high = " << fmt_double(s.benefits.idle_high) << "\n";
  os << "effort_low = " << fmt_double(s.benefits.effort_low) << "\n";
  os << "idle_low = " << fmt_double(s.benefits.idle_low) << "\n";

  os << "\n[sensitivities]\n";
  os << "mu_inside = " << fmt_double(s.mu_inside) << "\n";
  os << "mu_outside = " << fmt_double(s.mu_outside) << "\n";
  if (s.mu_inside_high)
    os << "mu_inside_high = " << fmt_double(*s.mu_inside_high) << "\n";
  if (s.mu_inside_low)
    os << "mu_inside_low = " << fmt_double(*s.mu_inside_low) << "\n";

  os << "\n[policy]\n";
  os << "alpha = " << fmt_double(s.policy.alpha) << "\n";
  os << "beta = " << fmt_double(s.policy.beta) << "\n";
  os << "gamma = " << fmt_double(s.policy.gamma) << "\n";

  os << "\n[solver]\n";
  os << "residual_tol = " << fmt_double(s.solver.residual_tol) << "\n";
  os << "newton_tol = " << fmt_double(s.solver.newton_tol) << "\n";
  os << "max_newton_iterations = " << s.solver.max_newton_iterations << "\n";
  os << "scan_points = " << s.solver.scan_points << "\n";
  os << "action_scan_points = " << s.solver.action_scan_points << "\n";
  os << "bisection_tol = " << fmt_double(s.solver.bisection_tol) << "\n";
  os << "multistart = " << s.solver.multistart_count << "\n";

  os << "\n[simulate]\n";
  os << "n = " << s.simulate.n << "\n";
  os << "damping = " << fmt_double(s.simulate.damping) << "\n";
  os << "max_iters = " << s.simulate.max_iters << "\n";
  os << "empty_belief = " << to_string(s.simulate.empty_belief) << "\n";
  os << "group_rule = " << to_string(s.simulate.group_rule) << "\n";
  os << "start = " << to_string(s.sim_start) << "\n";
  return os.str();
}

ModelSpec build_model(const Scenario& s) {
  ModelSpec spec;
  switch (s.family) {
    case DensityFamily::Uniform:
      spec.dist = TypeDistribution::uniform();
      break;
    case DensityFamily::LinearDecreasing:
      spec.dist = TypeDistribution::linear_decreasing();
      break;
    case DensityFamily::LinearIncreasing:
      spec.dist = TypeDistribution::linear_increasing();
      break;
    case DensityFamily::PiecewiseLinear:
      spec.dist = TypeDistribution::piecewise_linear(s.positions, s.values);
      break;
    case DensityFamily::Tabulated:
      spec.dist = TypeDistribution::tabulated(s.samples);
      break;
  }
  if (s.action_tabulated) {
    TabulatedActionCost tab;
    tab.grid = s.action_grid;
    tab.values[static_cast<int>(Group::High)][1] = s.effort_high_cost;
    tab.values[static_cast<int>(Group::High)][0] = s.idle_high_cost;
    tab.values[static_cast<int>(Group::Low)][1] = s.effort_low_cost;
    tab.values[static_cast<int>(Group::Low)][0] = s.idle_low_cost;
    for (const auto& g : tab.values) {
      for (const auto& v : g) {
        if (v.size() != tab.grid.size()) {
          throw std::invalid_argument(
              "tabulated action costs must match the grid length");
        }
      }
    }
    spec.action_cost = std::move(tab);
  } else {
    spec.action_cost = LinearGapActionCost{s.delta_h, s.delta_l};
  }
  if (s.group_tabulated) {
    TabulatedGroupCost tab;
    tab.grid = s.group_grid;
    tab.values[static_cast<int>(Group::High)] = s.high_group_cost;
    tab.values[static_cast<int>(Group::Low)] = s.low_group_cost;
    for (const auto& v : tab.values) {
      if (v.size() != tab.grid.size()) {
        throw std::invalid_argument(
            "tabulated group costs must match the grid length");
      }
    }
    spec.group_cost = std::move(tab);
  } else {
    spec.group_cost = LinearGapGroupCost{s.kappa, s.kappa0};
  }
  auto check_grid = [](const std::vector<double>& grid) {
    if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
      throw std::invalid_argument("cost grids must span [0, 1]");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) {
        throw std::invalid_argument("cost grids must be strictly increasing");
      }
    }
  };
  if (s.action_tabulated) check_grid(s.action_grid);
  if (s.group_tabulated) check_grid(s.group_grid);

  spec.benefits = s.benefits;
  spec.mu_inside = s.mu_inside;
  spec.mu_outside = s.mu_outside;
  spec.mu_inside_high = s.mu_inside_high;
  spec.mu_inside_low = s.mu_inside_low;
  spec.policy = s.policy;
  return spec;
}

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> names = {
      "alpha", "beta",    "gamma",   "mu_inside", "mu_outside",
      "delta_h", "delta_l", "kappa", "kappa0"};
  return names;
}

void apply_parameter(Scenario& s, const std::string& name, double value) {
  if (name == "alpha") {
    s.policy.alpha = value;
  } else if (name == "beta") {
    s.policy.beta = value;
  } else if (name == "gamma") {
    s.policy.gamma = value;
  } else if (name == "mu_inside") {
    s.mu_inside = value;
  } else if (name == "mu_outside") {
    s.mu_outside = value;
  } else if (name == "delta_h" || name == "delta_l") {
    if (s.action_tabulated) {
      throw PreconditionError("parameter '" + name +
                              "' requires the linear-gap action cost family");
    }
    (name == "delta_h" ? s.delta_h : s.delta_l) = value;
  } else if (name == "kappa" || name == "kappa0") {
    if (s.group_tabulated) {
      throw PreconditionError("parameter '" + name +
                              "' requires the linear-gap group cost family");
    }
    (name == "kappa" ? s.kappa : s.kappa0) = value;
  } else {
    throw PreconditionError("unknown sweep parameter '" + name + "'");
  }
}

}  // namespace statusgame
