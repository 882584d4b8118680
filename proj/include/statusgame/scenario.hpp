// Scenario configs: the structured-text format every CLI subcommand ingests,
// its strict parser (unknown keys fatal, line/column diagnostics), the
// lossless serializer, and bundled presets.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "statusgame/model.hpp"
#include "statusgame/simulate.hpp"
#include "statusgame/solver.hpp"

namespace statusgame {

class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(const std::string& source, int line, int column,
                   const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line(line),
        column(column) {}
  int line;
  int column;
};

enum class SimStart { Equilibrium, AllLow, AllHigh };

std::string to_string(SimStart s);

// Parsed configuration. Mirrors the config file exactly: parse -> serialize
// -> parse is the identity.
struct Scenario {
  std::string name = "scenario";

  // [distribution]
  DensityFamily family = DensityFamily::Uniform;
  std::vector<double> positions;  // piecewise-linear knots
  std::vector<double> values;
  std::vector<double> samples;    // tabulated

  // [costs]
  bool action_tabulated = false;
  double delta_h = 1.0;
  double delta_l = 0.5;
  std::vector<double> action_grid;
  std::vector<double> effort_high_cost;
  std::vector<double> idle_high_cost;
  std::vector<double> effort_low_cost;
  std::vector<double> idle_low_cost;
  bool group_tabulated = false;
  double kappa = 0.1;
  double kappa0 = 0.0;
  std::vector<double> group_grid;
  std::vector<double> high_group_cost;
  std::vector<double> low_group_cost;

  // [benefits]
  Benefits benefits;

  // [sensitivities]
  double mu_inside = 0.4;
  double mu_outside = 0.5;
  std::optional<double> mu_inside_high;  // experimental per-group override
  std::optional<double> mu_inside_low;

  // [policy]
  PolicyShifters policy;

  // [solver]
  SolverOptions solver;

  // [simulate]
  SimOptions simulate;
  SimStart sim_start = SimStart::Equilibrium;

  bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& text,
                        const std::string& source_name = "<config>");
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// Materializes the model primitives; throws std::invalid_argument on
// structurally bad inputs (e.g. a density that cannot be normalized).
ModelSpec build_model(const Scenario& s);

// Sweepable parameters: alpha, beta, gamma, mu_inside, mu_outside, delta_h,
// delta_l, kappa, kappa0. Throws PreconditionError for unknown names or
// parameters that do not exist under the scenario's cost families.
void apply_parameter(Scenario& s, const std::string& name, double value);
const std::vector<std::string>& sweepable_parameters();

// Bundled presets (also shipped as commented files under presets/).
const std::vector<std::string>& preset_names();
std::string preset_text(const std::string& name);  // throws on unknown name

}  // namespace statusgame
