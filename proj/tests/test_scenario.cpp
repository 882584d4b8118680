#include <fstream>
#include <sstream>

#include "doctest.h"
#include "statusgame/scenario.hpp"

using namespace statusgame;

namespace {

Scenario parsed_preset(const std::string& name) {
  return parse_scenario(preset_text(name), "preset:" + name);
}

}  // namespace

TEST_CASE("the baseline preset parses with the expected fields") {
  const Scenario s = parsed_preset("s1");
  CHECK(s.name == "s1-baseline");
  CHECK(s.family == DensityFamily::Uniform);
  CHECK_FALSE(s.action_tabulated);
  CHECK(s.delta_h == 1.0);
  CHECK(s.delta_l == 0.5);
  CHECK(s.kappa == 0.1);
  CHECK(s.kappa0 == 0.0);
  CHECK(s.mu_inside == 0.4);
  CHECK(s.mu_outside == 0.5);
  CHECK(s.policy.alpha == 0.0);
  CHECK(s.solver.scan_points == 512);
  CHECK(s.simulate.n == 10001);
  CHECK(s.simulate.damping == 0.5);
  CHECK(s.simulate.group_rule == GroupChoiceRule::Reduced);
}

TEST_CASE("round trip is the identity on parsed scenarios") {
  for (const std::string& name : preset_names()) {
    const Scenario s = parsed_preset(name);
    CHECK(parse_scenario(serialize_scenario(s)) == s);
  }

  // A maximally customized scenario exercises every serialized key.
  Scenario s;
  s.name = "custom everything";
  s.family = DensityFamily::PiecewiseLinear;
  s.positions = {0.0, 0.25, 1.0};
  s.values = {0.125, 1.75, 0.5};
  s.action_tabulated = true;
  s.action_grid = {0.0, 0.5, 1.0};
  s.effort_high_cost = {1.0, 0.41, 0.0};
  s.idle_high_cost = {0.1, 0.05, 0.0};
  s.effort_low_cost = {0.7, 0.33, 0.0};
  s.idle_low_cost = {0.2, 0.1, 0.0};
  s.group_tabulated = true;
  s.group_grid = {0.0, 1.0};
  s.high_group_cost = {0.3, 0.1};
  s.low_group_cost = {0.0, 0.0};
  s.benefits = {0.1, 0.025, -0.5, 1e-30};
  s.mu_inside = 0.123456789012345678;
  s.mu_outside = 0.6;
  s.mu_inside_high = 0.44;
  s.mu_inside_low = 0.33;
  s.policy = {1.0 / 3.0, -2.0 / 7.0, 1e-17};
  s.solver.residual_tol = 1e-7;
  s.solver.scan_points = 333;
  s.solver.multistart_count = 12;
  s.simulate.n = 999;
  s.simulate.damping = 0.75;
  s.simulate.empty_belief = EmptyBeliefRule::Midpoint;
  s.simulate.group_rule = GroupChoiceRule::Direct;
  s.sim_start = SimStart::AllLow;
  CHECK(parse_scenario(serialize_scenario(s)) == s);
}

TEST_CASE("unknown keys are rejected with their location") {
  const std::string text =
      "[distribution]\n"
      "family = uniform\n"
      "fammily = oops\n";
  try {
    (void)parse_scenario(text, "bad.scn");
    FAIL("expected a parse error");
  } catch (const ConfigParseError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("fammily") != std::string::npos);
    CHECK(std::string(e.what()).find("bad.scn:3:") != std::string::npos);
  }
}

TEST_CASE("parser failure modes") {
  CHECK_THROWS_AS((void)parse_scenario("[nonsense]\n"), ConfigParseError);
  CHECK_THROWS_AS((void)parse_scenario("family = uniform\n"),
                  ConfigParseError);  // key outside any section
  CHECK_THROWS_AS((void)parse_scenario("[distribution\n"), ConfigParseError);
  CHECK_THROWS_AS(
      (void)parse_scenario("[distribution]\nfamily = uniform\nno equals\n"),
      ConfigParseError);
  CHECK_THROWS_AS(
      (void)parse_scenario(
          "[distribution]\nfamily = uniform\nfamily = uniform\n"),
      ConfigParseError);  // duplicate key
  // Missing required sections/keys.
  CHECK_THROWS_AS((void)parse_scenario("[distribution]\nfamily = uniform\n"),
                  ConfigParseError);

  const std::string base =
      "[distribution]\nfamily = uniform\n"
      "[costs]\naction_family = linear-gap\ndelta_h = 1.0\ndelta_l = 0.5\n"
      "group_family = linear-gap\nkappa = 0.1\n"
      "[sensitivities]\nmu_inside = 0.4\nmu_outside = 0.5\n";
  CHECK_NOTHROW((void)parse_scenario(base));

  // A key that exists but is inapplicable under the chosen family.
  CHECK_THROWS_AS((void)parse_scenario(base + "[distribution]\nsamples = 1 1\n"),
                  ConfigParseError);
  // Bad value types.
  CHECK_THROWS_AS(
      (void)parse_scenario(base + "[policy]\nalpha = banana\n"),
      ConfigParseError);
  CHECK_THROWS_AS(
      (void)parse_scenario(base + "[solver]\nscan_points = 1.5\n"),
      ConfigParseError);
  CHECK_THROWS_AS(
      (void)parse_scenario(base + "[simulate]\nempty_belief = nonsense\n"),
      ConfigParseError);
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text =
      "# leading comment\n"
      "[distribution]\n"
      "family = uniform  # trailing comment\n"
      "\n"
      "[costs]\n"
      "action_family = linear-gap\n"
      "delta_h = 1.0\n"
      "delta_l = 0.5\n"
      "group_family = linear-gap\n"
      "kappa = 0.1\n"
      "[sensitivities]\n"
      "mu_inside = 0.4\n"
      "mu_outside = 0.5\n";
  const Scenario s = parse_scenario(text);
  CHECK(s.family == DensityFamily::Uniform);
  CHECK(s.delta_h == 1.0);
}

TEST_CASE("sweepable parameters apply or reject cleanly") {
  Scenario s = parsed_preset("s1");
  for (const std::string& name : sweepable_parameters()) {
    CHECK_NOTHROW(apply_parameter(s, name, 0.42));
  }
  CHECK(s.policy.alpha == 0.42);
  CHECK(s.kappa0 == 0.42);
  CHECK_THROWS_AS(apply_parameter(s, "bogus", 1.0), PreconditionError);

  Scenario tab = s;
  tab.action_tabulated = true;
  CHECK_THROWS_AS(apply_parameter(tab, "delta_h", 1.0), PreconditionError);
}

TEST_CASE("build_model materializes each density family") {
  Scenario s = parsed_preset("s1");
  CHECK(build_model(s).dist.family() == DensityFamily::Uniform);
  s.family = DensityFamily::PiecewiseLinear;
  s.positions = {0.0, 0.4, 1.0};
  s.values = {2.0, 1.0, 0.2};
  CHECK(build_model(s).dist.family() == DensityFamily::PiecewiseLinear);
  s.family = DensityFamily::Tabulated;
  s.samples = {1.0, 1.2, 0.8};
  CHECK(build_model(s).dist.family() == DensityFamily::Tabulated);

  // Tabulated cost grids must span the unit interval.
  Scenario bad = parsed_preset("s1");
  bad.group_tabulated = true;
  bad.group_grid = {0.0, 0.5};
  bad.high_group_cost = {0.1, 0.05};
  bad.low_group_cost = {0.0, 0.0};
  CHECK_THROWS_AS((void)build_model(bad), std::invalid_argument);
}

TEST_CASE("all presets build and validate") {
  for (const std::string& name : preset_names()) {
    const Scenario s = parsed_preset(name);
    const ModelSpec spec = build_model(s);
    CHECK(validate(spec).ok());
  }
  CHECK_THROWS_AS((void)preset_text("unknown"), ConfigParseError);
}

TEST_CASE("preset files on disk match the embedded parameters") {
  for (const std::string& name : preset_names()) {
    const std::string path =
        std::string(STATUSGAME_SOURCE_DIR) + "/presets/" + name + ".scn";
    std::ifstream probe(path);
    REQUIRE_MESSAGE(probe.good(), "missing preset file ", path);
    CHECK(load_scenario_file(path) == parsed_preset(name));
  }
}
