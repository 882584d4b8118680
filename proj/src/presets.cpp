// Bundled scenario presets. The commented copies under presets/ carry the
// same parameters; a regression test keeps the two in sync.
#include "statusgame/scenario.hpp"

#include <map>

namespace statusgame {

namespace {

const char* kS1 = R"(
[scenario]
name = s1-baseline

[distribution]
family = uniform

[costs]
action_family = linear-gap
delta_h = 1.0
delta_l = 0.5
group_family = linear-gap
kappa = 0.1
kappa0 = 0.0

[benefits]
effort_high = 0.0
idle_high = 0.0
effort_low = 0.0
idle_low = 0.0

[sensitivities]
mu_inside = 0.4
mu_outside = 0.5

[policy]
alpha = 0.0
beta = 0.0
gamma = 0.0
)";

const char* kCollege = R"(
[scenario]
name = college-choice

[distribution]
family = linear-decreasing

[costs]
action_family = linear-gap
delta_h = 0.9
delta_l = 0.5
group_family = linear-gap
kappa = 0.15
kappa0 = 0.02

[sensitivities]
mu_inside = 0.35
mu_outside = 0.55
)";

const char* kCrime = R"(
[scenario]
name = criminal-subculture

[distribution]
family = linear-decreasing

[costs]
action_family = linear-gap
delta_h = 1.1
delta_l = 0.6
group_family = linear-gap
kappa = 0.05
kappa0 = 0.0

[sensitivities]
mu_inside = 0.5
mu_outside = 0.4
)";

const char* kResidence = R"(
[scenario]
name = residence-consumption

[distribution]
family = linear-decreasing

[costs]
action_family = linear-gap
delta_h = 1.0
delta_l = 0.55
group_family = linear-gap
kappa = 0.2
kappa0 = 0.05

[sensitivities]
mu_inside = 0.4
mu_outside = 0.6
)";

const std::map<std::string, const char*>& preset_map() {
  static const std::map<std::string, const char*> presets = {
      {"s1", kS1},
      {"college", kCollege},
      {"crime", kCrime},
      {"residence", kResidence},
  };
  return presets;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, text] : preset_map()) out.push_back(name);
    return out;
  }();
  return names;
}

std::string preset_text(const std::string& name) {
  const auto it = preset_map().find(name);
  if (it == preset_map().end()) {
    std::string known;
    for (const std::string& n : preset_names()) {
      if (!known.empty()) known += ", ";
      known += n;
    }
    throw ConfigParseError("preset:" + name, 0, 0,
                           "unknown preset (available: " + known + ")");
  }
  return it->second;
}

}  // namespace statusgame
