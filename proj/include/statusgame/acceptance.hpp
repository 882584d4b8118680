// The bundled verification suite: closed-form oracles, spillover sign
// checks over the regression corpus, derivative cross-checks, simulator
// consistency, and output determinism. Used by the `check` subcommand and
// the acceptance test binary.
#pragma once

#include <string>
#include <vector>

#include "statusgame/scenario.hpp"

namespace statusgame {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance_suite();

// Regression corpus: density families crossed with parameter variants. Not
// every entry admits a stable interior equilibrium; the suite requires at
// least twenty that do.
struct CorpusEntry {
  std::string name;
  Scenario scenario;
};

std::vector<CorpusEntry> regression_corpus();

// The baseline scenario every oracle is pinned to.
Scenario baseline_scenario();

}  // namespace statusgame
