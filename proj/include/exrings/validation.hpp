#pragma once

#include <string>
#include <vector>

#include "exrings/experiments.hpp"

namespace exrings {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  Profile profile = Profile::Fast;
  unsigned jobs = 1;
};

// Runs every acceptance criterion at its pinned tolerance.  Deterministic:
// all ensemble seeds are fixed constants.
std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options);

std::string acceptance_table(const std::vector<CriterionResult>& results);
std::string acceptance_report_json(const std::vector<CriterionResult>& results,
                                   const AcceptanceOptions& options);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace exrings
