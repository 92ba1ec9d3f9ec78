#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mnms {

struct CriterionOutcome {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the eleven acceptance criteria at their pinned tolerances, printing
/// one PASS/FAIL line per criterion when a stream is given.
std::vector<CriterionOutcome> run_acceptance(std::ostream* log = nullptr);

bool all_passed(const std::vector<CriterionOutcome>& outcomes);

}  // namespace mnms
