// Acceptance suite runner: one PASS/FAIL line per criterion, nonzero exit
// on any failure.
#include <iostream>

#include "mnms/acceptance.hpp"

int main() {
  const std::vector<mnms::CriterionOutcome> outcomes = mnms::run_acceptance(&std::cout);
  const bool ok = mnms::all_passed(outcomes);
  std::cout << (ok ? "all criteria passed" : "some criteria FAILED") << std::endl;
  return ok ? 0 : 1;
}
