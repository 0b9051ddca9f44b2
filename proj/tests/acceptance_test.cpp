// Runs acceptance criteria 1-9 and prints one PASS/FAIL line for each.
#include <iostream>

#include "hyperqd/acceptance.hpp"

int main() {
  const auto report = hyperqd::run_acceptance();
  hyperqd::print_report(std::cout, report);
  return report.all_pass() ? 0 : 1;
}
