#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperqd {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::string> details;
  double millis = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  std::vector<std::string> notes;  // supplementary, not pass/fail

  bool all_pass() const;
};

/// Runs criteria 1-9 in order.
AcceptanceReport run_acceptance();

/// Individual criteria, for the test binary.
CriterionResult criterion_operating_point_a();
CriterionResult criterion_operating_point_b();
CriterionResult criterion_operating_point_c();
CriterionResult criterion_hyper_truth_table();
CriterionResult criterion_spatial_truth_table();
CriterionResult criterion_stage_regressions();
CriterionResult criterion_consistency(std::vector<std::string>* notes = nullptr);
CriterionResult criterion_physicality(std::vector<std::string>* notes = nullptr);
CriterionResult criterion_sweep();

/// One "PASS"/"FAIL" line per criterion followed by its details.
void print_criterion(std::ostream& os, const CriterionResult& c);
void print_report(std::ostream& os, const AcceptanceReport& r);

}  // namespace hyperqd
