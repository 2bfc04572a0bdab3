#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace karcher::harness {

/// One verified inequality family: every case asserts lhs <= rhs + slack.
/// The reported numbers belong to the case with the smallest margin.
struct CheckResult {
  std::string name;
  bool pass = false;
  long cases = 0;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  double slack = 0.0;           // slack of the worst case
  double worst_excess = 0.0;    // max over cases of lhs - rhs - slack
  double millis = 0.0;
  std::string note;

  void record(double lhs, double rhs, double case_slack);
  void record_flag(bool ok);  // boolean sub-checks
  void finish();
};

struct RunReport {
  std::string command;
  std::string config;
  std::vector<CheckResult> checks;
  double total_ms = 0.0;

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
};

void print_report(std::ostream& os, const RunReport& report);

/// JSON rendering; timing fields are omitted when `include_timing` is false
/// so fixed-seed runs compare byte-identically.
std::string report_json(const RunReport& report, bool include_timing);

}  // namespace karcher::harness
