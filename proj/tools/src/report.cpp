#include "harness/report.hpp"

#include <cstdio>

#include "harness/problem_io.hpp"

namespace karcher::harness {

void CheckResult::record(double lhs, double rhs, double case_slack) {
  ++cases;
  const double excess = lhs - rhs - case_slack;
  if (cases == 1 || excess > worst_excess) {
    worst_excess = excess;
    worst_lhs = lhs;
    worst_rhs = rhs;
    slack = case_slack;
  }
}

void CheckResult::record_flag(bool ok) {
  record(ok ? 0.0 : 1.0, 0.0, 0.0);
}

void CheckResult::finish() { pass = cases == 0 || worst_excess <= 0.0; }

bool RunReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* RunReport::find(const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void print_report(std::ostream& os, const RunReport& report) {
  os << "== " << report.command << " (" << report.config << ")\n";
  char buf[256];
  for (const CheckResult& c : report.checks) {
    std::snprintf(buf, sizeof(buf),
                  "%-26s %s  cases=%-6ld lhs=%-13.6g rhs=%-13.6g slack=%-9.3g %s",
                  c.name.c_str(), c.pass ? "PASS" : "FAIL", c.cases,
                  c.worst_lhs, c.worst_rhs, c.slack, c.note.c_str());
    os << buf << "\n";
  }
  std::snprintf(buf, sizeof(buf), "== %s: %s (%ld checks, %.1f s)",
                report.command.c_str(),
                report.all_pass() ? "ALL PASS" : "FAILURES",
                static_cast<long>(report.checks.size()),
                report.total_ms / 1000.0);
  os << buf << "\n";
}

std::string report_json(const RunReport& report, bool include_timing) {
  std::string out = "{\n  \"command\": \"" + report.command + "\",\n";
  out += "  \"config\": \"" + report.config + "\",\n";
  out += "  \"all_pass\": ";
  out += report.all_pass() ? "true" : "false";
  out += ",\n  \"checks\": [\n";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const CheckResult& c = report.checks[i];
    out += "    {\"name\": \"" + c.name + "\", \"pass\": ";
    out += c.pass ? "true" : "false";
    out += ", \"cases\": " + std::to_string(c.cases);
    out += ", \"lhs\": " + format_double(c.worst_lhs);
    out += ", \"rhs\": " + format_double(c.worst_rhs);
    out += ", \"slack\": " + format_double(c.slack);
    if (include_timing) out += ", \"millis\": " + format_double(c.millis);
    if (!c.note.empty()) out += ", \"note\": \"" + c.note + "\"";
    out += "}";
    if (i + 1 < report.checks.size()) out += ",";
    out += "\n";
  }
  out += "  ]";
  if (include_timing)
    out += ",\n  \"total_ms\": " + format_double(report.total_ms);
  out += "\n}\n";
  return out;
}

}  // namespace karcher::harness
