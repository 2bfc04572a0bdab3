#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harness/instances.hpp"
#include "harness/problem_io.hpp"
#include "harness/report.hpp"
#include "harness/verify.hpp"
#include "karcher/geometry.hpp"
#include "karcher/schemes.hpp"
#include "karcher/solver.hpp"

namespace {

using namespace karcher;
using namespace karcher::harness;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNoConvergence = 3;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ProblemError("cannot open output file: " + out_path);
  out << text;
}

std::string matrix_json(const SpdMatrix& m, double residual, int iterations,
                        bool converged) {
  std::string s = "{\n  \"dim\": " + std::to_string(m.dim()) +
                  ",\n  \"matrix\": [";
  for (std::size_t i = 0; i < m.entries().size(); ++i) {
    if (i) s += ',';
    s += format_double(m.entries()[i]);
  }
  s += "],\n  \"residual_norm\": " + format_double(residual);
  s += ",\n  \"iterations\": " + std::to_string(iterations);
  s += ",\n  \"converged\": ";
  s += converged ? "true" : "false";
  s += "\n}\n";
  return s;
}

std::string trace_csv(const IterationTrace& trace) {
  std::string s = "n,d_inf_error,wall_ns\n";
  for (std::size_t i = 0; i < trace.indices().size(); ++i) {
    s += std::to_string(trace.indices()[i]);
    s += ',';
    s += format_double(trace.errors()[i]);
    s += ',';
    s += std::to_string(trace.wall_ns()[i]);
    s += '\n';
  }
  return s;
}

SpdMatrix reference_mean(const FiniteMeasure& mu) {
  SolverConfig cfg;
  cfg.residual_tol = 1e-12;
  cfg.max_iters = 2000;
  const KarcherResult r = karcher_mean(mu, cfg);
  if (!r.converged)
    throw std::runtime_error("reference Karcher mean did not converge");
  return r.mean;
}

int run_mean(const std::string& input, const std::string& out, double tol) {
  FiniteMeasure mu = to_measure(load_problem(input));
  SolverConfig cfg;
  cfg.residual_tol = tol;
  const KarcherResult r = karcher_mean(mu, cfg);
  emit(out, matrix_json(r.mean, r.residual_norm, r.iterations, r.converged));
  return r.converged ? kExitOk : kExitNoConvergence;
}

int run_nodice(const std::string& input, const std::string& out, long cycles) {
  FiniteMeasure mu = to_measure(load_problem(input));
  for (int i = 0; i < mu.size(); ++i)
    if (std::abs(mu.weight(i) * mu.size() - 1.0) > 1e-9)
      throw ProblemError("nodice requires equal weights 1/k");
  const IterationTrace trace = nodice_sequence(mu, cycles, reference_mean(mu));
  emit(out, trace_csv(trace));
  return kExitOk;
}

int run_slln(const std::string& input, const std::string& out, long steps,
             std::uint64_t seed, double radius) {
  FiniteMeasure mu = to_measure(load_problem(input));
  const SpdMatrix ref = reference_mean(mu);
  const IterationTrace trace =
      radius > 0.0 ? truncated_sequence(mu, steps, seed, radius, ref)
                   : stochastic_sequence(mu, steps, seed, ref);
  emit(out, trace_csv(trace));
  return kExitOk;
}

int run_flow(const std::string& input, const std::string& x0_path,
             const std::string& out, double t, double flow_tol, int steps,
             double tol) {
  FiniteMeasure mu = to_measure(load_problem(input));
  const SpdMatrix x0 =
      x0_path.empty() ? SpdMatrix::identity(mu.dim()) : load_matrix(x0_path);
  if (x0.dim() != mu.dim()) throw ProblemError("x0 dimension mismatch");
  SolverConfig cfg;
  cfg.residual_tol = tol;

  SpdMatrix flow = x0, euler = x0;
  if (t > 0.0) {
    flow = semigroup(t, mu, x0, flow_tol, cfg);
    euler = euler_flow(t, steps, mu, x0);
  }
  const double gap = thompson_distance(flow, euler);

  std::string s = "{\n  \"dim\": " + std::to_string(mu.dim());
  auto put = [&s](const char* name, const SpdMatrix& m) {
    s += ",\n  \"";
    s += name;
    s += "\": [";
    for (std::size_t i = 0; i < m.entries().size(); ++i) {
      if (i) s += ',';
      s += format_double(m.entries()[i]);
    }
    s += ']';
  };
  put("flow", flow);
  put("euler", euler);
  s += ",\n  \"gap\": " + format_double(gap);
  s += ",\n  \"t\": " + format_double(t);
  s += "\n}\n";
  emit(out, s);
  return kExitOk;
}

int run_verify(const VerifyOptions& options, const std::string& out) {
  const RunReport report = run_verification(options);
  print_report(std::cout, report);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ProblemError("cannot open output file: " + out);
    f << report_json(report, /*include_timing=*/false);
  }
  if (!report.all_pass()) {
    for (const CheckResult& c : report.checks)
      if (!c.pass)
        std::cerr << "FAILED " << c.name << ": lhs=" << c.worst_lhs
                  << " rhs=" << c.worst_rhs << " slack=" << c.slack << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Karcher barycenters on the SPD cone: means, flows, "
               "approximation schemes, and the inequality verification suite"};
  app.require_subcommand(1);

  std::string input, out, x0_path;
  double tol = 1e-10;
  double flow_tol = 1e-4;
  long n = 0;
  std::uint64_t seed = 1;
  double t = 1.0;
  double radius = 0.0;
  int steps = 256;
  std::vector<int> dims = {2, 3, 4};
  int instances = 50;
  bool inject = false;

  CLI::App* mean = app.add_subcommand("mean", "Karcher mean of a problem file");
  mean->add_option("--input", input, "problem file (JSON)")->required();
  mean->add_option("--out", out, "output path (default stdout)");
  mean->add_option("--tol", tol, "residual tolerance");

  CLI::App* nodice =
      app.add_subcommand("nodice", "deterministic cyclic inductive means");
  nodice->add_option("--input", input)->required();
  nodice->add_option("--out", out);
  nodice->add_option("--n", n, "number of cycles")->required();

  CLI::App* slln =
      app.add_subcommand("slln", "stochastic inductive means (SLLN)");
  slln->add_option("--input", input)->required();
  slln->add_option("--out", out);
  slln->add_option("--n", n, "number of steps")->required();
  slln->add_option("--seed", seed, "RNG seed");
  slln->add_option("--radius", radius,
                   "truncation radius (> 0 runs the truncated variant)");

  CLI::App* flow = app.add_subcommand("flow", "Karcher gradient flow S(t)");
  flow->add_option("--input", input)->required();
  flow->add_option("--out", out);
  flow->add_option("--x0", x0_path, "matrix file for the start (default I)");
  flow->add_option("--t", t, "time horizon");
  flow->add_option("--flow-tol", flow_tol, "flow accuracy");
  flow->add_option("--steps", steps, "Euler comparison steps");
  flow->add_option("--tol", tol, "inner residual tolerance");

  CLI::App* verify =
      app.add_subcommand("verify", "randomized verification of the "
                                   "inequality suite");
  verify->add_option("--dims", dims, "dimensions to draw from");
  verify->add_option("--instances", instances, "instance-count scale (50 = reference)");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--out", out, "write the JSON report here");
  verify->add_option("--tol", tol, "residual tolerance");
  verify->add_option("--flow-tol", flow_tol, "flow accuracy");
  verify->add_flag("--inject-violation", inject,
                   "self-test: force one check to fail");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mean->parsed()) return run_mean(input, out, tol);
    if (nodice->parsed()) return run_nodice(input, out, n);
    if (slln->parsed()) return run_slln(input, out, n, seed, radius);
    if (flow->parsed()) return run_flow(input, x0_path, out, t, flow_tol, steps, tol);
    if (verify->parsed()) {
      VerifyOptions options;
      options.dims = dims;
      options.instances = instances;
      options.seed = seed;
      options.residual_tol = tol;
      options.flow_tol = flow_tol;
      options.inject_violation = inject;
      return run_verify(options, out);
    }
  } catch (const ProblemError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  return kExitInputError;
}
