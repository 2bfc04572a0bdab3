#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "karcher/measure.hpp"

namespace karcher::harness {

/// Raised for unreadable, unparsable, or invalid input files (CLI exit 2).
struct ProblemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// On-disk problem: a finite measure as JSON with named fields
///   {"dim": d, "weights": [...], "atoms": [[row-major d*d], ...],
///    "labels": [...]}   (labels optional)
/// Floats are written with 17 significant digits so serialize -> parse is an
/// identity to full double precision.
struct ProblemFile {
  int dim = 0;
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;
  std::vector<std::string> labels;
};

ProblemFile parse_problem(const std::string& json_text);
ProblemFile load_problem(const std::string& path);
std::string serialize_problem(const ProblemFile& pf);
void save_problem(const std::string& path, const ProblemFile& pf);

/// Validates the ProblemFile contract: positive weights summing to 1 within
/// 1e-9, SPD atoms of matching dimension. Throws ProblemError otherwise.
FiniteMeasure to_measure(const ProblemFile& pf);
ProblemFile from_measure(const FiniteMeasure& mu,
                         const std::vector<std::string>& labels = {});

/// Single-matrix files {"dim": d, "entries": [row-major]}.
SpdMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const SpdMatrix& m);

/// 17-significant-digit float formatting used by every writer.
std::string format_double(double v);

}  // namespace karcher::harness
