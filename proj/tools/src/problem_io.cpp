#include "harness/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace karcher::harness {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_array(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  out += ']';
}

}  // namespace

ProblemFile parse_problem(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ProblemError(std::string("invalid JSON: ") + e.what());
  }
  ProblemFile pf;
  try {
    pf.dim = j.at("dim").get<int>();
    pf.weights = j.at("weights").get<std::vector<double>>();
    pf.atoms = j.at("atoms").get<std::vector<std::vector<double>>>();
    if (j.contains("labels"))
      pf.labels = j.at("labels").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ProblemError(std::string("bad problem schema: ") + e.what());
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open input file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string serialize_problem(const ProblemFile& pf) {
  std::string out = "{\n  \"dim\": " + std::to_string(pf.dim) + ",\n";
  out += "  \"weights\": ";
  append_array(out, pf.weights);
  out += ",\n  \"atoms\": [\n";
  for (std::size_t i = 0; i < pf.atoms.size(); ++i) {
    out += "    ";
    append_array(out, pf.atoms[i]);
    if (i + 1 < pf.atoms.size()) out += ',';
    out += '\n';
  }
  out += "  ]";
  if (!pf.labels.empty()) {
    out += ",\n  \"labels\": [";
    for (std::size_t i = 0; i < pf.labels.size(); ++i) {
      if (i) out += ',';
      out += json(pf.labels[i]).dump();
    }
    out += ']';
  }
  out += "\n}\n";
  return out;
}

void save_problem(const std::string& path, const ProblemFile& pf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ProblemError("cannot open output file: " + path);
  out << serialize_problem(pf);
}

FiniteMeasure to_measure(const ProblemFile& pf) {
  if (pf.dim < 1) throw ProblemError("dim must be >= 1");
  if (pf.atoms.empty()) throw ProblemError("problem has no atoms");
  if (pf.atoms.size() != pf.weights.size())
    throw ProblemError("atoms and weights differ in length");
  double total = 0.0;
  for (double w : pf.weights) {
    if (!(w > 0.0)) throw ProblemError("weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ProblemError("weights must sum to 1 within 1e-9");

  std::vector<SpdMatrix> atoms;
  atoms.reserve(pf.atoms.size());
  for (const auto& entries : pf.atoms) {
    if (entries.size() != static_cast<std::size_t>(pf.dim) * pf.dim)
      throw ProblemError("atom entry count does not match dim");
    try {
      atoms.emplace_back(pf.dim, entries);
    } catch (const std::exception& e) {
      throw ProblemError(std::string("atom is not SPD: ") + e.what());
    }
  }
  return FiniteMeasure(std::move(atoms), pf.weights);
}

ProblemFile from_measure(const FiniteMeasure& mu,
                         const std::vector<std::string>& labels) {
  ProblemFile pf;
  pf.dim = mu.dim();
  for (int i = 0; i < mu.size(); ++i) {
    pf.atoms.push_back(mu.atom(i).entries());
    pf.weights.push_back(mu.weight(i));
  }
  pf.labels = labels;
  return pf;
}

SpdMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open matrix file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ProblemError(std::string("invalid JSON: ") + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    const auto entries = j.at("entries").get<std::vector<double>>();
    return SpdMatrix(dim, entries);
  } catch (const json::exception& e) {
    throw ProblemError(std::string("bad matrix schema: ") + e.what());
  } catch (const std::exception& e) {
    throw ProblemError(std::string("matrix is not SPD: ") + e.what());
  }
}

void save_matrix(const std::string& path, const SpdMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ProblemError("cannot open output file: " + path);
  out << "{\n  \"dim\": " << m.dim() << ",\n  \"entries\": ";
  std::string arr;
  append_array(arr, m.entries());
  out << arr << "\n}\n";
}

}  // namespace karcher::harness
