#include "greenop/problem_io.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "greenop/errors.hpp"
#include "greenop/parse.hpp"

namespace greenop {

using nlohmann::json;

std::vector<std::vector<double>> GridSpec::points() const {
  if (ranges.size() != steps.size())
    throw FileFormatError("grid ranges and steps must have equal length");
  std::vector<std::vector<double>> out;
  for (int s : steps)
    if (s <= 0) return out;  // empty grid
  std::vector<double> point(ranges.size(), 0.0);
  std::function<void(std::size_t)> walk = [&](std::size_t k) {
    if (k == ranges.size()) {
      out.push_back(point);
      return;
    }
    const auto [lo, hi] = ranges[k];
    const int s = steps[k];
    for (int j = 0; j < s; ++j) {
      point[k] = (s == 1) ? lo : lo + (hi - lo) * j / (s - 1);
      walk(k + 1);
    }
  };
  if (!ranges.empty()) walk(0);
  return out;
}

namespace {

Complex scalar_field(const json& j, const char* key) {
  if (!j.contains(key)) throw FileFormatError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  try {
    if (v.is_string()) return Complex::parse(v.get<std::string>());
    if (v.is_number_integer()) return Complex(v.get<long>());
  } catch (const ParseError& e) {
    throw FileFormatError(std::string("bad scalar in '") + key + "': " + e.what());
  }
  throw FileFormatError(std::string("field '") + key + "' must be a scalar string");
}

}  // namespace

ProblemFile ProblemFile::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FileFormatError(std::string("invalid JSON: ") + e.what());
  }
  ProblemFile f;
  if (!j.contains("format") || !j.at("format").is_number_integer())
    throw FileFormatError("missing integer field 'format'");
  f.format = j.at("format").get<int>();
  if (f.format != 1) throw FileFormatError("unsupported format version");
  if (!j.contains("n") || !j.at("n").is_number_integer())
    throw FileFormatError("missing integer field 'n'");
  f.n = j.at("n").get<int>();
  if (!j.contains("factors") || !j.at("factors").is_array())
    throw FileFormatError("missing array field 'factors'");
  for (const auto& jf : j.at("factors")) {
    FirstOrderFactor fac;
    fac.a = scalar_field(jf, "a");
    fac.a0 = scalar_field(jf, "a0");
    if (!jf.contains("coeffs") || !jf.at("coeffs").is_array())
      throw FileFormatError("factor needs an array field 'coeffs'");
    for (const auto& c : jf.at("coeffs")) {
      if (c.is_string())
        fac.coeffs.push_back(Complex::parse(c.get<std::string>()));
      else if (c.is_number_integer())
        fac.coeffs.push_back(Complex(c.get<long>()));
      else
        throw FileFormatError("factor coefficients must be scalar strings");
    }
    fac.multiplicity = jf.value("multiplicity", 1);
    f.factors.push_back(std::move(fac));
  }
  if (!j.contains("data") || !j.at("data").is_array())
    throw FileFormatError("missing array field 'data'");
  for (const auto& d : j.at("data")) {
    if (!d.is_string()) throw FileFormatError("data entries must be expression strings");
    f.data.push_back(d.get<std::string>());
  }
  if (j.contains("operator")) f.operator_expr = j.at("operator").get<std::string>();
  if (j.contains("expected_solution"))
    f.expected_solution = j.at("expected_solution").get<std::string>();
  if (j.contains("truncation")) f.truncation = j.at("truncation").get<int>();
  if (j.contains("grid")) {
    const auto& jg = j.at("grid");
    GridSpec g;
    if (!jg.contains("ranges") || !jg.contains("steps"))
      throw FileFormatError("grid needs 'ranges' and 'steps'");
    for (const auto& r : jg.at("ranges")) {
      if (!r.is_array() || r.size() != 2)
        throw FileFormatError("grid ranges must be [lo, hi] pairs");
      g.ranges.emplace_back(r[0].get<double>(), r[1].get<double>());
    }
    for (const auto& s : jg.at("steps")) g.steps.push_back(s.get<int>());
    if (g.ranges.size() != g.steps.size())
      throw FileFormatError("grid ranges and steps must have equal length");
    f.grid = std::move(g);
  }
  return f;
}

CauchyProblem ProblemFile::to_problem() const {
  CauchyProblem p;
  p.n = n;
  p.factors = factors;
  for (const auto& d : data) {
    try {
      p.data.push_back(parse_exppoly(d));
    } catch (const ParseError& e) {
      throw FileFormatError("bad data expression '" + d + "': " + e.what());
    }
  }
  return p;
}

ProblemFile ProblemFile::from_problem(const CauchyProblem& p) {
  ProblemFile f;
  f.n = p.n;
  f.factors = p.factors;
  for (const auto& d : p.data) f.data.push_back(d.str());
  return f;
}

std::string ProblemFile::to_json() const {
  json j;
  j["format"] = format;
  j["n"] = n;
  j["factors"] = json::array();
  for (const auto& fac : factors) {
    json jf;
    jf["a"] = fac.a.str();
    jf["a0"] = fac.a0.str();
    jf["coeffs"] = json::array();
    for (const auto& c : fac.coeffs) jf["coeffs"].push_back(c.str());
    jf["multiplicity"] = fac.multiplicity;
    j["factors"].push_back(std::move(jf));
  }
  j["data"] = data;
  if (operator_expr) j["operator"] = *operator_expr;
  if (expected_solution) j["expected_solution"] = *expected_solution;
  if (truncation) j["truncation"] = *truncation;
  if (grid) {
    json jg;
    jg["ranges"] = json::array();
    for (const auto& [lo, hi] : grid->ranges) jg["ranges"].push_back(json::array({lo, hi}));
    jg["steps"] = grid->steps;
    j["grid"] = std::move(jg);
  }
  return j.dump(2);
}

ProblemFile ProblemFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

ComposeFile ComposeFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw FileFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (j.value("format", 0) != 1) throw FileFormatError("unsupported format version");
  if (!j.contains("compose") || !j.at("compose").is_array() || j.at("compose").size() != 2)
    throw FileFormatError("compose file needs a two-element 'compose' array");
  const auto base = std::filesystem::path(path).parent_path();
  ComposeFile c;
  c.outer_path = (base / j.at("compose")[0].get<std::string>()).string();
  c.inner_path = (base / j.at("compose")[1].get<std::string>()).string();
  return c;
}

}  // namespace greenop
