#ifndef GREENOP_PROBLEM_IO_HPP
#define GREENOP_PROBLEM_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "greenop/cauchy.hpp"

namespace greenop {

/// Rectangular evaluation grid: one (lo, hi) range and a sample count per
/// variable, ordered t, x1, ..., xn. A zero count yields an empty grid.
struct GridSpec {
  std::vector<std::pair<double, double>> ranges;
  std::vector<int> steps;

  std::vector<std::vector<double>> points() const;
};

/// On-disk problem description (JSON, "format": 1). Scalars are strings in
/// the compact Gaussian-rational form, e.g. "3/2+1/2i"; expression payloads
/// use the expression grammar.
struct ProblemFile {
  int format = 1;
  int n = 0;
  std::vector<FirstOrderFactor> factors;
  std::vector<std::string> data;
  std::optional<std::string> operator_expr;     // cross-checked against the factors
  std::optional<std::string> expected_solution;
  std::optional<GridSpec> grid;
  std::optional<int> truncation;

  CauchyProblem to_problem() const;
  std::string to_json() const;

  static ProblemFile from_json(const std::string& text);
  static ProblemFile from_problem(const CauchyProblem& p);
  static ProblemFile load(const std::string& path);
};

/// A compose request: {"format": 1, "compose": ["outer.json", "inner.json"]}
/// with paths resolved relative to the request file.
struct ComposeFile {
  std::string outer_path;
  std::string inner_path;

  static ComposeFile load(const std::string& path);
};

}  // namespace greenop

#endif
