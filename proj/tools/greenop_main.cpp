// Command line front end: solve / verify / eval / compose on problem files.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input file,
// 3 solver precondition failure.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "greenop/errors.hpp"
#include "greenop/oracle.hpp"
#include "greenop/parse.hpp"
#include "greenop/problem_io.hpp"

using namespace greenop;
using nlohmann::json;

namespace {

struct CommonOpts {
  int truncation = 8;
  std::uint64_t seed = 0x5eed;
  long budget = 1'000'000;
  std::string format = "text";
};

int run_solve(const std::string& path, const CommonOpts& common) {
  ProblemFile file = ProblemFile::load(path);
  CauchyProblem problem = file.to_problem();
  if (file.operator_expr) {
    OperatorExpr t = parse_operator(*file.operator_expr);
    if (!verify_factorization(t, problem.factors))
      throw InvalidProblemError("factor list does not multiply out to the given operator");
  }
  NormalizeOptions nopts;
  nopts.budget = common.budget;
  CauchySolution sol = solve_cauchy(problem, nopts);
  if (common.format == "json") {
    json j;
    j["u"] = sol.u.str();
    j["H"] = json::array();
    for (std::size_t k = 0; k < sol.state.rows.size(); ++k)
      j["H"].push_back(sol.state.folded_row(k).str());
    j["G"] = sol.signal.op.str();
    j["T"] = sol.T.str();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "u = " << sol.u.str() << "\n";
    for (std::size_t k = 0; k < sol.state.rows.size(); ++k)
      std::cout << "H[" << (k + 1) << "] = " << sol.state.folded_row(k).str() << "\n";
    std::cout << "G = " << sol.signal.op.str() << "\n";
  }
  return 0;
}

int run_verify(const std::string& path, const CommonOpts& common) {
  ProblemFile file = ProblemFile::load(path);
  CauchyProblem problem = file.to_problem();
  if (file.operator_expr) {
    OperatorExpr t = parse_operator(*file.operator_expr);
    if (!verify_factorization(t, problem.factors))
      throw InvalidProblemError("factor list does not multiply out to the given operator");
  }
  NormalizeOptions nopts;
  nopts.budget = common.budget;
  CauchySolution sol = solve_cauchy(problem, nopts);

  VerifyOptions vopts;
  vopts.truncation = file.truncation.value_or(common.truncation);
  vopts.seed = common.seed;
  vopts.budget = common.budget;
  VerificationReport rep = verify_solution(problem, sol, vopts);

  if (file.expected_solution) {
    ExpPoly want = parse_exppoly(*file.expected_solution);
    const bool ok = want == sol.u;
    rep.checks.push_back(
        {"expected_solution", ok, ok ? "" : "solver returned " + sol.u.str()});
  }

  if (common.format == "json") {
    json j;
    j["seed"] = rep.seed;
    j["checks"] = json::array();
    for (const auto& c : rep.checks)
      j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    j["all_pass"] = rep.all_pass();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "seed," << rep.seed << "\n" << rep.to_csv();
    std::cout << (rep.all_pass() ? "result,pass" : "result,fail") << "\n";
  }
  return rep.all_pass() ? 0 : 1;
}

int run_eval(const std::string& path, const CommonOpts& common) {
  ProblemFile file = ProblemFile::load(path);
  CauchyProblem problem = file.to_problem();
  NormalizeOptions nopts;
  nopts.budget = common.budget;
  CauchySolution sol = solve_cauchy(problem, nopts);

  std::string header = "t";
  for (int v = 1; v <= problem.n; ++v) header += ",x" + std::to_string(v);
  header += ",re,im";
  std::cout << header << "\n";
  if (!file.grid) return 0;
  if (static_cast<int>(file.grid->ranges.size()) != problem.n + 1)
    throw InvalidProblemError("grid must cover t and every space variable");
  char buf[64];
  for (const auto& p : file.grid->points()) {
    std::string line;
    for (double x : p) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      line += buf;
      line += ",";
    }
    const auto v = sol.u.eval(p);
    std::snprintf(buf, sizeof buf, "%.17g", v.real());
    line += buf;
    line += ",";
    std::snprintf(buf, sizeof buf, "%.17g", v.imag());
    line += buf;
    std::cout << line << "\n";
  }
  return 0;
}

int run_compose(const std::string& path, const std::string& output, const CommonOpts& common) {
  ComposeFile req = ComposeFile::load(path);
  CauchyProblem outer = ProblemFile::load(req.outer_path).to_problem();
  CauchyProblem inner = ProblemFile::load(req.inner_path).to_problem();
  CauchyProblem product = compose_cauchy(outer, inner);
  ProblemFile out = ProblemFile::from_problem(product);

  NormalizeOptions nopts;
  nopts.budget = common.budget;
  CauchySolution sol = solve_cauchy(product, nopts);

  if (!output.empty()) {
    std::ofstream f(output);
    if (!f) throw InvalidProblemError("cannot write file: " + output);
    f << out.to_json() << "\n";
  }
  if (common.format == "json") {
    json j = json::parse(out.to_json());
    j["G"] = sol.signal.op.str();
    j["H"] = json::array();
    for (std::size_t k = 0; k < sol.state.rows.size(); ++k)
      j["H"].push_back(sol.state.folded_row(k).str());
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << out.to_json() << "\n";
    for (std::size_t k = 0; k < sol.state.rows.size(); ++k)
      std::cout << "H[" << (k + 1) << "] = " << sol.state.folded_row(k).str() << "\n";
    std::cout << "G = " << sol.signal.op.str() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic solver for Cauchy problems of completely reducible "
               "constant-coefficient linear PDEs"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts common;
  app.add_option("--truncation", common.truncation, "series oracle truncation order");
  app.add_option("--seed", common.seed, "seed for randomized probing");
  app.add_option("--budget", common.budget, "rewrite step budget");
  app.add_option("--format", common.format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string path, output;
  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", path, "problem file (JSON)")->required();
  auto* verify = app.add_subcommand("verify", "run the verification battery");
  verify->add_option("file", path, "problem file (JSON)")->required();
  auto* eval = app.add_subcommand("eval", "evaluate the solution on the grid (CSV)");
  eval->add_option("file", path, "problem file (JSON)")->required();
  auto* compose = app.add_subcommand("compose", "compose two problem files");
  compose->add_option("file", path, "compose request file (JSON)")->required();
  compose->add_option("-o,--output", output, "write the product problem file here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(path, common);
    if (verify->parsed()) return run_verify(path, common);
    if (eval->parsed()) return run_eval(path, common);
    if (compose->parsed()) return run_compose(path, output, common);
  } catch (const InvalidProblemError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NotRegularError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
