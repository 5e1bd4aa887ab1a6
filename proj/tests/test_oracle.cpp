#include <doctest.h>

#include <cmath>

#include "greenop/errors.hpp"
#include "greenop/oracle.hpp"
#include "greenop/parse.hpp"

#include "support.hpp"

using namespace greenop;
using namespace greenop::testing;

namespace {

ExpPoly ep(const char* s) { return parse_exppoly(s); }

const FirstOrderFactor kTransport{Complex(0), Complex(1), {Complex(2)}, 1};
const FirstOrderFactor kWaveMinus{Complex(0), Complex(1), {Complex(-1)}, 1};
const FirstOrderFactor kWavePlus{Complex(0), Complex(1), {Complex(1)}, 1};

}  // namespace

TEST_CASE("series oracle on the transport problem") {
  CauchyProblem p{1, {kTransport}, {ep("exp(3*x1)")}};
  SeriesSolution s = series_solve(p, 3);
  CHECK(s.coeffs == ep("exp(3*x1 - 6*t)").taylor(3));
}

TEST_CASE("series oracle terminates on polynomial data") {
  CauchyProblem wave{1, {kWaveMinus, kWavePlus}, {ep("x1^2"), ExpPoly()}};
  SeriesSolution s = series_solve(wave, 8);
  CHECK(s.coeffs == ep("x1^2 + t^2").taylor(8));

  CauchyProblem zero{1, {kWaveMinus, kWavePlus}, {ExpPoly(), ExpPoly()}};
  CHECK(series_solve(zero, 8).coeffs.empty());
}

TEST_CASE("series oracle requires the lead form") {
  DiffPoly not_ck{{Monomial{{1, 2}}, Complex(1)}};
  CHECK_THROWS_AS(series_solve(not_ck, 2, {ExpPoly(), ExpPoly()}, 4), InvalidProblemError);
}

TEST_CASE("two elimination orders agree") {
  Rng rng(37);
  for (int k = 0; k < 8; ++k) {
    const int nf = 1 + rng.range(2);
    std::vector<FirstOrderFactor> fs;
    std::vector<ExpPoly> data;
    for (int j = 0; j < nf; ++j) fs.push_back(rand_factor(rng, 1));
    for (int j = 0; j < nf; ++j) data.push_back(rand_poly_x1(rng, 2));
    CauchyProblem p{1, fs, data};
    SeriesSolution a = series_solve(p, 6, EliminationOrder::TDegreeFirst);
    SeriesSolution b = series_solve(p, 6, EliminationOrder::TotalDegreeFirst);
    CHECK(a == b);
  }
}

TEST_CASE("residual check") {
  OperatorExpr wave = OperatorExpr::diff(0).pow(2) - OperatorExpr::diff(1).pow(2);
  CHECK(residual_check(wave, ep("x1^2 + t^2")) == ExpPoly());
  CHECK(residual_check(kTransport.as_operator(), ep("exp(3*x1 - 6*t)")) == ExpPoly());
  CHECK(residual_check(OperatorExpr::diff(0), ep("t")) == ep("1"));
}

TEST_CASE("d'Alembert reference") {
  CHECK(dalembert_reference(ep("x1^2"), ExpPoly()) == ep("x1^2 + t^2"));
  CHECK(dalembert_reference(ExpPoly(), ep("x1")) == ep("t*x1"));
  CHECK(dalembert_reference(ExpPoly(), ExpPoly()) == ExpPoly());
  CHECK_THROWS_AS(dalembert_reference(ep("t"), ExpPoly()), InvalidProblemError);
}

TEST_CASE("solver output matches d'Alembert structurally") {
  Rng rng(41);
  for (int k = 0; k < 10; ++k) {
    ExpPoly f = rand_wave_datum(rng), g = rand_wave_datum(rng);
    CauchyProblem wave{1, {kWaveMinus, kWavePlus}, {f, g}};
    CHECK(solve_cauchy(wave).u == dalembert_reference(f, g));
  }
}

TEST_CASE("grid comparison") {
  ExpPoly u = ep("x1^2 + t^2");
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      pts.push_back({-0.5 + 0.5 * i, -0.5 + 0.5 * j});
  GridReport same = grid_compare(u, u, pts, 0.0);
  CHECK(same.pass);
  CHECK(same.max_abs_err == 0.0);
  CHECK(same.points == 9);

  // truncated series vs the exact solution, tolerance from the remainder of
  // the exponential series at the largest |exponent| on the grid
  CauchyProblem transport{1, {kTransport}, {ep("exp(3*x1)")}};
  SeriesSolution s = series_solve(transport, 8);
  double arg = 0.0;
  for (const auto& p : pts) arg = std::max(arg, std::abs(3 * p[1] - 6 * p[0]));
  double bound = 0.0, term = 1.0;
  for (int k = 1; k <= 8; ++k) term *= arg / k;
  for (int k = 9; k < 40; ++k) {
    term *= arg / k;
    bound += term;
  }
  GridReport rep = grid_compare(solve_cauchy(transport).u, s, pts, bound);
  CHECK(rep.pass);

  // a perturbation of 1e-3 t is seen at t = 1/2
  ExpPoly perturbed = u + ep("t").scaled(Complex(1, 1000));
  GridReport bad = grid_compare(u, perturbed, pts, 1e-4);
  CHECK(!bad.pass);
  CHECK(bad.max_abs_err == doctest::Approx(5e-4));
}

TEST_CASE("verification battery passes for the transport problem") {
  CauchyProblem p{1, {kTransport}, {ep("exp(3*x1)")}};
  CauchySolution sol = solve_cauchy(p);
  VerificationReport rep = verify_solution(p, sol);
  CAPTURE(rep.to_csv());
  CHECK(rep.all_pass());
  CHECK(rep.checks.size() >= 5);
  CHECK(rep.to_csv().find("residual_zero,pass") != std::string::npos);
}

TEST_CASE("verification flags a corrupted solution") {
  CauchyProblem p{1, {kTransport}, {ep("exp(3*x1)")}};
  CauchySolution sol = solve_cauchy(p);
  sol.u += ep("t^2");
  VerificationReport rep = verify_solution(p, sol);
  CHECK(!rep.all_pass());
}

TEST_CASE("operator checks fall back to probing when the budget runs out") {
  CauchyProblem p{1, {kTransport}, {ep("exp(3*x1)")}};
  CauchySolution sol = solve_cauchy(p);
  VerifyOptions opts;
  opts.budget = 1;  // every normalization attempt is cut short
  VerificationReport rep = verify_solution(p, sol, opts);
  CHECK(rep.all_pass());
  bool flagged = false;
  for (const auto& c : rep.checks)
    if (c.name.find("probing only") != std::string::npos) flagged = true;
  CHECK(flagged);
}
