#ifndef GREENOP_ORACLE_HPP
#define GREENOP_ORACLE_HPP

#include <string>
#include <vector>

#include "greenop/cauchy.hpp"

namespace greenop {

/// Truncated power-series solution around the origin; keys mix the t-degree
/// (variable 0) with the space degrees. Exact coefficients, no zeros stored.
struct SeriesSolution {
  std::map<Monomial, Complex, MonomialOrder> coeffs;
  int truncation = 0;

  Complex at(const Monomial& m) const;
  std::complex<double> eval(std::span<const double> point) const;
  bool operator==(const SeriesSolution& o) const = default;
};

enum class EliminationOrder {
  /// Fill coefficients t-degree by t-degree, all space degrees per level.
  TDegreeFirst,
  /// Fill by total degree, increasing t-degree within each level.
  TotalDegreeFirst,
};

/// Degree-by-degree power-series solve of T u = 0 with the data tuple
/// seeding the t-degrees below m. Requires the symbol in lead form with
/// coefficient 1 on D_t^m; throws InvalidProblemError otherwise. Independent
/// of the closed-form pipeline: only ExpPoly::taylor on the data is shared.
SeriesSolution series_solve(const DiffPoly& t_sym, int m, const std::vector<ExpPoly>& data,
                            int truncation,
                            EliminationOrder order = EliminationOrder::TDegreeFirst);

/// Series solve for a factored problem (the symbol is expanded and scaled
/// monic internally).
SeriesSolution series_solve(const CauchyProblem& problem, int truncation,
                            EliminationOrder order = EliminationOrder::TDegreeFirst);

/// T applied to u; the caller asserts the result is zero.
ExpPoly residual_check(const OperatorExpr& t, const ExpPoly& u);

/// Classical closed form for u_tt = u_xx with u(0,x) = f, u_t(0,x) = g:
///   (f(x+t) + f(x-t))/2 + (F(x+t) - F(x-t))/2,  F = integral of g from 0.
/// f and g are univariate in x1. Built only from substitution and
/// integration, as an independent reference.
ExpPoly dalembert_reference(const ExpPoly& f, const ExpPoly& g);

struct GridReport {
  double max_abs_err = 0.0;
  std::size_t points = 0;
  double tolerance = 0.0;
  bool pass = true;
  std::vector<double> worst_point;
};

/// Max |u - v| over the points (each point lists variable values t, x1, ...).
GridReport grid_compare(const ExpPoly& u, const ExpPoly& v,
                        const std::vector<std::vector<double>>& points, double tol);
GridReport grid_compare(const ExpPoly& u, const SeriesSolution& v,
                        const std::vector<std::vector<double>>& points, double tol);

/// One line of a verification report.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string witness;  // empty when passing
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;

  bool all_pass() const;
  /// "check,status,witness" CSV lines (header included).
  std::string to_csv() const;
};

struct VerifyOptions {
  int truncation = 8;
  std::uint64_t seed = 0x5eed;
  long budget = 1'000'000;
  int probe_samples = 50;
};

/// Runs the full verification battery for a solved Cauchy problem: residual,
/// trace, series-oracle agreement, and the operator identities T H = 0,
/// T G = 1, trc G = 0 (by normalization where it terminates within budget,
/// and always by probing).
VerificationReport verify_solution(const CauchyProblem& problem, const CauchySolution& sol,
                                   const VerifyOptions& opts = {});

}  // namespace greenop

#endif
