#ifndef GREENOP_CAUCHY_HPP
#define GREENOP_CAUCHY_HPP

#include <optional>
#include <utility>
#include <vector>

#include "greenop/boundary.hpp"

namespace greenop {

/// Commutative polynomial in the derivations: monomial over variable indices
/// (0 = D_t) mapped to its coefficient. Constant-coefficient differential
/// operators commute, so this is the faithful symbol of a Diff-only
/// OperatorExpr.
using DiffPoly = std::map<Monomial, Complex, MonomialOrder>;

DiffPoly diffpoly_add(DiffPoly a, const DiffPoly& b);
DiffPoly diffpoly_mul(const DiffPoly& a, const DiffPoly& b);
DiffPoly diffpoly_scaled(const DiffPoly& a, const Complex& c);
DiffPoly diffpoly_pow(const DiffPoly& a, int n);
int diffpoly_degree(const DiffPoly& a);
/// Collapses a Diff-only operator expression to its symbol.
/// Throws InvalidProblemError when another generator kind occurs.
DiffPoly diffpoly_from_operator(const OperatorExpr& t);
OperatorExpr operator_from_diffpoly(const DiffPoly& p);
/// Substitutes D_i -> sum_j B[j,i] D_j (the conjugation action of the
/// coordinate change ybar = B y on constant-coefficient symbols).
DiffPoly diffpoly_change_coords(const DiffPoly& p, const LinearSubst& b);

/// One linear factor a + a0 D_t + a1 D_1 + ... + an D_n with multiplicity.
/// a0 must be nonzero for the solver; zero space coefficients are allowed
/// and simply leave those variables untouched.
struct FirstOrderFactor {
  Complex a;
  Complex a0;
  std::vector<Complex> coeffs;
  int multiplicity = 1;

  int n() const { return static_cast<int>(coeffs.size()); }
  DiffPoly symbol() const;  // single power, multiplicity ignored
  OperatorExpr as_operator() const;
  bool same_factor(const FirstOrderFactor& o) const;
};

/// The Cauchy problem for a completely reducible operator: the product of
/// the factors (with multiplicities, leftmost outermost), with data[i]
/// prescribing D_t^i u at t = 0 (so data[0] = u(0, x)).
struct CauchyProblem {
  int n = 0;
  std::vector<FirstOrderFactor> factors;
  std::vector<ExpPoly> data;

  int order() const;
};

/// True iff T is (up to a scalar) D_t^m + T~ with deg(T~, t) < m and
/// deg(T~) <= m.
bool check_ck_form(const OperatorExpr& t, int m);
bool check_ck_form(const DiffPoly& sym, int m);

/// Finds a linear change of coordinates that brings a constant-coefficient
/// operator to the above form, returned together with the transformed
/// operator (normalized to leading coefficient 1). The identity is tried
/// first, then tbar = t + c.x over small integer tuples c.
std::pair<OperatorExpr, LinearSubst> ck_normalize(const OperatorExpr& t);

/// Expands the factor list (with multiplicities) and compares with T up to a
/// nonzero scalar.
bool verify_factorization(const OperatorExpr& t, const std::vector<FirstOrderFactor>& factors);

/// Ordering of the nonzero-coefficient space variables such that every
/// proper prefix sum a0 + a_{p1} + ... is nonzero. Lexicographically first
/// valid permutation, or nullopt when none exists (possible for special
/// patterns such as coefficients (1,-1,-1)).
std::optional<std::vector<VarIndex>> order_variables(const FirstOrderFactor& f);

/// Characteristic change of variables for the ordered factor:
///   tbar = t,  xbar_i = t + x_{p1} + ... + x_{p(k-1)} - s_k x_i / a_i
/// with s_k the k-th prefix sum. Returns (Z, Z inverse); the product is
/// verified to be the identity.
std::pair<LinearSubst, LinearSubst> charvar_matrix(const FirstOrderFactor& f,
                                                   const std::vector<VarIndex>& perm);

/// State operator of T u = 0, u(0,x) = f(x):  f |-> e^{-at/a0} f(char(t,x)).
StateOperator first_order_state(const FirstOrderFactor& f);

/// Right inverse of the factor (zero initial value at t = 0):
///   (1/a0) Subst(Z) mul(e^{-at/a0}) A_t mul(e^{at/a0}) Subst(Z~).
SignalOperator first_order_rightinv(const FirstOrderFactor& f);

/// Kernel generators of T^m: the i-th maps c(x) to
/// t^{i-1} e^{-at/a0} / (i-1)! * c(xbar). Requires a valid variable ordering.
std::vector<OperatorExpr> general_solution_power(const FirstOrderFactor& f, int m);

/// Bundles a first-order factor as a solved boundary problem with the
/// one-functional Cauchy basis.
SolvedProblem first_order_problem(const FirstOrderFactor& f);

struct CauchySolution {
  ExpPoly u;
  StateOperator state;    // rows act on the raw Cauchy data tuple
  SignalOperator signal;  // right inverse with zero trace
  OperatorExpr T;
  BoundaryBasis basis;
};

/// End-to-end solve: composes the first-order problems (leftmost factor
/// outermost), returning the solution together with the full state and
/// signal operators. The solution is checked internally against the
/// equation and the data.
CauchySolution solve_cauchy(const CauchyProblem& problem, const NormalizeOptions& opts = {});

/// g = (D_t^extra T~ u)(0,x) expressed through the Cauchy data of u, where
/// T~ has symbol `sym`: every D_t^p D^gamma monomial pulls data[extra+p]
/// through the space derivatives gamma.
ExpPoly apply_symbol_to_cauchy_data(const DiffPoly& sym, const std::vector<ExpPoly>& data,
                                    int extra);

/// Merges two Cauchy problems into the problem for the product operator
/// (outer factors first, equal factors pooled into multiplicities) and
/// converts the pair of data tuples into the natural data of the product.
CauchyProblem compose_cauchy(const CauchyProblem& outer, const CauchyProblem& inner);

}  // namespace greenop

#endif
