#ifndef GREENOP_BOUNDARY_HPP
#define GREENOP_BOUNDARY_HPP

#include <optional>
#include <vector>

#include "greenop/opexpr.hpp"

namespace greenop {

/// A boundary condition: apply `word` (built from Diff/Int/MulBy generators),
/// then evaluate through the terminal substitution `eval_at`. A parametric
/// family keeps some variables symbolic (e.g. t -> 0 with x symbolic); a
/// point functional kills every variable and yields a constant.
struct BoundaryFunctional {
  OperatorExpr word = OperatorExpr::identity();
  LinearSubst eval_at;

  ExpPoly apply(const ExpPoly& u) const;
  /// The functional as a ring element: Subst(eval_at) . word.
  OperatorExpr as_operator() const;
  /// Composition with a differential operator on the right (beta o T).
  BoundaryFunctional after(const OperatorExpr& t) const;

  /// u |-> (D_t^k u)(0, x) keeping the space variables symbolic.
  static BoundaryFunctional cauchy_trace(int t_derivatives);
  /// u |-> u(p), a point evaluation.
  static BoundaryFunctional point_eval(const std::vector<Complex>& p);

  bool operator==(const BoundaryFunctional& o) const;
};

/// Ordered family of functionals; the order fixes the coordinates of
/// boundary data tuples.
struct BoundaryBasis {
  std::vector<BoundaryFunctional> functionals;

  std::size_t size() const { return functionals.size(); }
  /// Cauchy basis of order m: traces of u, u_t, ..., D_t^{m-1} u at t = 0.
  static BoundaryBasis cauchy(int order);
  /// Returns the order m when this is a Cauchy basis, nullopt otherwise.
  std::optional<int> cauchy_order() const;
};

/// Coordinates of boundary data relative to a basis, one exponential
/// polynomial per functional (a constant for point functionals).
struct BoundaryData {
  std::vector<ExpPoly> coords;

  bool operator==(const BoundaryData& o) const { return coords == o.coords; }
  static BoundaryData zero(std::size_t arity) { return {std::vector<ExpPoly>(arity)}; }
};

/// A differential operator together with its boundary conditions.
struct BoundaryProblem {
  OperatorExpr T;  // no Int generators
  BoundaryBasis basis;
};

/// Solves the semi-homogeneous problem: rows[k] applied to the lifted k-th
/// data coordinate, summed. `lift` embeds the data variable space into the
/// solution variable space (identity when coordinates already agree).
struct StateOperator {
  std::vector<OperatorExpr> rows;
  LinearSubst lift;

  ExpPoly apply(const BoundaryData& data) const;
  /// rows[k] with the lift folded in as a trailing substitution.
  OperatorExpr folded_row(std::size_t k) const;
};

/// Solves the semi-inhomogeneous problem: T o op = 1 and all boundary values
/// of op(f) vanish.
struct SignalOperator {
  OperatorExpr op;

  ExpPoly apply(const ExpPoly& f) const { return op.apply(f); }
};

/// A boundary problem bundled with both transfer operators.
struct SolvedProblem {
  BoundaryProblem problem;
  SignalOperator signal;
  StateOperator state;

  /// Superposition: solution of the fully inhomogeneous problem.
  ExpPoly solve(const ExpPoly& forcing, const BoundaryData& data) const;
};

/// The trace map: coordinates of u relative to the basis.
BoundaryData trace(const BoundaryBasis& basis, const ExpPoly& u);

/// Right inverse of the trace for a Cauchy basis:
/// (f_1, ..., f_m) |-> f_1 + t f_2 + ... + t^{m-1}/(m-1)! f_m.
ExpPoly taylor_interpolator(const BoundaryBasis& basis, const BoundaryData& data);

/// Kernel projector P = H o trc as a ring element; idempotent, image in
/// ker T, kernel the admissible functions.
OperatorExpr kernel_projector(const StateOperator& state, const BoundaryBasis& basis,
                              const NormalizeOptions& opts = {});

/// G = (1 - P) o rinv for any right inverse rinv of T.
SignalOperator signal_from_projector(const OperatorExpr& projector, const OperatorExpr& rinv,
                                     const NormalizeOptions& opts = {});

/// H = P o interpolator, rows acting on the coordinates of a Cauchy basis.
StateOperator state_from_projector(const OperatorExpr& projector, const BoundaryBasis& basis,
                                   const NormalizeOptions& opts = {});

/// Product of boundary problems:
///   (T, B)(T~, B~) = (T T~, B T~ + B~)
/// with signal operator G~ G and state operator
///   (B, B~) |-> G~ H(B) + H~(B~),
/// the first block of composite data being coordinates relative to the
/// transformed conditions beta o T~ (supplied as a separate tuple).
SolvedProblem compose_problems(const SolvedProblem& outer, const SolvedProblem& inner,
                               const NormalizeOptions& opts = {});

/// Evaluation matrix [beta_i(u_j)] of point functionals against a kernel
/// basis; every entry must come out constant.
std::vector<std::vector<Complex>> evaluation_matrix(const std::vector<ExpPoly>& kernel_basis,
                                                    const BoundaryBasis& basis);

/// Finite-dimensional projector onto span(kernel_basis) along the functions
/// annihilated by the basis: P u = sum_j c_j u_j with c = M^-1 (beta_i(u)).
/// Throws NotRegularError when the evaluation matrix is singular.
OperatorExpr lode_projector(const std::vector<ExpPoly>& kernel_basis, const BoundaryBasis& basis,
                            const NormalizeOptions& opts = {});

}  // namespace greenop

#endif
