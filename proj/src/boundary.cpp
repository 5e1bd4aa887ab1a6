#include "greenop/boundary.hpp"

#include "greenop/errors.hpp"

namespace greenop {

ExpPoly BoundaryFunctional::apply(const ExpPoly& u) const {
  return word.apply(u).subst(eval_at);
}

OperatorExpr BoundaryFunctional::as_operator() const {
  return OperatorExpr::subst(eval_at) * word;
}

BoundaryFunctional BoundaryFunctional::after(const OperatorExpr& t) const {
  return {word * t, eval_at};
}

BoundaryFunctional BoundaryFunctional::cauchy_trace(int t_derivatives) {
  BoundaryFunctional f;
  f.word = OperatorExpr::diff(0).pow(t_derivatives);
  f.eval_at = LinearSubst::eval_at_zero(0);
  return f;
}

BoundaryFunctional BoundaryFunctional::point_eval(const std::vector<Complex>& p) {
  BoundaryFunctional f;
  f.eval_at = LinearSubst::point(p);
  return f;
}

bool BoundaryFunctional::operator==(const BoundaryFunctional& o) const {
  return word == o.word && eval_at == o.eval_at;
}

BoundaryBasis BoundaryBasis::cauchy(int order) {
  BoundaryBasis b;
  for (int k = 0; k < order; ++k) b.functionals.push_back(BoundaryFunctional::cauchy_trace(k));
  return b;
}

std::optional<int> BoundaryBasis::cauchy_order() const {
  const LinearSubst e0 = LinearSubst::eval_at_zero(0);
  for (std::size_t k = 0; k < functionals.size(); ++k) {
    const auto& f = functionals[k];
    if (f.eval_at != e0) return std::nullopt;
    if (f.word != OperatorExpr::diff(0).pow(static_cast<int>(k))) return std::nullopt;
  }
  if (functionals.empty()) return std::nullopt;
  return static_cast<int>(functionals.size());
}

ExpPoly StateOperator::apply(const BoundaryData& data) const {
  if (data.coords.size() != rows.size())
    throw DimensionError("boundary data arity does not match the state operator");
  ExpPoly out;
  for (std::size_t k = 0; k < rows.size(); ++k)
    out += rows[k].apply(data.coords[k].subst(lift));
  return out;
}

OperatorExpr StateOperator::folded_row(std::size_t k) const {
  if (lift.is_identity()) return rows[k];
  return normalize(rows[k] * OperatorExpr::subst(lift));
}

ExpPoly SolvedProblem::solve(const ExpPoly& forcing, const BoundaryData& data) const {
  return signal.apply(forcing) + state.apply(data);
}

BoundaryData trace(const BoundaryBasis& basis, const ExpPoly& u) {
  BoundaryData out;
  out.coords.reserve(basis.size());
  for (const auto& f : basis.functionals) out.coords.push_back(f.apply(u));
  return out;
}

ExpPoly taylor_interpolator(const BoundaryBasis& basis, const BoundaryData& data) {
  auto order = basis.cauchy_order();
  if (!order) throw InvalidProblemError("interpolator requires a Cauchy-type basis");
  if (data.coords.size() != basis.size())
    throw DimensionError("boundary data arity does not match the basis");
  ExpPoly out;
  for (int k = 0; k < *order; ++k) {
    if (data.coords[k].depends_on(0))
      throw InvalidProblemError("Cauchy data must not involve the lead variable t");
    ExpPoly tk = ExpPoly::monomial({{0, k}}, Complex(factorial(k)).inverse());
    out += tk * data.coords[k];
  }
  return out;
}

OperatorExpr kernel_projector(const StateOperator& state, const BoundaryBasis& basis,
                              const NormalizeOptions& opts) {
  if (state.rows.size() != basis.size())
    throw DimensionError("state operator rows do not match the basis");
  OperatorExpr p;
  for (std::size_t k = 0; k < basis.size(); ++k)
    p += state.folded_row(k) * basis.functionals[k].as_operator();
  return normalize(p, opts);
}

SignalOperator signal_from_projector(const OperatorExpr& projector, const OperatorExpr& rinv,
                                     const NormalizeOptions& opts) {
  OperatorExpr g = rinv - projector * rinv;
  return {normalize(g, opts)};
}

StateOperator state_from_projector(const OperatorExpr& projector, const BoundaryBasis& basis,
                                   const NormalizeOptions& opts) {
  auto order = basis.cauchy_order();
  if (!order) throw InvalidProblemError("state_from_projector requires a Cauchy-type basis");
  StateOperator h;
  for (int k = 0; k < *order; ++k) {
    ExpPoly tk = ExpPoly::monomial({{0, k}}, Complex(factorial(k)).inverse());
    h.rows.push_back(normalize(projector * OperatorExpr::mul(tk), opts));
  }
  return h;
}

SolvedProblem compose_problems(const SolvedProblem& outer, const SolvedProblem& inner,
                               const NormalizeOptions& opts) {
  SolvedProblem out;
  out.problem.T = normalize(outer.problem.T * inner.problem.T, opts);
  // conditions of the outer problem transform by the inner operator
  for (const auto& f : outer.problem.basis.functionals)
    out.problem.basis.functionals.push_back(f.after(inner.problem.T));
  for (const auto& f : inner.problem.basis.functionals)
    out.problem.basis.functionals.push_back(f);
  out.signal.op = normalize(inner.signal.op * outer.signal.op, opts);
  for (std::size_t k = 0; k < outer.state.rows.size(); ++k)
    out.state.rows.push_back(normalize(inner.signal.op * outer.state.folded_row(k), opts));
  for (std::size_t k = 0; k < inner.state.rows.size(); ++k)
    out.state.rows.push_back(inner.state.folded_row(k));
  return out;
}

std::vector<std::vector<Complex>> evaluation_matrix(const std::vector<ExpPoly>& kernel_basis,
                                                    const BoundaryBasis& basis) {
  if (kernel_basis.size() != basis.size())
    throw DimensionError("evaluation matrix must be square: " +
                         std::to_string(basis.size()) + " functionals vs " +
                         std::to_string(kernel_basis.size()) + " kernel elements");
  std::vector<std::vector<Complex>> m(basis.size(), std::vector<Complex>(kernel_basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < kernel_basis.size(); ++j) {
      ExpPoly v = basis.functionals[i].apply(kernel_basis[j]);
      if (!v.is_constant())
        throw InvalidProblemError("evaluation matrix entry is not a constant: " + v.str());
      m[i][j] = v.constant_value();
    }
  return m;
}

OperatorExpr lode_projector(const std::vector<ExpPoly>& kernel_basis, const BoundaryBasis& basis,
                            const NormalizeOptions& opts) {
  auto m = evaluation_matrix(kernel_basis, basis);
  const std::size_t n = kernel_basis.size();
  // columns of the inverse, one linear solve per kernel element
  OperatorExpr p;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = Complex(i == j ? 1 : 0);
    std::vector<Complex> col;
    try {
      // row j of M^-1: solve M^T y = e_j
      std::vector<std::vector<Complex>> mt(n, std::vector<Complex>(n));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) mt[r][c] = m[c][r];
      col = solve_linear_system(std::move(mt), std::move(rhs));
    } catch (const SingularMatrixError&) {
      throw NotRegularError("boundary problem is not regular: singular evaluation matrix");
    }
    OperatorExpr row;
    for (std::size_t i = 0; i < n; ++i)
      row += basis.functionals[i].as_operator().scaled(col[i]);
    p += OperatorExpr::mul(kernel_basis[j]) * row;
  }
  return normalize(p, opts);
}

}  // namespace greenop
