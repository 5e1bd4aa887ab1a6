#include "greenop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "greenop/errors.hpp"

namespace greenop {

Complex SeriesSolution::at(const Monomial& m) const {
  auto it = coeffs.find(m);
  return it == coeffs.end() ? Complex(0) : it->second;
}

std::complex<double> SeriesSolution::eval(std::span<const double> point) const {
  std::complex<double> out(0.0, 0.0);
  for (const auto& [m, c] : coeffs) {
    std::complex<double> v = c.to_double();
    for (const auto& [var, e] : m) {
      if (var >= static_cast<VarIndex>(point.size()))
        throw DimensionError("evaluation point does not cover all variables");
      v *= std::pow(point[var], e);
    }
    out += v;
  }
  return out;
}

namespace {

// all monomials in variables 1..n of total degree exactly d
void space_monomials(int n, int d, int from, Monomial& acc,
                     const std::function<void(const Monomial&)>& sink) {
  if (d == 0) {
    sink(acc);
    return;
  }
  if (from > n) return;
  for (int e = d; e >= 1; --e) {
    acc[from] = e;
    space_monomials(n, d - e, from + 1, acc, sink);
    acc.erase(from);
  }
  space_monomials(n, d, from + 1, acc, sink);
}

struct SeriesWork {
  const DiffPoly& sym;
  int m;
  int n;
  int truncation;
  std::map<Monomial, Complex, MonomialOrder> coeffs;

  Complex at(const Monomial& mo) const {
    auto it = coeffs.find(mo);
    return it == coeffs.end() ? Complex(0) : it->second;
  }

  // Determines the coefficient of t^{k+m} x^alpha from the equation
  // coefficient at (k, alpha): the lead monomial D_t^m contributes
  // u_{(k+m, alpha)} (k+m)!/k!, everything else has lower t-degree.
  void eliminate(int k, const Monomial& alpha) {
    Complex acc(0);
    for (const auto& [mono, c] : sym) {
      auto t = mono.find(0);
      const int p = (t == mono.end()) ? 0 : t->second;
      if (p == m && mono.size() == 1) continue;  // the lead monomial
      Monomial key = alpha;
      Rational ff(1);
      for (const auto& [v, e] : mono) {
        if (v == 0) continue;
        key[v] += e;
      }
      key[0] = k + p;
      if (key[0] == 0) key.erase(0);
      // falling factorials from differentiating the series term
      for (const auto& [v, e] : mono) {
        const int deg = (v == 0) ? k + p : key[v];
        for (int j = 0; j < e; ++j) ff *= deg - j;
      }
      const Complex uc = at(key);
      if (uc.is_zero()) continue;
      acc += c * uc * Complex(ff);
    }
    // lead factor (k+m)!/k!
    Rational lead(1);
    for (int j = 0; j < m; ++j) lead *= k + m - j;
    Complex value = -(acc / Complex(lead));
    if (!value.is_zero()) {
      Monomial key = alpha;
      key[0] = k + m;
      coeffs.emplace(std::move(key), std::move(value));
    }
  }
};

}  // namespace

SeriesSolution series_solve(const DiffPoly& t_sym, int m, const std::vector<ExpPoly>& data,
                            int truncation, EliminationOrder order) {
  if (!check_ck_form(t_sym, m))
    throw InvalidProblemError("series oracle requires the operator in lead form");
  auto lead = t_sym.find(Monomial{{0, m}});
  if (lead == t_sym.end() || !lead->second.is_one())
    throw InvalidProblemError("series oracle requires leading coefficient 1");
  if (static_cast<int>(data.size()) != m)
    throw InvalidProblemError("series oracle: data arity does not match the order");

  int n = 0;
  for (const auto& [mono, c] : t_sym)
    if (!mono.empty()) n = std::max(n, mono.rbegin()->first);
  for (const auto& d : data) n = std::max(n, d.max_var());

  SeriesWork work{t_sym, m, n, truncation, {}};

  // seed: u_{(k, alpha)} = [data_k]_alpha / k!
  for (int k = 0; k < m && k <= truncation; ++k) {
    const Complex kfac_inv = Complex(factorial(k)).inverse();
    for (const auto& [mono, c] : data[k].taylor(truncation - k)) {
      Monomial key = mono;
      if (k > 0) key[0] = k;
      Complex v = c * kfac_inv;
      if (!v.is_zero()) work.coeffs.emplace(std::move(key), std::move(v));
    }
  }

  auto run_level = [&](int k, int max_space_degree) {
    for (int d = 0; d <= max_space_degree; ++d) {
      Monomial acc;
      space_monomials(n, d, 1, acc, [&](const Monomial& alpha) { work.eliminate(k, alpha); });
    }
  };

  if (order == EliminationOrder::TDegreeFirst) {
    for (int k = 0; k + m <= truncation; ++k) run_level(k, truncation - (k + m));
  } else {
    // by total degree of the produced coefficient t^{k+m} x^alpha
    for (int total = m; total <= truncation; ++total)
      for (int k = 0; k + m <= total; ++k) {
        const int d = total - (k + m);
        Monomial acc;
        space_monomials(n, d, 1, acc, [&](const Monomial& alpha) { work.eliminate(k, alpha); });
      }
  }
  return SeriesSolution{std::move(work.coeffs), truncation};
}

SeriesSolution series_solve(const CauchyProblem& problem, int truncation,
                            EliminationOrder order) {
  DiffPoly sym{{Monomial{}, Complex(1)}};
  for (const auto& f : problem.factors)
    sym = diffpoly_mul(sym, diffpoly_pow(f.symbol(), f.multiplicity));
  const int m = problem.order();
  auto lead = sym.find(Monomial{{0, m}});
  if (lead == sym.end() || lead->second.is_zero())
    throw InvalidProblemError("factored operator is not in lead form");
  sym = diffpoly_scaled(sym, lead->second.inverse());
  return series_solve(sym, m, problem.data, truncation, order);
}

ExpPoly residual_check(const OperatorExpr& t, const ExpPoly& u) { return t.apply(u); }

ExpPoly dalembert_reference(const ExpPoly& f, const ExpPoly& g) {
  if (f.depends_on(0) || g.depends_on(0))
    throw InvalidProblemError("d'Alembert data must be functions of x1 only");
  LinearSubst plus;  // x1 -> x1 + t
  plus.set(0, 0, Complex(1));
  plus.set(1, 0, Complex(1));
  plus.set(1, 1, Complex(1));
  plus.canonicalize();
  LinearSubst minus;  // x1 -> x1 - t
  minus.set(0, 0, Complex(1));
  minus.set(1, 0, Complex(-1));
  minus.set(1, 1, Complex(1));
  minus.canonicalize();
  const Complex half(1, 2);
  ExpPoly big = g.integrate(1);
  return (f.subst(plus) + f.subst(minus)).scaled(half) +
         (big.subst(plus) - big.subst(minus)).scaled(half);
}

namespace {

template <typename Other>
GridReport grid_compare_impl(const ExpPoly& u, const Other& v,
                             const std::vector<std::vector<double>>& points, double tol) {
  GridReport r;
  r.tolerance = tol;
  for (const auto& p : points) {
    const std::complex<double> a = u.eval(p);
    const std::complex<double> b = v.eval(p);
    const double err = std::abs(a - b);
    if (err > r.max_abs_err) {
      r.max_abs_err = err;
      r.worst_point = p;
    }
    ++r.points;
  }
  r.pass = r.max_abs_err <= tol;
  return r;
}

}  // namespace

GridReport grid_compare(const ExpPoly& u, const ExpPoly& v,
                        const std::vector<std::vector<double>>& points, double tol) {
  return grid_compare_impl(u, v, points, tol);
}

GridReport grid_compare(const ExpPoly& u, const SeriesSolution& v,
                        const std::vector<std::vector<double>>& points, double tol) {
  return grid_compare_impl(u, v, points, tol);
}

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerificationReport::to_csv() const {
  std::string out = "check,status,witness\n";
  for (const auto& c : checks) {
    std::string w = c.witness;
    for (auto& ch : w)
      if (ch == ',' || ch == '\n') ch = ';';
    out += c.name + "," + (c.pass ? "pass" : "fail") + "," + w + "\n";
  }
  return out;
}

VerificationReport verify_solution(const CauchyProblem& problem, const CauchySolution& sol,
                                   const VerifyOptions& opts) {
  VerificationReport rep;
  rep.seed = opts.seed;
  NormalizeOptions nopts;
  nopts.budget = opts.budget;

  auto add = [&rep](std::string name, bool pass, std::string witness = "") {
    rep.checks.push_back({std::move(name), pass, pass ? "" : std::move(witness)});
  };

  ExpPoly residual = sol.T.apply(sol.u);
  add("residual_zero", residual.is_zero(), "T u = " + residual.str());

  BoundaryData tr = trace(sol.basis, sol.u);
  bool trace_ok = tr.coords.size() == problem.data.size();
  std::string tw;
  for (std::size_t i = 0; trace_ok && i < tr.coords.size(); ++i)
    if (tr.coords[i] != problem.data[i]) {
      trace_ok = false;
      tw = "slot " + std::to_string(i) + ": " + tr.coords[i].str();
    }
  add("trace_matches_data", trace_ok, tw);

  {
    SeriesSolution series = series_solve(problem, opts.truncation);
    auto direct = sol.u.taylor(opts.truncation);
    const bool agree = direct == series.coeffs;
    add("series_oracle_agrees", agree, "coefficient mismatch at truncation " +
                                           std::to_string(opts.truncation));
  }

  // Operator identities, first by rewriting, then by probing. The probe
  // applies the factors one after the other, which is much cheaper than
  // acting with the expanded composition.
  const OperatorExpr id = OperatorExpr::identity();
  const int vars = problem.n + 1;
  auto op_check = [&](const std::string& name, const OperatorExpr& lhs_outer,
                      const OperatorExpr& lhs_inner, const OperatorExpr& want) {
    bool normal_ok = false;
    bool budget_hit = false;
    try {
      normal_ok = normalize(lhs_outer * lhs_inner, nopts) == want;
    } catch (const BudgetError&) {
      budget_hit = true;
    }
    bool probe_ok = true;
    for (int j = 0; j < opts.probe_samples && probe_ok; ++j) {
      ExpPoly u = probe_monomial(opts.seed, j, vars);
      probe_ok = lhs_outer.apply(lhs_inner.apply(u)) == want.apply(u);
    }
    std::string note = budget_hit ? " (rewrite budget exhausted, probing only)" : "";
    add(name + (normal_ok ? "" : note), normal_ok || probe_ok,
        normal_ok ? "" : "operator identity failed");
  };
  for (std::size_t k = 0; k < sol.state.rows.size(); ++k)
    op_check("operator_T_H" + std::to_string(k + 1) + "_zero", sol.T, sol.state.folded_row(k),
             OperatorExpr::zero());
  op_check("operator_T_G_identity", sol.T, sol.signal.op, id);
  for (std::size_t k = 0; k < sol.basis.functionals.size(); ++k)
    op_check("operator_trace" + std::to_string(k + 1) + "_G_zero",
             sol.basis.functionals[k].as_operator(), sol.signal.op, OperatorExpr::zero());
  // trc_j o H_k is the data identity on the diagonal (evaluation at t = 0,
  // which fixes every t-free datum) and vanishes off it
  const OperatorExpr data_id = OperatorExpr::subst(LinearSubst::eval_at_zero(0));
  for (std::size_t j = 0; j < sol.basis.functionals.size(); ++j)
    for (std::size_t k = 0; k < sol.state.rows.size(); ++k)
      op_check("operator_trace" + std::to_string(j + 1) + "_H" + std::to_string(k + 1),
               sol.basis.functionals[j].as_operator(), sol.state.folded_row(k),
               j == k ? data_id : OperatorExpr::zero());

  return rep;
}

}  // namespace greenop
