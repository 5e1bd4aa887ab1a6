#include "greenop/cauchy.hpp"

#include <algorithm>
#include <functional>

#include "greenop/errors.hpp"

namespace greenop {

DiffPoly diffpoly_add(DiffPoly a, const DiffPoly& b) {
  for (const auto& [m, c] : b) {
    auto it = a.find(m);
    if (it == a.end()) {
      a.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) a.erase(it);
    }
  }
  return a;
}

DiffPoly diffpoly_mul(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      auto it = r.find(m);
      if (it == r.end()) {
        Complex c = ca * cb;
        if (!c.is_zero()) r.emplace(std::move(m), std::move(c));
      } else {
        it->second += ca * cb;
        if (it->second.is_zero()) r.erase(it);
      }
    }
  return r;
}

DiffPoly diffpoly_scaled(const DiffPoly& a, const Complex& c) {
  DiffPoly r;
  if (c.is_zero()) return r;
  for (const auto& [m, k] : a) r.emplace(m, k * c);
  return r;
}

DiffPoly diffpoly_pow(const DiffPoly& a, int n) {
  DiffPoly r{{Monomial{}, Complex(1)}};
  for (int k = 0; k < n; ++k) r = diffpoly_mul(r, a);
  return r;
}

int diffpoly_degree(const DiffPoly& a) {
  int d = 0;
  for (const auto& [m, c] : a) d = std::max(d, total_degree(m));
  return d;
}

DiffPoly diffpoly_from_operator(const OperatorExpr& t) {
  DiffPoly r;
  for (const auto& [c, w] : t.terms()) {
    Monomial m;
    for (const auto& g : w) {
      if (g.kind() != Generator::Kind::Diff)
        throw InvalidProblemError("expected a differential operator, found " + g.str());
      m[g.var()] += 1;
    }
    auto it = r.find(m);
    if (it == r.end()) {
      r.emplace(std::move(m), c);
    } else {
      it->second += c;
      if (it->second.is_zero()) r.erase(it);
    }
  }
  return r;
}

OperatorExpr operator_from_diffpoly(const DiffPoly& p) {
  OperatorExpr r;
  for (const auto& [m, c] : p) {
    Word w;
    for (const auto& [v, e] : m)
      for (int k = 0; k < e; ++k) w.push_back(Generator::diff(v));
    r += OperatorExpr::from_word(std::move(w), c);
  }
  return r;
}

DiffPoly diffpoly_change_coords(const DiffPoly& p, const LinearSubst& b) {
  DiffPoly r;
  for (const auto& [m, c] : p) {
    DiffPoly term{{Monomial{}, c}};
    for (const auto& [v, e] : m) {
      DiffPoly form;
      const int span = std::max(b.dim(), v + 1);
      for (int j = 0; j < span; ++j) {
        const Complex a = b.entry(j, v);
        if (!a.is_zero()) form.emplace(Monomial{{j, 1}}, a);
      }
      term = diffpoly_mul(term, diffpoly_pow(form, e));
    }
    r = diffpoly_add(std::move(r), term);
  }
  return r;
}

DiffPoly FirstOrderFactor::symbol() const {
  DiffPoly r;
  if (!a.is_zero()) r.emplace(Monomial{}, a);
  if (!a0.is_zero()) r.emplace(Monomial{{0, 1}}, a0);
  for (int i = 0; i < n(); ++i)
    if (!coeffs[i].is_zero()) r.emplace(Monomial{{i + 1, 1}}, coeffs[i]);
  return r;
}

OperatorExpr FirstOrderFactor::as_operator() const { return operator_from_diffpoly(symbol()); }

bool FirstOrderFactor::same_factor(const FirstOrderFactor& o) const {
  if (!(a == o.a && a0 == o.a0)) return false;
  const int m = std::max(n(), o.n());
  for (int i = 0; i < m; ++i) {
    const Complex x = i < n() ? coeffs[i] : Complex(0);
    const Complex y = i < o.n() ? o.coeffs[i] : Complex(0);
    if (x != y) return false;
  }
  return true;
}

int CauchyProblem::order() const {
  int m = 0;
  for (const auto& f : factors) m += f.multiplicity;
  return m;
}

bool check_ck_form(const DiffPoly& sym, int m) {
  const Monomial lead{{0, m}};
  auto it = sym.find(lead);
  if (it == sym.end()) return false;
  const Complex c = it->second;
  if (c.is_zero()) return false;
  for (const auto& [mono, coeff] : sym) {
    if (mono == lead) continue;
    auto t = mono.find(0);
    const int tdeg = (t == mono.end()) ? 0 : t->second;
    if (tdeg >= m) return false;
    if (total_degree(mono) > m) return false;
  }
  return true;
}

bool check_ck_form(const OperatorExpr& t, int m) {
  return check_ck_form(diffpoly_from_operator(t), m);
}

namespace {

// Enumerates tuples c in {0..cap}^k with max coordinate == cap.
bool next_tuple(std::vector<int>& c, int cap) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] < cap) {
      ++c[i];
      for (std::size_t j = 0; j < i; ++j) c[j] = 0;
      return true;
    }
  }
  return false;
}

}  // namespace

std::pair<OperatorExpr, LinearSubst> ck_normalize(const OperatorExpr& t) {
  DiffPoly sym = diffpoly_from_operator(t);
  if (sym.empty()) throw InvalidProblemError("cannot bring the zero operator to lead form");
  const int m = diffpoly_degree(sym);
  VarIndex nv = 0;
  for (const auto& [mono, c] : sym)
    if (!mono.empty()) nv = std::max(nv, mono.rbegin()->first);

  auto attempt = [&](const LinearSubst& b) -> std::optional<std::pair<OperatorExpr, LinearSubst>> {
    DiffPoly moved = diffpoly_change_coords(sym, b);
    auto lead = moved.find(Monomial{{0, m}});
    if (lead == moved.end() || lead->second.is_zero()) return std::nullopt;
    DiffPoly scaled = diffpoly_scaled(moved, lead->second.inverse());
    if (!check_ck_form(scaled, m)) return std::nullopt;
    return std::make_pair(operator_from_diffpoly(scaled), b);
  };

  if (auto r = attempt(LinearSubst::identity())) return *r;
  {
    // shear of the space variables along t
    LinearSubst b;
    for (VarIndex v = 1; v <= nv; ++v) {
      b.set(v, 0, Complex(1));
      b.set(v, v, Complex(1));
    }
    b.set(0, 0, Complex(1));
    b.canonicalize();
    if (auto r = attempt(b)) return *r;
  }
  // mix the space variables into the lead variable: tbar = t + c.x
  for (int cap = 1; cap <= 8 && nv > 0; ++cap) {
    // enumerate all tuples with max == cap
    std::vector<int> tup(nv, 0);
    bool more = true;
    while (more) {
      if (*std::max_element(tup.begin(), tup.end()) == cap) {
        LinearSubst b;
        b.set(0, 0, Complex(1));
        for (VarIndex v = 1; v <= nv; ++v) {
          if (tup[v - 1]) b.set(0, v, Complex(tup[v - 1]));
          b.set(v, v, Complex(1));
        }
        b.canonicalize();
        if (auto r = attempt(b)) return *r;
      }
      more = next_tuple(tup, cap);
    }
  }
  throw InvalidProblemError("no tried change of variables reaches lead form");
}

bool verify_factorization(const OperatorExpr& t, const std::vector<FirstOrderFactor>& factors) {
  DiffPoly sym;
  try {
    sym = diffpoly_from_operator(t);
  } catch (const InvalidProblemError&) {
    return false;
  }
  DiffPoly prod{{Monomial{}, Complex(1)}};
  for (const auto& f : factors) prod = diffpoly_mul(prod, diffpoly_pow(f.symbol(), f.multiplicity));
  if (prod.empty() || sym.empty()) return prod.empty() && sym.empty();
  auto it = sym.find(prod.begin()->first);
  if (it == sym.end()) return false;
  const Complex ratio = it->second / prod.begin()->second;
  if (ratio.is_zero()) return false;
  return sym == diffpoly_scaled(prod, ratio);
}

std::optional<std::vector<VarIndex>> order_variables(const FirstOrderFactor& f) {
  if (f.a0.is_zero())
    throw InvalidProblemError("factor has zero coefficient for D_t");
  std::vector<VarIndex> vars;
  for (int i = 0; i < f.n(); ++i)
    if (!f.coeffs[i].is_zero()) vars.push_back(i + 1);

  std::vector<VarIndex> perm;
  std::vector<bool> used(vars.size(), false);
  // Lexicographically first permutation whose proper prefix sums
  // a0 + a_{p1} + ... all stay nonzero; greedy with backtracking.
  std::function<bool(Complex)> search = [&](Complex cum) -> bool {
    if (perm.size() == vars.size()) return true;
    if (cum.is_zero()) return false;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      perm.push_back(vars[k]);
      if (search(cum + f.coeffs[vars[k] - 1])) return true;
      perm.pop_back();
      used[k] = false;
    }
    return false;
  };
  if (!search(f.a0)) return std::nullopt;
  return perm;
}

std::pair<LinearSubst, LinearSubst> charvar_matrix(const FirstOrderFactor& f,
                                                   const std::vector<VarIndex>& perm) {
  if (f.a0.is_zero()) throw InvalidProblemError("factor has zero coefficient for D_t");
  LinearSubst z;
  z.set(0, 0, Complex(1));
  for (int v = 1; v <= f.n(); ++v) z.set(v, v, Complex(1));  // untouched variables
  Complex cum = f.a0;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const VarIndex v = perm[k];
    const Complex av = f.coeffs[v - 1];
    if (av.is_zero()) throw InvalidProblemError("ordered variable has zero coefficient");
    if (cum.is_zero()) throw InvalidProblemError("vanishing prefix sum in variable ordering");
    z.set(v, 0, Complex(1));
    for (std::size_t j = 0; j < k; ++j) z.set(v, perm[j], Complex(1));
    z.set(v, v, -(cum / av));
    cum += av;
  }
  z.canonicalize();
  LinearSubst zi = z.inverse();
  if (!zi.after(z).is_identity() || !z.after(zi).is_identity())
    throw Error("characteristic matrix inverse check failed");
  return {z, zi};
}

namespace {

ExpPoly decay_factor(const FirstOrderFactor& f, bool positive) {
  Complex rate = f.a / f.a0;
  if (!positive) rate = -rate;
  if (rate.is_zero()) return ExpPoly::constant(Complex(1));
  return ExpPoly::exponential({{0, rate}});
}

// x_i -> x_i - (a_i/a0) t, the plain characteristic map. Always invertible;
// used when no variable ordering exists for the textbook coordinates.
LinearSubst characteristic_map(const FirstOrderFactor& f) {
  LinearSubst w;
  w.set(0, 0, Complex(1));
  for (int v = 1; v <= f.n(); ++v) {
    w.set(v, v, Complex(1));
    const Complex av = f.coeffs[v - 1];
    if (!av.is_zero()) w.set(v, 0, -(av / f.a0));
  }
  w.canonicalize();
  return w;
}

}  // namespace

StateOperator first_order_state(const FirstOrderFactor& f) {
  if (f.a0.is_zero()) throw InvalidProblemError("factor has zero coefficient for D_t");
  StateOperator h;
  const ExpPoly g = decay_factor(f, false);
  // The lift always kills the t coordinate: data lives in the space
  // variables only, and with the kill in place T o row o lift = 0 holds as
  // an operator identity on all of F, not just on t-free inputs.
  const LinearSubst e0 = LinearSubst::eval_at_zero(0);
  if (auto perm = order_variables(f)) {
    auto [z, zi] = charvar_matrix(f, *perm);
    // sigma: the space part of Z at t = 0; sigma^-1 sends the data
    // variables into the characteristic coordinates.
    LinearSubst sigma;
    sigma.set(0, 0, Complex(1));
    for (int v = 1; v <= f.n(); ++v) {
      sigma.set(v, v, z.entry(v, v));
      for (int j = 1; j <= f.n(); ++j)
        if (j != v) sigma.set(v, j, z.entry(v, j));
    }
    sigma.canonicalize();
    h.rows.push_back(normalize(OperatorExpr::mul(g) * OperatorExpr::subst(z)));
    h.lift = sigma.inverse().after(e0);
  } else {
    h.rows.push_back(normalize(OperatorExpr::mul(g) * OperatorExpr::subst(characteristic_map(f))));
    h.lift = e0;
  }
  return h;
}

SignalOperator first_order_rightinv(const FirstOrderFactor& f) {
  if (f.a0.is_zero()) throw InvalidProblemError("factor has zero coefficient for D_t");
  LinearSubst z, zi;
  if (auto perm = order_variables(f)) {
    std::tie(z, zi) = charvar_matrix(f, *perm);
  } else {
    z = characteristic_map(f);
    zi = z.inverse();
  }
  OperatorExpr word = OperatorExpr::subst(z) * OperatorExpr::mul(decay_factor(f, false)) *
                      OperatorExpr::integ(0) * OperatorExpr::mul(decay_factor(f, true)) *
                      OperatorExpr::subst(zi);
  return {normalize(word.scaled(f.a0.inverse()))};
}

std::vector<OperatorExpr> general_solution_power(const FirstOrderFactor& f, int m) {
  auto perm = order_variables(f);
  if (!perm)
    throw InvalidProblemError("no variable ordering with nonzero prefix sums exists");
  auto [z, zi] = charvar_matrix(f, *perm);
  const ExpPoly g = decay_factor(f, false);
  std::vector<OperatorExpr> gens;
  for (int i = 0; i < m; ++i) {
    ExpPoly tk = ExpPoly::monomial({{0, i}}, Complex(factorial(i)).inverse());
    gens.push_back(normalize(OperatorExpr::mul(tk * g) * OperatorExpr::subst(z)));
  }
  return gens;
}

SolvedProblem first_order_problem(const FirstOrderFactor& f) {
  SolvedProblem sp;
  sp.problem.T = f.as_operator();
  sp.problem.basis = BoundaryBasis::cauchy(1);
  sp.signal = first_order_rightinv(f);
  sp.state = first_order_state(f);
  return sp;
}

ExpPoly apply_symbol_to_cauchy_data(const DiffPoly& sym, const std::vector<ExpPoly>& data,
                                    int extra) {
  ExpPoly out;
  for (const auto& [mono, c] : sym) {
    auto t = mono.find(0);
    const int p = (t == mono.end()) ? 0 : t->second;
    const std::size_t idx = static_cast<std::size_t>(extra + p);
    if (idx >= data.size())
      throw DimensionError("data tuple too short for the requested t-derivative");
    ExpPoly term = data[idx];
    for (const auto& [v, e] : mono) {
      if (v == 0) continue;
      for (int k = 0; k < e; ++k) term = term.diff(v);
    }
    out += term.scaled(c);
  }
  return out;
}

namespace {

void validate_problem(const CauchyProblem& p) {
  if (p.n < 0) throw InvalidProblemError("negative space dimension");
  if (p.factors.empty()) throw InvalidProblemError("no factors given");
  for (const auto& f : p.factors) {
    if (f.multiplicity < 1) throw InvalidProblemError("factor multiplicity must be positive");
    if (f.a0.is_zero()) throw InvalidProblemError("factor has zero coefficient for D_t");
    if (f.n() != p.n)
      throw InvalidProblemError("factor coefficient list does not match the space dimension");
  }
  int m = 0;
  for (const auto& f : p.factors) m += f.multiplicity;
  if (static_cast<int>(p.data.size()) != m)
    throw InvalidProblemError(
        "data arity " + std::to_string(p.data.size()) + " does not match the operator order " +
        std::to_string(m) + "; entry k prescribes the (k-1)-th t-derivative of u at t = 0");
  // the expanded product is in lead form whenever every a0 is nonzero
  DiffPoly sym{{Monomial{}, Complex(1)}};
  for (const auto& f : p.factors) sym = diffpoly_mul(sym, diffpoly_pow(f.symbol(), f.multiplicity));
  auto lead = sym.find(Monomial{{0, m}});
  if (lead == sym.end() || !check_ck_form(diffpoly_scaled(sym, lead->second.inverse()), m))
    throw InvalidProblemError("expanded factors are not in lead form with respect to t");
  for (const auto& d : p.data) {
    if (d.depends_on(0))
      throw InvalidProblemError("Cauchy data must not involve the lead variable t");
    if (d.max_var() > p.n)
      throw InvalidProblemError("data uses a variable beyond the space dimension");
  }
}

// The conversion operators from the natural data tuple to the coordinate of
// the transformed condition L . D_t^0 . T~: K_i collects the T~ monomials of
// t-degree i-1 as pure space-derivative words.
std::vector<OperatorExpr> data_conversion_ops(const DiffPoly& inner_sym, int arity) {
  std::vector<OperatorExpr> ks(arity);
  for (const auto& [mono, c] : inner_sym) {
    auto t = mono.find(0);
    const int p = (t == mono.end()) ? 0 : t->second;
    if (p >= arity) throw DimensionError("inner symbol exceeds the data arity");
    Word w;
    for (const auto& [v, e] : mono) {
      if (v == 0) continue;
      for (int k = 0; k < e; ++k) w.push_back(Generator::diff(v));
    }
    ks[p] += OperatorExpr::from_word(std::move(w), c);
  }
  return ks;
}

}  // namespace

CauchySolution solve_cauchy(const CauchyProblem& problem, const NormalizeOptions& opts) {
  validate_problem(problem);
  std::vector<FirstOrderFactor> units;
  for (const auto& f : problem.factors)
    for (int k = 0; k < f.multiplicity; ++k) {
      FirstOrderFactor u = f;
      u.multiplicity = 1;
      units.push_back(std::move(u));
    }

  // innermost (rightmost) factor first
  SolvedProblem current = first_order_problem(units.back());
  DiffPoly current_sym = units.back().symbol();

  for (std::size_t j = units.size() - 1; j-- > 0;) {
    const FirstOrderFactor& fo = units[j];
    SolvedProblem outer = first_order_problem(fo);
    const int k = static_cast<int>(current.state.rows.size());

    SolvedProblem next;
    next.problem.T = normalize(outer.problem.T * current.problem.T, opts);
    next.problem.basis = BoundaryBasis::cauchy(k + 1);
    next.signal.op = normalize(current.signal.op * outer.signal.op, opts);

    // Composite state in the natural Cauchy coordinates: the condition of
    // the outer problem transforms through the inner operator, so its data
    // coordinate is K_i applied to the data tuple (triangular in the
    // t-derivatives); the inner rows carry over unchanged.
    const OperatorExpr outer_row = outer.state.folded_row(0);
    const OperatorExpr lifted = normalize(current.signal.op * outer_row, opts);
    auto ks = data_conversion_ops(current_sym, k + 1);
    for (int i = 0; i <= k; ++i) {
      OperatorExpr row = lifted * ks[i];
      if (i < k) row += current.state.folded_row(i);
      next.state.rows.push_back(normalize(row, opts));
    }
    next.state.lift = LinearSubst::identity();

    current = std::move(next);
    current_sym = diffpoly_mul(fo.symbol(), current_sym);
  }

  CauchySolution sol;
  sol.T = current.problem.T;
  sol.basis = current.problem.basis;
  sol.state = current.state;
  sol.signal = current.signal;
  sol.u = current.state.apply(BoundaryData{problem.data});

  // hard invariants of the construction
  ExpPoly residual = sol.T.apply(sol.u);
  if (!residual.is_zero())
    throw Error("internal: solution residual is nonzero: " + residual.str());
  BoundaryData tr = trace(sol.basis, sol.u);
  for (std::size_t i = 0; i < tr.coords.size(); ++i)
    if (tr.coords[i] != problem.data[i])
      throw Error("internal: trace mismatch in data slot " + std::to_string(i));
  return sol;
}

CauchyProblem compose_cauchy(const CauchyProblem& outer, const CauchyProblem& inner) {
  CauchyProblem out;
  out.n = std::max(outer.n, inner.n);
  auto pad = [&](FirstOrderFactor f) {
    f.coeffs.resize(out.n, Complex(0));
    return f;
  };
  auto add_factor = [&](const FirstOrderFactor& f) {
    for (auto& g : out.factors)
      if (g.same_factor(f)) {
        g.multiplicity += f.multiplicity;
        return;
      }
    out.factors.push_back(f);
  };
  for (const auto& f : outer.factors) add_factor(pad(f));
  for (const auto& f : inner.factors) add_factor(pad(f));

  const int mi = inner.order();
  const int mo = outer.order();
  DiffPoly inner_sym{{Monomial{}, Complex(1)}};
  for (const auto& f : inner.factors)
    inner_sym = diffpoly_mul(inner_sym, diffpoly_pow(f.symbol(), f.multiplicity));
  const Monomial lead{{0, mi}};
  auto lead_it = inner_sym.find(lead);
  if (lead_it == inner_sym.end() || lead_it->second.is_zero())
    throw InvalidProblemError("inner operator is not in lead form");
  const Complex cstar = lead_it->second;

  // data[0..mi-1] come from the inner problem; the outer tuple supplies the
  // coordinates g_i = (D_t^i T_inner u)(0, x) which determine the higher
  // t-derivatives one by one.
  out.data = inner.data;
  out.data.resize(mi + mo);
  for (int i = 0; i < mo; ++i) {
    ExpPoly rest;
    for (const auto& [mono, c] : inner_sym) {
      if (mono == lead) continue;
      auto t = mono.find(0);
      const int p = (t == mono.end()) ? 0 : t->second;
      ExpPoly term = out.data[i + p];
      for (const auto& [v, e] : mono) {
        if (v == 0) continue;
        for (int q = 0; q < e; ++q) term = term.diff(v);
      }
      rest += term.scaled(c);
    }
    out.data[i + mi] = (outer.data[i] - rest).scaled(cstar.inverse());
  }
  return out;
}

}  // namespace greenop
