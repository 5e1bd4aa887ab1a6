#include "greenop/opexpr.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "greenop/errors.hpp"
#include "greenop/parse.hpp"

namespace greenop {

Generator Generator::subst(LinearSubst m) {
  Generator g(Kind::Subst, 0);
  g.map_ = std::move(m);
  return g;
}

Generator Generator::mul(ExpPoly f) {
  Generator g(Kind::MulBy, 0);
  g.factor_ = std::move(f);
  return g;
}

ExpPoly Generator::apply(const ExpPoly& u) const {
  switch (kind_) {
    case Kind::Diff:
      return u.diff(var_);
    case Kind::Int:
      return u.integrate(var_);
    case Kind::Subst:
      return u.subst(map_);
    case Kind::MulBy:
      return factor_ * u;
  }
  throw Error("unreachable");
}

bool Generator::operator==(const Generator& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Diff:
    case Kind::Int:
      return var_ == o.var_;
    case Kind::Subst:
      return map_ == o.map_;
    case Kind::MulBy:
      return factor_ == o.factor_;
  }
  return false;
}

bool Generator::operator<(const Generator& o) const {
  if (kind_ != o.kind_) return static_cast<int>(kind_) < static_cast<int>(o.kind_);
  switch (kind_) {
    case Kind::Diff:
    case Kind::Int:
      return var_ < o.var_;
    case Kind::Subst:
      return map_ < o.map_;
    case Kind::MulBy:
      return factor_ < o.factor_;
  }
  return false;
}

std::string Generator::str() const {
  switch (kind_) {
    case Kind::Diff:
      return "D" + std::to_string(var_);
    case Kind::Int:
      return "A" + std::to_string(var_);
    case Kind::Subst:
      return map_.str();
    case Kind::MulBy:
      return "mul(" + factor_.str() + ")";
  }
  return "?";
}

OperatorExpr OperatorExpr::identity() { return from_word({}); }
OperatorExpr OperatorExpr::diff(VarIndex v) { return from_word({Generator::diff(v)}); }
OperatorExpr OperatorExpr::integ(VarIndex v) { return from_word({Generator::integ(v)}); }
OperatorExpr OperatorExpr::subst(LinearSubst m) {
  return from_word({Generator::subst(std::move(m))});
}
OperatorExpr OperatorExpr::mul(ExpPoly f) { return from_word({Generator::mul(std::move(f))}); }

OperatorExpr OperatorExpr::from_word(Word w, Complex coeff) {
  OperatorExpr e;
  e.insert(std::move(coeff), std::move(w));
  return e;
}

bool OperatorExpr::is_identity() const {
  return terms_.size() == 1 && terms_[0].second.empty() && terms_[0].first.is_one();
}

void OperatorExpr::insert(Complex c, Word w) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                             [](const auto& t, const Word& key) { return t.second < key; });
  if (it != terms_.end() && it->second == w) {
    it->first += c;
    if (it->first.is_zero()) terms_.erase(it);
  } else {
    terms_.insert(it, {std::move(c), std::move(w)});
  }
}

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& o) {
  for (const auto& [c, w] : o.terms_) insert(c, w);
  return *this;
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  OperatorExpr r;
  for (const auto& [ca, wa] : a.terms_)
    for (const auto& [cb, wb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.insert(ca * cb, std::move(w));
    }
  return r;
}

OperatorExpr OperatorExpr::scaled(const Complex& c) const {
  OperatorExpr r;
  if (c.is_zero()) return r;
  for (const auto& [k, w] : terms_) r.insert(k * c, w);
  return r;
}

OperatorExpr OperatorExpr::pow(int n) const {
  if (n < 0) throw Error("negative operator power");
  OperatorExpr r = identity();
  for (int k = 0; k < n; ++k) r = r * *this;
  return r;
}

ExpPoly OperatorExpr::apply(const ExpPoly& u) const {
  ExpPoly out;
  for (const auto& [c, w] : terms_) {
    ExpPoly v = u;
    for (auto it = w.rbegin(); it != w.rend(); ++it) v = it->apply(v);
    out += v.scaled(c);
  }
  return out;
}

bool OperatorExpr::is_differential() const {
  for (const auto& [c, w] : terms_)
    for (const auto& g : w)
      if (g.kind() != Generator::Kind::Diff) return false;
  return true;
}

bool OperatorExpr::has_no_int() const {
  for (const auto& [c, w] : terms_)
    for (const auto& g : w)
      if (g.kind() == Generator::Kind::Int) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rewrite system.
//
// Words compose right to left: in [g0, g1] the generator g1 acts first. Each
// rule below is an identity of the analytic model; the soundness tests
// exercise every one of them against the direct action.
// ---------------------------------------------------------------------------

namespace {

bool is_e_row(const LinearSubst& m, int i, const Complex& diag) {
  const int span = std::max(m.dim(), i + 1);
  if (!m.shift(i).is_zero()) return false;
  for (int j = 0; j < span; ++j) {
    const Complex want = (j == i) ? diag : Complex(0);
    if (m.entry(i, j) != want) return false;
  }
  return true;
}

bool is_e_col(const LinearSubst& m, int i, const Complex& diag) {
  const int span = std::max(m.dim(), i + 1);
  for (int j = 0; j < span; ++j) {
    const Complex want = (j == i) ? diag : Complex(0);
    if (m.entry(j, i) != want) return false;
  }
  return true;
}

bool is_zero_row(const LinearSubst& m, int i) {
  if (i >= m.dim()) return false;  // pass-through coordinate
  if (!m.shift(i).is_zero()) return false;
  for (int j = 0; j < std::max(m.dim(), i + 1); ++j)
    if (!m.entry(i, j).is_zero()) return false;
  return true;
}

// True when the generator commutes exactly with both D_i and A_i: integrals
// and derivations in other variables, multiplications free of x_i, and
// substitutions leaving x_i untouched and unused.
bool transparent_at(const Generator& g, int i) {
  switch (g.kind()) {
    case Generator::Kind::Diff:
    case Generator::Kind::Int:
      return g.var() != i;
    case Generator::Kind::MulBy:
      return !g.factor().depends_on(i);
    case Generator::Kind::Subst:
      return is_e_row(g.map(), i, Complex(1)) && is_e_col(g.map(), i, Complex(1));
  }
  return false;
}

Word splice(const Word& w, std::size_t pos, std::size_t count, std::vector<Generator> repl) {
  Word out;
  out.reserve(w.size() - count + repl.size());
  out.insert(out.end(), w.begin(), w.begin() + pos);
  out.insert(out.end(), std::make_move_iterator(repl.begin()), std::make_move_iterator(repl.end()));
  out.insert(out.end(), w.begin() + pos + count, w.end());
  return out;
}

}  // namespace

bool rewrite_at(const Word& w, std::size_t pos, int priority,
                std::vector<std::pair<Complex, Word>>& out) {
  using K = Generator::Kind;
  out.clear();
  const Generator& g = w[pos];
  const Generator* h = pos + 1 < w.size() ? &w[pos + 1] : nullptr;  // h acts before g

  switch (priority) {
    case 0:
      // single-generator erasures (R9/R10 family)
      if (g.kind() == K::MulBy) {
        const ExpPoly& f = g.factor();
        if (f.is_constant()) {
          const Complex c = f.constant_value();
          if (c.is_zero()) return true;  // annihilates the word
          out.push_back({c, splice(w, pos, 1, {})});
          return true;
        }
        // canonical payloads are single monomials with coefficient 1; sums
        // and coefficients are pulled to the top layer
        const bool single =
            f.term_count() == 1 && f.terms().begin()->second.begin()->second.is_one();
        if (!single) {
          for (const auto& [freq, poly] : f.terms())
            for (const auto& [mono, c] : poly)
              out.push_back(
                  {c, splice(w, pos, 1, {Generator::mul(ExpPoly::term(freq, mono, Complex(1)))})});
          return true;
        }
      }
      if (g.kind() == K::Subst && g.map().is_identity()) {
        out.push_back({Complex(1), splice(w, pos, 1, {})});
        return true;
      }
      return false;

    case 1:
      // contracting pair rules
      if (!h) return false;
      // R1: Subst(M) . Subst(N) -> Subst(N o M)
      if (g.kind() == K::Subst && h->kind() == K::Subst) {
        out.push_back({Complex(1), splice(w, pos, 2, {Generator::subst(h->map().after(g.map()))})});
        return true;
      }
      // R9: mul(f) . mul(g) -> mul(f g)
      if (g.kind() == K::MulBy && h->kind() == K::MulBy) {
        out.push_back({Complex(1), splice(w, pos, 2, {Generator::mul(g.factor() * h->factor())})});
        return true;
      }
      // R5 section axiom: D_i . A_i -> 1, and R8: A_i . D_i -> 1 - Subst(E_i)
      // (evaluation at x_i = 0). The partner is matched through any run of
      // integrals and derivations in other variables, which all commute with
      // the contracting pair; adjacency is the run-length-zero case.
      if (g.kind() == K::Diff) {
        const int i = g.var();
        std::size_t q = pos + 1;
        while (q < w.size() && transparent_at(w[q], i)) ++q;
        if (q < w.size() && w[q].kind() == K::Int && w[q].var() == i) {
          Word base = w;
          base.erase(base.begin() + q);
          base.erase(base.begin() + pos);
          out.push_back({Complex(1), std::move(base)});
          return true;
        }
      }
      // R4: Subst(M) . mul(f) -> mul(f o M) . Subst(M); skipped when f o M
      // leaves the representable class.
      if (g.kind() == K::Subst && h->kind() == K::MulBy) {
        try {
          ExpPoly fm = h->factor().subst(g.map());
          out.push_back({Complex(1), splice(w, pos, 2, {Generator::mul(std::move(fm)), g})});
          return true;
        } catch (const UnrepresentableError&) {
          return false;  // leave the pair in place
        }
      }
      // Subst(M) . ... . A_i -> 0 when component i of the map is identically
      // zero: the integral is evaluated over an empty range. Functions
      // vanishing on the hyperplane x_i = 0 stay so under integrals,
      // multiplications and foreign derivations, so the rule sees through
      // them; a D_i or another substitution blocks the scan.
      if (g.kind() == K::Subst) {
        std::vector<bool> blocked;
        for (std::size_t q = pos + 1; q < w.size(); ++q) {
          const Generator& x = w[q];
          if (x.kind() == K::Subst) break;
          if (x.kind() == K::MulBy) continue;
          const int i = x.var();
          if (x.kind() == K::Diff) {
            if (i >= static_cast<int>(blocked.size())) blocked.resize(i + 1, false);
            blocked[i] = true;
            continue;
          }
          // Int
          const bool is_blocked = i < static_cast<int>(blocked.size()) && blocked[i];
          if (!is_blocked && is_zero_row(g.map(), i)) return true;  // annihilated
        }
      }
      return false;

    case 2:
      // R8: A_i . D_i -> 1 - Subst(E_i) (evaluation at x_i = 0), the partner
      // again matched through transparent generators. Ranked after the
      // clean section contractions so those win shared partners.
      if (g.kind() == K::Int) {
        const int i = g.var();
        std::size_t q = pos + 1;
        while (q < w.size() && transparent_at(w[q], i)) ++q;
        if (q < w.size() && w[q].kind() == K::Diff && w[q].var() == i) {
          Word base = w;
          base.erase(base.begin() + q);
          base.erase(base.begin() + pos);
          Word with_eval = base;
          with_eval.insert(with_eval.begin() + pos,
                           Generator::subst(LinearSubst::eval_at_zero(i)));
          out.push_back({Complex(1), std::move(base)});
          out.push_back({Complex(-1), std::move(with_eval)});
          return true;
        }
      }
      return false;

    case 3: {
      // factors independent of the integration variable commute out of the
      // integral; mixed monomials split. (Payloads are single monomials
      // after class 0.)
      if (g.kind() != K::Int || !h || h->kind() != K::MulBy) return false;
      const int i = g.var();
      if (!h->factor().depends_on(i)) {
        if (h->factor().is_constant()) return false;
        out.push_back({Complex(1), splice(w, pos, 2, {*h, g})});
        return true;
      }
      if (h->factor().term_count() == 1) {
        const auto& [freq, poly] = *h->factor().terms().begin();
        const auto& [mono, coeff] = *poly.begin();
        Monomial mi, mrest;
        for (const auto& [v, e] : mono) (v == i ? mi : mrest)[v] = e;
        FreqVector fi, frest;
        for (const auto& [v, x] : freq) (v == i ? fi : frest)[v] = x;
        if (!mrest.empty() || !frest.empty()) {
          Generator rest = Generator::mul(ExpPoly::term(frest, mrest, Complex(1)));
          Generator part = Generator::mul(ExpPoly::term(fi, mi, Complex(1)));
          out.push_back({coeff, splice(w, pos, 2, {rest, g, part})});
          return true;
        }
      }
      return false;
    }

    case 4: {
      // Integration by parts (Rota-Baxter family). After A_i there may be
      // one payload mul(f) and then a run of integrals and derivations in
      // other variables, all of which commute with the rewritten pair; the
      // first same-variable generator decides the rule.
      if (g.kind() != K::Int || !h) return false;
      const int i = g.var();
      std::size_t mpos = w.size();
      std::size_t q = pos + 1;
      if (q < w.size() && w[q].kind() == K::MulBy && w[q].factor().depends_on(i)) {
        mpos = q;
        ++q;
      }
      while (q < w.size() && transparent_at(w[q], i)) ++q;
      if (q >= w.size() || (w[q].kind() != K::Diff && w[q].kind() != K::Int) ||
          w[q].var() != i)
        return false;

      Word base;
      base.reserve(w.size());
      for (std::size_t k = 0; k < w.size(); ++k)
        if (k != pos && k != mpos && k != q) base.push_back(w[k]);

      if (w[q].kind() == K::Int) {
        // R7: A_i mul(f) X A_i -> mul(F) A_i X - A_i mul(F) X with F the
        // antiderivative of f vanishing at 0 (f = 1 when no payload).
        ExpPoly big = (mpos < w.size()) ? w[mpos].factor().integrate(i) : ExpPoly::variable(i);
        Generator mf = Generator::mul(std::move(big));
        Word w1 = base;
        w1.insert(w1.begin() + pos, {mf, g});
        Word w2 = base;
        w2.insert(w2.begin() + pos, {g, mf});
        out.push_back({Complex(1), std::move(w1)});
        out.push_back({Complex(-1), std::move(w2)});
        return true;
      }
      // A_i mul(f) X D_i -> mul(f) X - mul(f at x_i = 0) Subst(E_i) X
      //                     - A_i mul(d_i f) X
      if (mpos == w.size()) return false;  // payload-free contraction is R8
      const ExpPoly& f = w[mpos].factor();
      {
        Word w1 = base;
        w1.insert(w1.begin() + pos, w[mpos]);
        out.push_back({Complex(1), std::move(w1)});
      }
      const LinearSubst ei = LinearSubst::eval_at_zero(i);
      ExpPoly f0 = f.subst(ei);
      if (!f0.is_zero()) {
        Word w2 = base;
        w2.insert(w2.begin() + pos, {Generator::mul(std::move(f0)), Generator::subst(ei)});
        out.push_back({Complex(-1), std::move(w2)});
      }
      ExpPoly df = f.diff(i);
      if (!df.is_zero()) {
        Word w3 = base;
        w3.insert(w3.begin() + pos, {g, Generator::mul(std::move(df))});
        out.push_back({Complex(-1), std::move(w3)});
      }
      return true;
    }

    case 5: {
      // interchange of integrals and substitutions (special shapes only;
      // the general pattern has no rewrite and stays in normal form)
      if (g.kind() != K::Int || !h || h->kind() != K::Subst) return false;
      const int i = g.var();
      const auto& m = h->map();
      // A_i . Subst(M) -> mul(x_i) . Subst(M) when column i vanishes:
      // the integrand does not depend on the integration variable.
      if (is_e_col(m, i, Complex(0))) {
        out.push_back({Complex(1), splice(w, pos, 2, {Generator::mul(ExpPoly::variable(i)), *h})});
        return true;
      }
      // A_i . Subst(M) -> (1/m) Subst(M) . A_i when x_i is scaled by m and
      // mixed with nothing else (row i and column i both m e_i).
      const Complex d = m.entry(i, i);
      if (!d.is_zero() && is_e_row(m, i, d) && is_e_col(m, i, d)) {
        out.push_back({d.inverse(), splice(w, pos, 2, {*h, g})});
        return true;
      }
      return false;
    }

    case 6:
      // pushing and reordering
      if (!h) return false;
      // R2 chain rule: D_i . Subst(M) -> sum_j M[j,i] Subst(M) . D_j
      if (g.kind() == K::Diff && h->kind() == K::Subst) {
        const auto& m = h->map();
        const int i = g.var();
        const int span = std::max(m.dim(), i + 1);
        for (int j = 0; j < span; ++j) {
          const Complex c = m.entry(j, i);
          if (!c.is_zero()) out.push_back({c, splice(w, pos, 2, {*h, Generator::diff(j)})});
        }
        return true;
      }
      // R3 Leibniz: D_i . mul(f) -> mul(d_i f) + mul(f) . D_i
      if (g.kind() == K::Diff && h->kind() == K::MulBy) {
        ExpPoly df = h->factor().diff(g.var());
        if (!df.is_zero())
          out.push_back({Complex(1), splice(w, pos, 2, {Generator::mul(std::move(df))})});
        out.push_back({Complex(1), splice(w, pos, 2, {*h, g})});
        return true;
      }
      // R6: D_i . A_j -> A_j . D_i for i != j; derivations drift right like
      // everywhere else
      if (g.kind() == K::Diff && h->kind() == K::Int && g.var() != h->var()) {
        out.push_back({Complex(1), splice(w, pos, 2, {*h, g})});
        return true;
      }
      // adjacent derivations commute and are kept sorted by index
      if (g.kind() == K::Diff && h->kind() == K::Diff && g.var() > h->var()) {
        out.push_back({Complex(1), splice(w, pos, 2, {*h, g})});
        return true;
      }
      return false;

    case 7:
      // adjacent integrals in distinct variables commute (Fubini from 0);
      // sorting runs last so it cannot steal integration-by-parts patterns
      if (!h) return false;
      if (g.kind() == K::Int && h->kind() == K::Int && g.var() > h->var()) {
        out.push_back({Complex(1), splice(w, pos, 2, {*h, g})});
        return true;
      }
      return false;

    default:
      return false;
  }
}

namespace {

bool find_redex(const Word& w, Strategy strategy, std::size_t& pos,
                std::vector<std::pair<Complex, Word>>& out) {
  const std::size_t n = w.size();
  for (int priority = 0; priority <= 7; ++priority) {
    if (strategy == Strategy::InnermostFirst) {
      for (std::size_t k = n; k-- > 0;)
        if (rewrite_at(w, k, priority, out)) {
          pos = k;
          return true;
        }
    } else {
      for (std::size_t k = 0; k < n; ++k)
        if (rewrite_at(w, k, priority, out)) {
          pos = k;
          return true;
        }
    }
  }
  return false;
}

}  // namespace

OperatorExpr normalize(const OperatorExpr& a, const NormalizeOptions& opts) {
  std::deque<std::pair<Complex, Word>> queue(a.terms().begin(), a.terms().end());
  OperatorExpr result;
  long steps = 0;
  std::vector<std::pair<Complex, Word>> rewritten;
  while (!queue.empty()) {
    auto [c, w] = std::move(queue.front());
    queue.pop_front();
    std::size_t pos;
    if (!find_redex(w, opts.strategy, pos, rewritten)) {
      result += OperatorExpr::from_word(std::move(w), c);
      continue;
    }
    if (++steps > opts.budget)
      throw BudgetError("rewrite step budget exceeded (" + std::to_string(opts.budget) + ")");
    for (auto& [f, nw] : rewritten) queue.push_back({c * f, std::move(nw)});
  }
  return result;
}

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

VarIndex max_var(const OperatorExpr& a) {
  VarIndex m = -1;
  for (const auto& [c, w] : a.terms())
    for (const auto& g : w) {
      switch (g.kind()) {
        case Generator::Kind::Diff:
        case Generator::Kind::Int:
          m = std::max(m, g.var());
          break;
        case Generator::Kind::Subst:
          m = std::max(m, g.map().dim() - 1);
          break;
        case Generator::Kind::MulBy:
          m = std::max(m, g.factor().max_var());
          break;
      }
    }
  return m;
}

ExpPoly probe_monomial(std::uint64_t seed, int index, int vars) {
  std::uint64_t s = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(index) + 1;
  static const Complex freq_palette[] = {Complex(0),        Complex(0),      Complex(1),
                                         Complex(-1),       Complex(2),      Complex::i(),
                                         Complex(1, 2),     Complex(0)};
  static const Complex coeff_palette[] = {Complex(1),    Complex(-1),      Complex(2),
                                          Complex(1, 2), Complex::i(),     Complex(-1, 2),
                                          Complex(3),    Complex(Rational(1), Rational(1))};
  Monomial mono;
  FreqVector freq;
  for (int v = 0; v < vars; ++v) {
    int e = static_cast<int>(splitmix(s) % 3);
    if (e > 0) mono[v] = e;
    const Complex& f = freq_palette[splitmix(s) % 8];
    if (!f.is_zero()) freq[v] = f;
  }
  const Complex& c = coeff_palette[splitmix(s) % 8];
  return ExpPoly::term(freq, mono, c);
}

bool equal_via_probing(const OperatorExpr& a, const OperatorExpr& b, int sample_size,
                       std::uint64_t seed) {
  const int vars = std::max({max_var(a), max_var(b), 1}) + 1;
  for (int k = 0; k < sample_size; ++k) {
    ExpPoly u = probe_monomial(seed, k, vars);
    if (a.apply(u) != b.apply(u)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Printer and parser for the operator grammar.
// ---------------------------------------------------------------------------

std::string OperatorExpr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, w] : terms_) {
    const bool neg = (c.re() < 0) || (c.re() == 0 && c.im() < 0);
    const Complex disp = neg ? -c : c;
    std::string piece;
    if (w.empty()) {
      if (disp.is_one()) {
        piece = "id";
      } else if (disp.is_real() || disp.re() == 0) {
        piece = disp.str() + " * id";
      } else {
        piece = "(" + disp.str() + ") * id";
      }
    } else {
      if (!disp.is_one()) {
        if (disp.is_real() || disp.re() == 0)
          piece = disp.str() + " * ";
        else
          piece = "(" + disp.str() + ") * ";
      }
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) piece += " . ";
        piece += w[k].str();
      }
    }
    if (first) {
      out += neg ? "-" + piece : piece;
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += piece;
    }
  }
  return out;
}

namespace {

class OpParser {
 public:
  explicit OpParser(std::string_view text) : text_(text) {}

  OperatorExpr run() {
    OperatorExpr acc = expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_);
    return acc;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool lookahead_word(std::string_view kw) {
    skip_ws();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    const std::size_t after = pos_ + kw.size();
    if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after])))
      return false;
    return true;
  }

  long natural() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("number expected", pos_);
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      v = v * 10 + (text_[pos_++] - '0');
    return v;
  }

  OperatorExpr expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    OperatorExpr acc = term();
    if (neg) acc = acc.scaled(Complex(-1));
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc += term().scaled(Complex(-1));
      } else {
        return acc;
      }
    }
  }

  OperatorExpr term() {
    Complex coeff(1);
    bool have_coeff = false;
    skip_ws();
    if (peek() == '(') {
      // parenthesized scalar coefficient
      std::size_t close = find_balanced(')');
      coeff = Complex::parse(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      have_coeff = true;
    } else if (std::isdigit(static_cast<unsigned char>(peek())) ||
               (peek() == 'i' && !lookahead_word("id"))) {
      coeff = scalar();
      have_coeff = true;
    }
    if (have_coeff) {
      if (eat('*')) return word().scaled(coeff);
      return OperatorExpr::identity().scaled(coeff);
    }
    return word();
  }

  Complex scalar() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == 'i') {
      ++pos_;
      return Complex::i();
    }
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
      ++pos_;
    bool imag = false;
    if (pos_ < text_.size() && text_[pos_] == 'i' && !lookahead_word("id")) {
      imag = true;
      ++pos_;
    }
    std::string lit(text_.substr(start, pos_ - start - (imag ? 1 : 0)));
    Rational q;
    try {
      q = Rational(lit);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad scalar literal", start);
    }
    if (q.get_den() == 0) throw ParseError("zero denominator", start);
    q.canonicalize();
    return imag ? Complex(Rational(0), q) : Complex(q);
  }

  std::size_t find_balanced(char close) {
    // pos_ is at the opening bracket
    const char open = text_[pos_];
    int depth = 0;
    for (std::size_t k = pos_; k < text_.size(); ++k) {
      if (text_[k] == open) ++depth;
      if (text_[k] == close && --depth == 0) return k;
    }
    throw ParseError("unbalanced brackets", pos_);
  }

  OperatorExpr word() {
    if (lookahead_word("id")) {
      pos_ += 2;
      return OperatorExpr::identity();
    }
    Word w;
    w.push_back(gen());
    while (eat('.')) w.push_back(gen());
    return OperatorExpr::from_word(std::move(w));
  }

  Generator gen() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("generator expected", pos_);
    const char c = text_[pos_];
    if (c == 'D' || c == 'A') {
      ++pos_;
      long v = natural();
      return c == 'D' ? Generator::diff(static_cast<VarIndex>(v))
                      : Generator::integ(static_cast<VarIndex>(v));
    }
    if (lookahead_word("subst") || text_.substr(pos_, 6) == "subst[") {
      pos_ += 5;
      return Generator::subst(matrix());
    }
    if (text_.substr(pos_, 4) == "mul(") {
      pos_ += 3;
      std::size_t close = find_balanced(')');
      ExpPoly f = parse_exppoly(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return Generator::mul(std::move(f));
    }
    throw ParseError("generator expected", pos_);
  }

  std::vector<Complex> scalar_list(char close) {
    std::vector<Complex> out;
    skip_ws();
    if (peek() == close) {
      ++pos_;
      return out;
    }
    for (;;) {
      std::size_t start = pos_;
      int depth = 0;
      while (pos_ < text_.size()) {
        char ch = text_[pos_];
        if (ch == '[' || ch == '(') ++depth;
        if (ch == ']' || ch == ')') {
          if (depth == 0) break;
          --depth;
        }
        if (ch == ',' && depth == 0) break;
        ++pos_;
      }
      out.push_back(Complex::parse(text_.substr(start, pos_ - start)));
      if (eat(',')) continue;
      if (eat(close)) return out;
      throw ParseError("',' or closing bracket expected", pos_);
    }
  }

  LinearSubst matrix() {
    if (!eat('[')) throw ParseError("'[' expected after subst", pos_);
    std::vector<std::vector<Complex>> rows;
    skip_ws();
    if (!eat(']')) {
      for (;;) {
        if (!eat('[')) throw ParseError("matrix row expected", pos_);
        rows.push_back(scalar_list(']'));
        if (eat(',')) continue;
        if (eat(']')) break;
        throw ParseError("',' or ']' expected", pos_);
      }
    }
    std::vector<Complex> shift;
    if (eat('@')) {
      if (!eat('[')) throw ParseError("'[' expected after '@'", pos_);
      shift = scalar_list(']');
    }
    if (rows.empty() && shift.empty()) return LinearSubst::identity();
    std::size_t d = rows.size();
    for (auto& r : rows) d = std::max(d, r.size());
    d = std::max(d, shift.size());
    LinearSubst m(static_cast<int>(d));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        m.set(static_cast<int>(i), static_cast<int>(j), rows[i][j]);
    for (std::size_t i = 0; i < shift.size(); ++i) m.set_shift(static_cast<int>(i), shift[i]);
    m.canonicalize();
    return m;
  }
};

}  // namespace

OperatorExpr parse_operator(std::string_view text) { return OpParser(text).run(); }

}  // namespace greenop
