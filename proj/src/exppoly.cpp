#include "greenop/exppoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "greenop/errors.hpp"

namespace greenop {

int total_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

ExpPoly ExpPoly::constant(const Complex& c) {
  ExpPoly p;
  p.add_term({}, {}, c);
  return p;
}

ExpPoly ExpPoly::variable(VarIndex v) {
  ExpPoly p;
  p.add_term({}, {{v, 1}}, Complex(1));
  return p;
}

ExpPoly ExpPoly::monomial(const Monomial& m, const Complex& c) {
  ExpPoly p;
  p.add_term({}, m, c);
  return p;
}

ExpPoly ExpPoly::exponential(const FreqVector& lambda) {
  ExpPoly p;
  p.add_term(lambda, {}, Complex(1));
  return p;
}

ExpPoly ExpPoly::term(const FreqVector& lambda, const Monomial& m, const Complex& c) {
  ExpPoly p;
  p.add_term(lambda, m, c);
  return p;
}

void ExpPoly::add_term(const FreqVector& f, const Monomial& m, const Complex& c) {
  if (c.is_zero()) return;
  FreqVector fc;
  for (const auto& [v, x] : f) {
    if (v < 0) throw DimensionError("negative variable index");
    if (!x.is_zero()) fc.emplace(v, x);
  }
  Monomial mc;
  for (const auto& [v, e] : m) {
    if (v < 0) throw DimensionError("negative variable index");
    if (e < 0) throw Error("negative exponent");
    if (e > 0) mc.emplace(v, e);
  }
  auto& poly = terms_[fc];
  auto it = poly.find(mc);
  if (it == poly.end()) {
    poly.emplace(mc, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) poly.erase(it);
  }
  if (poly.empty()) terms_.erase(fc);
}

bool ExpPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& [f, p] = *terms_.begin();
  return f.empty() && p.size() == 1 && p.begin()->first.empty();
}

Complex ExpPoly::constant_value() const {
  if (is_zero()) return Complex(0);
  if (!is_constant()) throw Error("not a constant: " + str());
  return terms_.begin()->second.begin()->second;
}

VarIndex ExpPoly::max_var() const {
  VarIndex m = -1;
  for (const auto& [f, p] : terms_) {
    if (!f.empty()) m = std::max(m, f.rbegin()->first);
    for (const auto& [mono, c] : p)
      if (!mono.empty()) m = std::max(m, mono.rbegin()->first);
  }
  return m;
}

int ExpPoly::degree() const {
  int d = 0;
  for (const auto& [f, p] : terms_)
    for (const auto& [mono, c] : p) d = std::max(d, total_degree(mono));
  return d;
}

bool ExpPoly::depends_on(VarIndex v) const {
  for (const auto& [f, p] : terms_) {
    if (f.count(v)) return true;
    for (const auto& [mono, c] : p)
      if (mono.count(v)) return true;
  }
  return false;
}

std::size_t ExpPoly::term_count() const {
  std::size_t n = 0;
  for (const auto& [f, p] : terms_) n += p.size();
  return n;
}

ExpPoly ExpPoly::operator-() const { return scaled(Complex(-1)); }

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (const auto& [f, p] : o.terms_)
    for (const auto& [m, c] : p) add_term(f, m, c);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) {
  for (const auto& [f, p] : o.terms_)
    for (const auto& [m, c] : p) add_term(f, m, -c);
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly r;
  for (const auto& [fa, pa] : a.terms_)
    for (const auto& [fb, pb] : b.terms_) {
      // frequencies add
      FreqVector f = fa;
      for (const auto& [v, x] : fb) {
        auto it = f.find(v);
        if (it == f.end()) {
          f.emplace(v, x);
        } else {
          it->second += x;
          if (it->second.is_zero()) f.erase(it);
        }
      }
      for (const auto& [ma, ca] : pa)
        for (const auto& [mb, cb] : pb) {
          Monomial m = ma;
          for (const auto& [v, e] : mb) m[v] += e;
          r.add_term(f, m, ca * cb);
        }
    }
  return r;
}

ExpPoly ExpPoly::scaled(const Complex& c) const {
  ExpPoly r;
  if (c.is_zero()) return r;
  for (const auto& [f, p] : terms_)
    for (const auto& [m, k] : p) r.add_term(f, m, k * c);
  return r;
}

ExpPoly ExpPoly::pow(int n) const {
  if (n < 0) throw Error("negative power");
  ExpPoly r = constant(Complex(1));
  for (int k = 0; k < n; ++k) r = r * *this;
  return r;
}

ExpPoly ExpPoly::diff(VarIndex v) const {
  ExpPoly r;
  for (const auto& [f, p] : terms_) {
    auto fit = f.find(v);
    const Complex lambda = (fit == f.end()) ? Complex(0) : fit->second;
    for (const auto& [m, c] : p) {
      // d/dx (x^e ...) = e x^{e-1} ...
      auto mit = m.find(v);
      if (mit != m.end()) {
        Monomial md = m;
        if (--md[v] == 0) md.erase(v);
        r.add_term(f, md, c * Complex(mit->second));
      }
      // chain rule on e^{lambda x}
      if (!lambda.is_zero()) r.add_term(f, m, c * lambda);
    }
  }
  return r;
}

ExpPoly ExpPoly::integrate(VarIndex v) const {
  ExpPoly r;
  for (const auto& [f, p] : terms_) {
    auto fit = f.find(v);
    if (fit == f.end()) {
      // plain power rule
      for (const auto& [m, c] : p) {
        Monomial mi = m;
        int e = ++mi[v];
        r.add_term(f, mi, c / Complex(e));
      }
      continue;
    }
    const Complex lambda = fit->second;
    FreqVector f_zero = f;  // frequency with the v-component removed
    f_zero.erase(v);
    for (const auto& [m, c] : p) {
      auto mit = m.find(v);
      const int k = (mit == m.end()) ? 0 : mit->second;
      Monomial rest = m;
      rest.erase(v);
      // Antiderivative of x^k e^{lx} is e^{lx} sum_j c_j x^j with
      // c_k = 1/l and c_{j-1} = -j c_j / l, built iteratively from the top
      // degree down. Subtracting the value at 0 leaves -c_0 as the
      // frequency-free boundary term.
      Complex cj = lambda.inverse();
      for (int j = k; j >= 0; --j) {
        Monomial mj = rest;
        if (j > 0) mj[v] = j;
        r.add_term(f, mj, c * cj);
        if (j > 0) cj = cj * Complex(-j) / lambda;
      }
      r.add_term(f_zero, rest, -(c * cj));
    }
  }
  return r;
}

ExpPoly ExpPoly::subst(const LinearSubst& ls) const {
  ExpPoly r;
  for (const auto& [f, p] : terms_) {
    // lambda . b must vanish, otherwise e^{lambda.b} is transcendental
    Complex fs(0);
    for (const auto& [v, x] : f) fs += x * ls.shift(v);
    if (!fs.is_zero())
      throw UnrepresentableError(
          "affine substitution produces a transcendental exponential factor");
    // transpose action on the frequency
    FreqVector mu;
    const int span = std::max(ls.dim(), f.empty() ? 0 : f.rbegin()->first + 1);
    for (int j = 0; j < span; ++j) {
      Complex s(0);
      for (const auto& [v, x] : f) s += x * ls.entry(v, j);
      if (!s.is_zero()) mu.emplace(j, s);
    }
    const ExpPoly base = ExpPoly::exponential(mu);
    for (const auto& [m, c] : p) {
      ExpPoly t = ExpPoly::constant(c);
      for (const auto& [v, e] : m) {
        // row v as a linear form in the new variables
        ExpPoly row = ExpPoly::constant(ls.shift(v));
        const int rs = std::max(ls.dim(), v + 1);
        for (int j = 0; j < rs; ++j) {
          const Complex a = ls.entry(v, j);
          if (!a.is_zero()) row += ExpPoly::variable(j).scaled(a);
        }
        t = t * row.pow(e);
      }
      r += t * base;
    }
  }
  return r;
}

std::map<Monomial, Complex, MonomialOrder> ExpPoly::taylor(int order) const {
  std::map<Monomial, Complex, MonomialOrder> out;
  if (order < 0) return out;
  auto add = [&out](const Monomial& m, const Complex& c) {
    auto it = out.find(m);
    if (it == out.end()) {
      if (!c.is_zero()) out.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) out.erase(it);
    }
  };
  for (const auto& [f, p] : terms_) {
    std::vector<std::pair<VarIndex, Complex>> freq(f.begin(), f.end());
    for (const auto& [m, c] : p) {
      const int room = order - total_degree(m);
      if (room < 0) continue;
      // expand e^{lambda.x} = prod_v sum_g (lambda_v x_v)^g / g! up to total
      // degree `room`, recursively over the frequency support
      struct Walker {
        const std::vector<std::pair<VarIndex, Complex>>& freq;
        const Monomial& base;
        const Complex& coeff;
        std::function<void(const Monomial&, const Complex&)> sink;
        void walk(std::size_t idx, int budget, Monomial mono, Complex acc) {
          if (idx == freq.size()) {
            sink(mono, acc);
            return;
          }
          const auto& [v, lambda] = freq[idx];
          Complex pow(1);
          Rational fact(1);
          for (int g = 0; g <= budget; ++g) {
            if (g > 0) {
              pow *= lambda;
              fact *= g;
              Monomial m2 = mono;
              m2[v] += g;
              walk(idx + 1, budget - g, m2, acc * pow / Complex(fact));
            } else {
              walk(idx + 1, budget, mono, acc);
            }
          }
        }
      };
      Walker w{freq, m, c, [&](const Monomial& mono, const Complex& acc) { add(mono, acc); }};
      w.walk(0, room, m, c);
    }
  }
  return out;
}

std::complex<double> ExpPoly::eval(std::span<const double> point) const {
  if (max_var() >= static_cast<VarIndex>(point.size()))
    throw DimensionError("evaluation point does not cover all variables");
  std::complex<double> out(0.0, 0.0);
  for (const auto& [f, p] : terms_) {
    std::complex<double> arg(0.0, 0.0);
    for (const auto& [v, x] : f) arg += x.to_double() * point[v];
    const std::complex<double> e = std::exp(arg);
    for (const auto& [m, c] : p) {
      std::complex<double> t = c.to_double();
      for (const auto& [v, k] : m) t *= std::pow(std::complex<double>(point[v], 0.0), k);
      out += t * e;
    }
  }
  return out;
}

Complex ExpPoly::eval_exact(const std::vector<Complex>& point) const {
  if (max_var() >= static_cast<VarIndex>(point.size()))
    throw DimensionError("evaluation point does not cover all variables");
  Complex out(0);
  for (const auto& [f, p] : terms_) {
    Complex arg(0);
    for (const auto& [v, x] : f) arg += x * point[v];
    if (!arg.is_zero())
      throw UnrepresentableError("exact evaluation of e^c for nonzero c");
    for (const auto& [m, c] : p) {
      Complex t = c;
      for (const auto& [v, k] : m)
        for (int j = 0; j < k; ++j) t *= point[v];
      out += t;
    }
  }
  return out;
}

namespace {

std::string var_name(VarIndex v) {
  if (v == 0) return "t";
  return "x" + std::to_string(v);
}

// "i", "-i", "3/2*i" in the expression grammar
std::string imag_str(const Rational& im) {
  if (im == 1) return "i";
  if (im == -1) return "-i";
  return im.get_str() + "*i";
}

// scalar as an expression without outer parentheses, e.g. "3/2 + 1/2*i"
std::string expr_scalar(const Complex& c) {
  if (c.is_real()) return c.re().get_str();
  if (c.re() == 0) return imag_str(c.im());
  std::string out = c.re().get_str();
  if (c.im() > 0) {
    out += " + " + imag_str(c.im());
  } else {
    out += " - " + imag_str(-c.im());
  }
  return out;
}

// Prints c as a factor prefix: "", "-", "3/2*", "i*", "(1 + i)*".
std::string coeff_prefix(const Complex& c, bool bare_term) {
  if (bare_term) {
    // the whole term is just the coefficient
    if (c.is_real() || c.re() == 0) return expr_scalar(c);
    return "(" + expr_scalar(c) + ")";
  }
  if (c.is_one()) return "";
  if (c == Complex(-1)) return "-";
  if (c.is_real()) return c.re().get_str() + "*";
  if (c.re() == 0) return imag_str(c.im()) + "*";
  return "(" + expr_scalar(c) + ")*";
}

std::string freq_str(const FreqVector& f) {
  std::string out;
  bool first = true;
  for (const auto& [v, x] : f) {
    std::string piece = coeff_prefix(x, false) + var_name(v);
    if (first) {
      out += piece;
    } else if (!piece.empty() && piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
    first = false;
  }
  return out;
}

}  // namespace

std::string ExpPoly::str() const {
  if (is_zero()) return "0";
  struct Piece {
    Complex coeff;
    std::string body;  // monomial and exponential factors, "" for constants
  };
  std::vector<Piece> pieces;
  for (const auto& [f, p] : terms_) {
    std::string ex;
    if (!f.empty()) ex = "exp(" + freq_str(f) + ")";
    for (const auto& [m, c] : p) {
      std::string body;
      for (const auto& [v, e] : m) {
        if (!body.empty()) body += "*";
        body += var_name(v);
        if (e > 1) body += "^" + std::to_string(e);
      }
      if (!ex.empty()) {
        if (!body.empty()) body += "*";
        body += ex;
      }
      pieces.push_back({c, body});
    }
  }
  std::string out;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& [c, body] = pieces[k];
    const bool bare = body.empty();
    const bool neg = (c.re() < 0) || (c.re() == 0 && c.im() < 0);
    const Complex disp = neg ? -c : c;
    std::string piece = coeff_prefix(disp, bare) + body;
    if (k == 0) {
      out += neg ? "-" + piece : piece;
    } else {
      out += neg ? " - " : " + ";
      out += piece;
    }
  }
  return out;
}

}  // namespace greenop
