#ifndef GREENOP_EXPPOLY_HPP
#define GREENOP_EXPPOLY_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "greenop/scalar.hpp"
#include "greenop/subst.hpp"

namespace greenop {

/// Sparse exponent vector; entries are strictly positive.
using Monomial = std::map<VarIndex, int>;

/// Degree-lexicographic order on exponent vectors.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

int total_degree(const Monomial& m);

/// Sparse frequency vector; entries are nonzero Gaussian rationals.
/// Map ordering gives the canonical (variable, re, im) lexicographic order.
using FreqVector = std::map<VarIndex, Complex>;

/// An exponential polynomial: a finite sum of terms c * x^alpha * e^{lambda.x}
/// stored canonically as frequency -> polynomial part. Two values are
/// mathematically equal iff they are structurally identical, because the
/// exponential monomials are linearly independent.
///
/// Values are immutable in spirit: every operation returns a fresh canonical
/// value, so instances can be shared freely between threads.
class ExpPoly {
 public:
  using PolyPart = std::map<Monomial, Complex, MonomialOrder>;
  using TermMap = std::map<FreqVector, PolyPart>;

  ExpPoly() = default;  // zero

  static ExpPoly constant(const Complex& c);
  static ExpPoly variable(VarIndex v);
  static ExpPoly monomial(const Monomial& m, const Complex& c);
  /// e^{lambda . x}
  static ExpPoly exponential(const FreqVector& lambda);
  static ExpPoly term(const FreqVector& lambda, const Monomial& m, const Complex& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant; throws for non-constants.
  Complex constant_value() const;
  /// Largest variable index occurring anywhere (exponents or frequencies),
  /// or -1 for constants.
  VarIndex max_var() const;
  /// Maximum total degree of the polynomial parts.
  int degree() const;
  bool depends_on(VarIndex v) const;
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const;

  ExpPoly operator-() const;
  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  ExpPoly scaled(const Complex& c) const;
  ExpPoly pow(int n) const;

  /// Exact partial derivative.
  ExpPoly diff(VarIndex v) const;
  /// Exact antiderivative with lower limit 0: diff(integrate(u,v),v) == u and
  /// the result vanishes at x_v = 0.
  ExpPoly integrate(VarIndex v) const;
  /// u(Mx + b). Frequencies transform by the transpose action; throws
  /// UnrepresentableError when a shift would require a transcendental factor
  /// e^{lambda.b}.
  ExpPoly subst(const LinearSubst& m) const;
  /// Exact Taylor coefficients at the origin up to total degree N.
  std::map<Monomial, Complex, MonomialOrder> taylor(int order) const;
  /// Floating evaluation; point[k] is the value of variable k.
  std::complex<double> eval(std::span<const double> point) const;
  /// Exact evaluation at a Gaussian-rational point (throws
  /// UnrepresentableError if an exponential does not collapse).
  Complex eval_exact(const std::vector<Complex>& point) const;

  bool operator==(const ExpPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const ExpPoly& o) const { return !(*this == o); }
  bool operator<(const ExpPoly& o) const { return terms_ < o.terms_; }

  /// Canonical text form; parse_exppoly(str()) reproduces the value.
  std::string str() const;

 private:
  void add_term(const FreqVector& f, const Monomial& m, const Complex& c);

  TermMap terms_;
};

}  // namespace greenop

#endif
