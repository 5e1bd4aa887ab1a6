#ifndef GREENOP_OPEXPR_HPP
#define GREENOP_OPEXPR_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "greenop/exppoly.hpp"

namespace greenop {

/// One generator of the operator ring: a partial derivative D_i, an integral
/// A_i from 0 along x_i, a substitution u |-> u(Mx+b), or multiplication by a
/// fixed exponential polynomial.
class Generator {
 public:
  enum class Kind { Diff, Int, Subst, MulBy };

  static Generator diff(VarIndex v) { return Generator(Kind::Diff, v); }
  static Generator integ(VarIndex v) { return Generator(Kind::Int, v); }
  static Generator subst(LinearSubst m);
  static Generator mul(ExpPoly f);

  Kind kind() const { return kind_; }
  VarIndex var() const { return var_; }
  const LinearSubst& map() const { return map_; }
  const ExpPoly& factor() const { return factor_; }

  ExpPoly apply(const ExpPoly& u) const;

  bool operator==(const Generator& o) const;
  bool operator<(const Generator& o) const;

  std::string str() const;

 private:
  Generator(Kind k, VarIndex v) : kind_(k), var_(v) {}

  Kind kind_;
  VarIndex var_ = 0;
  LinearSubst map_;
  ExpPoly factor_;
};

/// Composition word; w[0] is applied last (standard right-to-left
/// composition). The empty word is the identity operator.
using Word = std::vector<Generator>;

enum class Strategy {
  /// Rewrite the innermost (rightmost, applied-first) redex first. Default.
  InnermostFirst,
  /// Rewrite the outermost (leftmost) redex first.
  OutermostFirst,
};

struct NormalizeOptions {
  long budget = 1'000'000;
  Strategy strategy = Strategy::InnermostFirst;
};

/// A formal sum of coefficient-weighted composition words over the
/// generators. Values are always kept "collected": terms sorted by word,
/// duplicates merged, zero coefficients dropped. Deep rewriting to normal
/// form is a separate explicit step (normalize).
class OperatorExpr {
 public:
  OperatorExpr() = default;  // zero operator

  static OperatorExpr zero() { return {}; }
  static OperatorExpr identity();
  static OperatorExpr diff(VarIndex v);
  static OperatorExpr integ(VarIndex v);
  static OperatorExpr subst(LinearSubst m);
  static OperatorExpr mul(ExpPoly f);
  static OperatorExpr from_word(Word w, Complex coeff = Complex(1));

  bool is_zero() const { return terms_.empty(); }
  bool is_identity() const;
  const std::vector<std::pair<Complex, Word>>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  OperatorExpr operator-() const { return scaled(Complex(-1)); }
  OperatorExpr& operator+=(const OperatorExpr& o);
  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) {
    return a += b.scaled(Complex(-1));
  }
  /// Composition: (a * b)(u) = a(b(u)).
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
  OperatorExpr scaled(const Complex& c) const;
  OperatorExpr pow(int n) const;

  /// Action on an exponential polynomial, generator by generator.
  ExpPoly apply(const ExpPoly& u) const;

  /// True when every generator is a Diff (a plain differential operator).
  bool is_differential() const;
  /// True when no Int generator occurs.
  bool has_no_int() const;

  bool operator==(const OperatorExpr& o) const { return terms_ == o.terms_; }
  bool operator!=(const OperatorExpr& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void insert(Complex c, Word w);

  // sorted by word, no zero coefficients
  std::vector<std::pair<Complex, Word>> terms_;
};

/// Exhaustively applies the rewrite system until no rule fires. Action
/// preserving: normalize(A).apply(u) == A.apply(u). Throws BudgetError when
/// the step budget is exhausted.
OperatorExpr normalize(const OperatorExpr& a, const NormalizeOptions& opts = {});

/// Single rewrite step on a word, exposed for rule-level tests. Rules are
/// grouped into priority classes 0..7 (erasures; pair contractions and the
/// section axiom; evaluation at 0; factors commuting out of integrals;
/// integration by parts; integral/substitution interchange; pushing and
/// reordering; integral sorting); normalization exhausts lower classes
/// first. Returns true and fills `out` when a rule of the given class fires
/// at `pos` (an empty `out` means the word is annihilated).
bool rewrite_at(const Word& w, std::size_t pos, int priority,
                std::vector<std::pair<Complex, Word>>& out);

/// Semantic equality semi-decision: compares the action of a and b on a
/// deterministic pseudo-random sample of exponential monomials covering all
/// variables either side mentions.
bool equal_via_probing(const OperatorExpr& a, const OperatorExpr& b, int sample_size,
                       std::uint64_t seed = 0x5eed);

/// Largest variable index any generator of a touches, -1 for scalars.
VarIndex max_var(const OperatorExpr& a);

/// Deterministic sample monomial generator used by probing (also handy in
/// tests): returns c * x^alpha * e^{lambda.x} over variables 0..vars-1.
ExpPoly probe_monomial(std::uint64_t seed, int index, int vars);

/// Parses the operator grammar emitted by OperatorExpr::str():
///   opexpr := opterm (('+'|'-') opterm)*
///   opterm := (scalar '*')? word | scalar
///   word   := gen (' . ' gen)* | 'id'
///   gen    := 'D'nat | 'A'nat | 'subst' '[' rows ']' ('@' '[' scalars ']')?
///           | 'mul' '(' expr ')'
OperatorExpr parse_operator(std::string_view text);

}  // namespace greenop

#endif
