#include <doctest.h>

#include "greenop/errors.hpp"
#include "greenop/parse.hpp"

#include "support.hpp"

using namespace greenop;
using greenop::testing::Rng;
using greenop::testing::rand_exppoly;

namespace {

const ExpPoly kZero;

ExpPoly ep(const char* s) { return parse_exppoly(s); }

}  // namespace

TEST_CASE("algebra basics") {
  CHECK(ep("x1") + ep("-x1") == kZero);
  CHECK(ep("exp(x1)") * ep("exp(2*x1)") == ep("exp(3*x1)"));
  CHECK(ep("x1*exp(x1)") * ep("x1") == ep("x1^2*exp(x1)"));
  CHECK(ep("x1^2").degree() == 2);
  CHECK(ep("x1 + x2").max_var() == 2);
  CHECK(ep("exp(x3)").max_var() == 3);
  CHECK(kZero.is_zero());
  CHECK(ep("1/2").constant_value() == Complex(1, 2));
}

TEST_CASE("differentiation") {
  CHECK(ep("x1^2*exp(3*x1)").diff(1) == ep("2*x1*exp(3*x1) + 3*x1^2*exp(3*x1)"));
  CHECK(ep("5").diff(1) == kZero);
  CHECK(ep("exp(i*x1)").diff(1) == ep("i*exp(i*x1)"));
  CHECK(ep("t*x1").diff(0) == ep("x1"));
}

TEST_CASE("integration closed forms") {
  CHECK(ep("x1^2").integrate(1) == ep("1/3*x1^3"));
  CHECK(ep("exp(2*x1)").integrate(1) == ep("1/2*exp(2*x1) - 1/2"));
  CHECK(ep("x1*exp(x1)").integrate(1) == ep("(x1 - 1)*exp(x1) + 1"));
}

TEST_CASE("integrate/diff round trip and section property") {
  Rng rng(101);
  for (int k = 0; k < 40; ++k) {
    const int vars = 1 + rng.range(3);
    ExpPoly u = rand_exppoly(rng, vars);
    const VarIndex v = rng.range(vars);
    ExpPoly big = u.integrate(v);
    CHECK(big.diff(v) == u);
    CHECK(big.subst(LinearSubst::eval_at_zero(v)) == kZero);
  }
}

TEST_CASE("ring laws on random samples") {
  Rng rng(202);
  for (int k = 0; k < 25; ++k) {
    ExpPoly a = rand_exppoly(rng, 2), b = rand_exppoly(rng, 2), c = rand_exppoly(rng, 2);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("substitution examples") {
  // e^{x1} with x1 -> x1 + i x2
  LinearSubst m;
  m.set(1, 1, Complex(1));
  m.set(1, 2, Complex::i());
  m.canonicalize();
  CHECK(ep("exp(x1)").subst(m) == ep("exp(x1 + i*x2)"));

  CHECK(ep("x1^2*exp(t - x2)").subst(LinearSubst::identity()) == ep("x1^2*exp(t - x2)"));

  LinearSubst shear;  // x1 -> x1 + x2
  shear.set(1, 1, Complex(1));
  shear.set(1, 2, Complex(1));
  shear.canonicalize();
  CHECK(ep("x1^2").subst(shear) == ep("x1^2 + 2*x1*x2 + x2^2"));
}

TEST_CASE("substitution functoriality") {
  Rng rng(303);
  for (int k = 0; k < 20; ++k) {
    LinearSubst m, n;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j || rng.range(3) == 0) m.set(i, j, testing::rand_scalar(rng));
        if (i == j || rng.range(3) == 0) n.set(i, j, testing::rand_scalar(rng));
      }
    m.canonicalize();
    n.canonicalize();
    ExpPoly u = rand_exppoly(rng, 3, 2, 2);
    CHECK(u.subst(n).subst(m) == u.subst(n.after(m)));
  }
}

TEST_CASE("affine substitutions evaluate polynomials exactly and reject exponentials") {
  LinearSubst at_one = LinearSubst::point({Complex(0), Complex(1)});
  CHECK(ep("x1^2 - x1").subst(at_one) == kZero);
  CHECK(ep("x1^2 + 1").subst(at_one) == ep("2"));
  CHECK_THROWS_AS(ep("exp(x1)").subst(at_one), UnrepresentableError);
}

TEST_CASE("taylor expansion") {
  CHECK(ep("exp(x1)").taylor(2) ==
        ep("1 + x1 + 1/2*x1^2").taylor(2));
  CHECK(ep("x1*x2").taylor(1).empty());
  // series of the integration example
  CHECK(ep("1/2*exp(2*x1) - 1/2").taylor(3) == ep("x1 + x1^2 + 2/3*x1^3").taylor(3));
}

TEST_CASE("taylor of a product is the truncated Cauchy product") {
  Rng rng(404);
  for (int k = 0; k < 15; ++k) {
    ExpPoly u = rand_exppoly(rng, 2, 2, 2), v = rand_exppoly(rng, 2, 2, 2);
    const int order = 4;
    auto tu = u.taylor(order), tv = v.taylor(order);
    std::map<Monomial, Complex, MonomialOrder> prod;
    for (const auto& [ma, ca] : tu)
      for (const auto& [mb, cb] : tv) {
        Monomial m = ma;
        for (const auto& [var, e] : mb) m[var] += e;
        if (total_degree(m) > order) continue;
        auto it = prod.find(m);
        if (it == prod.end())
          prod.emplace(m, ca * cb);
        else {
          it->second += ca * cb;
          if (it->second.is_zero()) prod.erase(it);
        }
      }
    CHECK((u * v).taylor(order) == prod);
  }
}

TEST_CASE("numeric evaluation") {
  std::vector<double> p1 = {0.0, 3.0};
  CHECK(ep("x1^2").eval(p1).real() == doctest::Approx(9.0));
  std::vector<double> p2 = {0.0, 0.0};
  CHECK(ep("exp(x1)").eval(p2).real() == doctest::Approx(1.0));
  std::vector<double> p3 = {0.5, 1.0};  // t = 0.5, x1 = 1.0
  CHECK(ep("exp(x1 - 2*t)").eval(p3).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(ep("x2").eval(p1), DimensionError);
}

TEST_CASE("exact evaluation at rational points") {
  CHECK(ep("x1^2 + t").eval_exact({Complex(1, 2), Complex(2)}) == Complex(Rational(9, 2)));
  CHECK_THROWS_AS(ep("exp(x1)").eval_exact({Complex(0), Complex(1)}), UnrepresentableError);
}

TEST_CASE("canonical form stores no zeros") {
  ExpPoly u = ep("x1 + exp(x2)") - ep("exp(x2)");
  CHECK(u.terms().size() == 1);
  CHECK(u == ep("x1"));
}
