#include <doctest.h>

#include <algorithm>

#include "greenop/errors.hpp"
#include "greenop/oracle.hpp"
#include "greenop/parse.hpp"

#include "support.hpp"

using namespace greenop;
using namespace greenop::testing;

namespace {

ExpPoly ep(const char* s) { return parse_exppoly(s); }

OperatorExpr D(VarIndex v) { return OperatorExpr::diff(v); }

const FirstOrderFactor kTransport{Complex(0), Complex(1), {Complex(2)}, 1};
const FirstOrderFactor kWaveMinus{Complex(0), Complex(1), {Complex(-1)}, 1};
const FirstOrderFactor kWavePlus{Complex(0), Complex(1), {Complex(1)}, 1};

}  // namespace

TEST_CASE("lead-form check") {
  OperatorExpr wave = D(0) * D(0) - D(1) * D(1);
  CHECK(check_ck_form(wave, 2));
  CHECK(!check_ck_form(D(1) * D(1), 2));
  CHECK(!check_ck_form(D(0) + D(0) * D(1), 2));
  CHECK(check_ck_form(D(0), 1));
}

TEST_CASE("ck_normalize finds a working change of variables") {
  OperatorExpr wave = D(0) * D(0) - D(1) * D(1);
  auto [wave_t, wave_b] = ck_normalize(wave);
  CHECK(wave_b.is_identity());
  CHECK(wave_t == wave);

  OperatorExpr mixed = D(1) * D(0);  // no pure D_t^2 term
  auto [moved, b] = ck_normalize(mixed);
  CHECK(check_ck_form(moved, 2));
  CHECK(!b.is_identity());
  // moving back recovers the original up to the normalization scalar
  DiffPoly back = diffpoly_change_coords(diffpoly_from_operator(moved), b.inverse());
  DiffPoly orig = diffpoly_from_operator(mixed);
  const Complex ratio = back.begin()->second / orig.begin()->second;
  CHECK(back == diffpoly_scaled(orig, ratio));

  // an operator with no t at all still gains a lead term
  auto [moved2, b2] = ck_normalize(D(1) * D(1));
  CHECK(check_ck_form(moved2, 2));
  (void)b2;
}

TEST_CASE("factorization verification") {
  OperatorExpr wave = D(0) * D(0) - D(1) * D(1);
  CHECK(verify_factorization(wave, {kWaveMinus, kWavePlus}));

  FirstOrderFactor rep{Complex(0), Complex(1), {Complex(1)}, 2};
  OperatorExpr sq = normalize((D(0) + D(1)) * (D(0) + D(1)));
  CHECK(verify_factorization(sq, {rep}));

  OperatorExpr heat = D(0) - D(1) * D(1);
  CHECK(!verify_factorization(heat, {kWaveMinus, kWavePlus}));
  CHECK(!verify_factorization(heat, {kTransport}));

  // scalar multiples are accepted
  CHECK(verify_factorization(wave.scaled(Complex(-3)), {kWaveMinus, kWavePlus}));
}

TEST_CASE("variable ordering with nonzero prefix sums") {
  FirstOrderFactor all_ones{Complex(0), Complex(1), {Complex(1), Complex(1)}, 1};
  auto p1 = order_variables(all_ones);
  REQUIRE(p1.has_value());
  CHECK(*p1 == std::vector<VarIndex>{1, 2});

  FirstOrderFactor blocked{Complex(0), Complex(1), {Complex(-1), Complex(1)}, 1};
  auto p2 = order_variables(blocked);
  REQUIRE(p2.has_value());
  CHECK(*p2 == std::vector<VarIndex>{2, 1});  // 1 - 1 = 0 blocks the identity order

  FirstOrderFactor constant_only{Complex(2), Complex(1), {}, 1};
  auto p3 = order_variables(constant_only);
  REQUIRE(p3.has_value());
  CHECK(p3->empty());

  // no valid ordering exists here; reported, not guessed
  FirstOrderFactor none{Complex(0), Complex(1), {Complex(-1), Complex(-1)}, 1};
  CHECK(!order_variables(none).has_value());
}

TEST_CASE("exhaustive search confirms the reported ordering failures") {
  // brute force over the palette for n = 2: order_variables returns nullopt
  // exactly when both arrangements hit a zero prefix sum
  const auto& pal = scalar_palette();
  int failures = 0;
  for (const auto& a0 : pal)
    for (const auto& a1 : pal)
      for (const auto& a2 : pal) {
        FirstOrderFactor f{Complex(0), a0, {a1, a2}, 1};
        const bool order12 = !(a0 + a1).is_zero();
        const bool order21 = !(a0 + a2).is_zero();
        auto perm = order_variables(f);
        CHECK(perm.has_value() == (order12 || order21));
        if (!perm.has_value()) ++failures;
      }
  CHECK(failures > 0);  // such patterns exist, e.g. (1, -1, -1)
}

TEST_CASE("characteristic change of variables") {
  auto [z, zi] = charvar_matrix(kTransport, *order_variables(kTransport));
  CHECK(z.entry(0, 0) == Complex(1));
  CHECK(z.entry(0, 1) == Complex(0));
  CHECK(z.entry(1, 0) == Complex(1));
  CHECK(z.entry(1, 1) == Complex(-1, 2));
  CHECK(zi.after(z).is_identity());

  FirstOrderFactor ode{Complex(1), Complex(2), {}, 1};
  auto [z0, zi0] = charvar_matrix(ode, {});
  CHECK(z0.is_identity());
  CHECK(zi0.is_identity());

  auto [zm, zim] = charvar_matrix(kWaveMinus, *order_variables(kWaveMinus));
  CHECK(zm.entry(1, 0) == Complex(1));  // xbar = t + x1
  CHECK(zm.entry(1, 1) == Complex(1));
  (void)zim;
}

TEST_CASE("first-order state operator") {
  StateOperator h = first_order_state(kTransport);
  CHECK(h.apply({{ep("exp(3*x1)")}}) == ep("exp(3*x1 - 6*t)"));
  CHECK(h.apply({{ExpPoly()}}) == ExpPoly());

  FirstOrderFactor ode{Complex(1), Complex(1), {}, 1};
  CHECK(first_order_state(ode).apply({{ep("1")}}) == ep("exp(-t)"));

  // operator-level identities
  OperatorExpr t_op = kTransport.as_operator();
  CHECK(normalize(t_op * h.folded_row(0)).is_zero());
}

TEST_CASE("first-order right inverse") {
  FirstOrderFactor ddt{Complex(0), Complex(1), {}, 1};
  CHECK(first_order_rightinv(ddt).op == OperatorExpr::integ(0));

  SignalOperator g = first_order_rightinv(kTransport);
  CHECK(g.apply(ep("1")) == ep("t"));
  CHECK(normalize(kTransport.as_operator() * g.op) == OperatorExpr::identity());

  FirstOrderFactor ode{Complex(1), Complex(1), {}, 1};
  CHECK(first_order_rightinv(ode).apply(ep("1")) == ep("1 - exp(-t)"));
}

TEST_CASE("fallback characteristic coordinates when no ordering exists") {
  FirstOrderFactor f{Complex(0), Complex(1), {Complex(-1), Complex(-1)}, 1};
  REQUIRE(!order_variables(f).has_value());
  StateOperator h = first_order_state(f);
  ExpPoly u = h.apply({{ep("exp(x1 + x2)")}});
  CHECK(u == ep("exp(x1 + x2 + 2*t)"));
  CHECK(f.as_operator().apply(u) == ExpPoly());

  SignalOperator g = first_order_rightinv(f);
  ExpPoly gf = g.apply(ep("1"));
  CHECK(f.as_operator().apply(gf) == ep("1"));
  CHECK(gf.subst(LinearSubst::eval_at_zero(0)) == ExpPoly());
  CHECK_THROWS_AS(general_solution_power(f, 2), InvalidProblemError);
}

TEST_CASE("kernel generators of a power") {
  FirstOrderFactor ddt{Complex(0), Complex(1), {}, 1};
  auto gens = general_solution_power(ddt, 2);
  REQUIRE(gens.size() == 2);
  ExpPoly u = gens[0].apply(ep("1")) + gens[1].apply(ep("1"));
  CHECK(u == ep("1 + t"));
  CHECK(D(0).pow(2).apply(u) == ExpPoly());

  FirstOrderFactor f{Complex(0), Complex(1), {Complex(1)}, 1};
  auto g2 = general_solution_power(f, 2);
  OperatorExpr t2 = f.as_operator() * f.as_operator();
  Rng rng(23);
  for (int k = 0; k < 15; ++k) {
    ExpPoly c = rand_exppoly(rng, 2, 2, 2).subst(LinearSubst::eval_at_zero(0));
    for (const auto& gen : g2) CHECK(t2.apply(gen.apply(c)) == ExpPoly());
  }

  // multiplicity one agrees with the state operator after the data is moved
  // into characteristic coordinates
  auto g1 = general_solution_power(kTransport, 1);
  StateOperator h = first_order_state(kTransport);
  ExpPoly data = ep("exp(3*x1)");
  CHECK(g1[0].apply(data.subst(h.lift)) == h.apply({{data}}));
}

TEST_CASE("solve_cauchy on the named problems") {
  CauchyProblem transport{1, {kTransport}, {ep("exp(3*x1)")}};
  CauchySolution st = solve_cauchy(transport);
  CHECK(st.u == ep("exp(3*x1 - 6*t)"));

  CauchyProblem wave{1, {kWaveMinus, kWavePlus}, {ep("x1^2"), ExpPoly()}};
  CHECK(solve_cauchy(wave).u == ep("x1^2 + t^2"));

  CauchyProblem wave2{1, {kWaveMinus, kWavePlus}, {ExpPoly(), ep("x1")}};
  CHECK(solve_cauchy(wave2).u == ep("t*x1"));
}

TEST_CASE("solution is independent of the factor order") {
  Rng rng(29);
  FirstOrderFactor third{Complex(1), Complex(1), {Complex(2)}, 1};
  std::vector<FirstOrderFactor> factors{kWaveMinus, kWavePlus, third};
  std::vector<ExpPoly> data{ep("x1^2"), ep("x1"), ep("1")};
  std::sort(factors.begin(), factors.end(),
            [](const FirstOrderFactor& a, const FirstOrderFactor& b) {
              return a.coeffs[0] < b.coeffs[0];
            });
  ExpPoly reference;
  std::vector<int> idx{0, 1, 2};
  bool first = true;
  do {
    CauchyProblem p{1, {factors[idx[0]], factors[idx[1]], factors[idx[2]]}, data};
    ExpPoly u = solve_cauchy(p).u;
    if (first) {
      reference = u;
      first = false;
    } else {
      CHECK(u == reference);
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  CHECK(!reference.is_zero());
}

TEST_CASE("repeated factors via multiplicity") {
  FirstOrderFactor rep{Complex(0), Complex(1), {Complex(1)}, 2};
  CauchyProblem p{1, {rep}, {ep("x1"), ep("1")}};
  CauchySolution sol = solve_cauchy(p);
  OperatorExpr t2 = normalize(rep.as_operator() * rep.as_operator());
  CHECK(t2.apply(sol.u) == ExpPoly());
  CHECK(trace(sol.basis, sol.u).coords[0] == ep("x1"));
  CHECK(trace(sol.basis, sol.u).coords[1] == ep("1"));

  // identical to listing the factor twice
  FirstOrderFactor unit = rep;
  unit.multiplicity = 1;
  CauchyProblem q{1, {unit, unit}, p.data};
  CHECK(solve_cauchy(q).u == sol.u);
}

TEST_CASE("zero coefficients reduce the variable set") {
  FirstOrderFactor f{Complex(0), Complex(1), {Complex(2), Complex(0)}, 1};
  CauchyProblem p{2, {f}, {ep("exp(3*x1)*x2")}};
  CauchySolution sol = solve_cauchy(p);
  CHECK(sol.u == ep("exp(3*x1 - 6*t)*x2"));
}

TEST_CASE("linearity of the state in the data") {
  Rng rng(31);
  CauchyProblem base{1, {kWaveMinus, kWavePlus}, {ExpPoly(), ExpPoly()}};
  for (int k = 0; k < 10; ++k) {
    ExpPoly f1 = rand_poly_x1(rng), g1 = rand_poly_x1(rng);
    ExpPoly f2 = rand_poly_x1(rng), g2 = rand_poly_x1(rng);
    Complex c = rand_scalar(rng);
    CauchyProblem pa = base, pb = base, pc = base;
    pa.data = {f1, g1};
    pb.data = {f2, g2};
    pc.data = {f1 + f2.scaled(c), g1 + g2.scaled(c)};
    CHECK(solve_cauchy(pc).u == solve_cauchy(pa).u + solve_cauchy(pb).u.scaled(c));
  }
}

TEST_CASE("solver preconditions are validated") {
  CauchyProblem arity{1, {kTransport}, {ep("x1"), ep("x1")}};
  CHECK_THROWS_AS(solve_cauchy(arity), InvalidProblemError);

  FirstOrderFactor a0zero{Complex(1), Complex(0), {Complex(1)}, 1};
  CauchyProblem bad{1, {a0zero}, {ep("x1")}};
  CHECK_THROWS_AS(solve_cauchy(bad), InvalidProblemError);

  CauchyProblem tdata{1, {kTransport}, {ep("t*x1")}};
  CHECK_THROWS_AS(solve_cauchy(tdata), InvalidProblemError);

  CauchyProblem nofactors{1, {}, {}};
  CHECK_THROWS_AS(solve_cauchy(nofactors), InvalidProblemError);
}

TEST_CASE("cauchy data transformation through a symbol") {
  // g = (T u)(0, x) for T = D_t + 2 D_1 with data (u, u_t) at t = 0
  std::vector<ExpPoly> data{ep("x1^2"), ep("x1")};
  ExpPoly g = apply_symbol_to_cauchy_data(kTransport.symbol(), data, 0);
  CHECK(g == ep("x1 + 4*x1"));  // u_t + 2 (x1^2)' = x1 + 4 x1
}

TEST_CASE("fourth order and three space variables stay exact") {
  FirstOrderFactor m2 = kWaveMinus, p2 = kWavePlus;
  m2.multiplicity = p2.multiplicity = 2;
  CauchyProblem fourth{1, {m2, p2}, {ep("x1^2"), ep("x1"), ep("1"), ExpPoly()}};
  CauchySolution sol = solve_cauchy(fourth);
  CHECK(sol.u == ep("x1^2 + t*x1 + 1/2*t^2"));
  VerificationReport rep = verify_solution(fourth, sol);
  CHECK(rep.all_pass());

  FirstOrderFactor f1{Complex(1), Complex(1), {Complex(1), Complex(-1), Complex(2)}, 1};
  FirstOrderFactor f2{Complex::i(), Complex(2), {Complex::i(), Complex(1), Complex(0)}, 1};
  CauchyProblem wide{3, {f1, f2}, {ep("x1*x3 + exp(i*x2)"), ep("x2^2")}};
  CauchySolution ws = solve_cauchy(wide);
  VerifyOptions opts;
  opts.probe_samples = 20;
  CHECK(verify_solution(wide, ws, opts).all_pass());
}

TEST_CASE("composing problems of different space dimension pads coefficients") {
  CauchyProblem outer{1, {kTransport}, {ep("x1")}};
  FirstOrderFactor f2{Complex(0), Complex(1), {Complex(0), Complex(1)}, 1};
  CauchyProblem inner{2, {f2}, {ep("x2^2")}};
  CauchyProblem prod = compose_cauchy(outer, inner);
  CHECK(prod.n == 2);
  REQUIRE(prod.factors.size() == 2);
  CHECK(prod.factors[0].n() == 2);
  CauchySolution sol = solve_cauchy(prod);
  CHECK(trace(sol.basis, sol.u).coords[0] == ep("x2^2"));
  ExpPoly v = prod.factors[1].as_operator().apply(sol.u);
  CHECK(v.subst(LinearSubst::eval_at_zero(0)) == ep("x1"));
}

TEST_CASE("composition of problem files") {
  CauchyProblem outer{1, {kWaveMinus}, {ep("2*x1")}};
  CauchyProblem inner{1, {kWavePlus}, {ep("x1^2")}};
  CauchyProblem prod = compose_cauchy(outer, inner);
  REQUIRE(prod.factors.size() == 2);
  CHECK(prod.order() == 2);
  // the composite solution u satisfies u(0) = inner data and
  // (T_inner u)(0) = outer data
  CauchySolution sol = solve_cauchy(prod);
  CHECK(trace(sol.basis, sol.u).coords[0] == ep("x1^2"));
  ExpPoly v = kWavePlus.as_operator().apply(sol.u);
  CHECK(v.subst(LinearSubst::eval_at_zero(0)) == ep("2*x1"));

  // composing a problem with itself pools the multiplicity
  CauchyProblem twice = compose_cauchy(inner, inner);
  REQUIRE(twice.factors.size() == 1);
  CHECK(twice.factors[0].multiplicity == 2);
  CHECK(solve_cauchy(twice).u == solve_cauchy(twice).u);
}
