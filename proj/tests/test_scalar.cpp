#include <doctest.h>

#include "greenop/errors.hpp"
#include "greenop/scalar.hpp"

using namespace greenop;

TEST_CASE("gaussian rational arithmetic is exact") {
  Complex a(1, 2), b(1, 3);
  CHECK(a + b == Complex(5, 6));
  CHECK(a * b == Complex(1, 6));
  CHECK(a - a == Complex(0));
  Complex i = Complex::i();
  CHECK(i * i == Complex(-1));
  CHECK((a + i) * (a + i).conj() == Complex((a + i).norm()));
}

TEST_CASE("division and inverse") {
  Complex z(Rational(3, 2), Rational(-1, 2));
  CHECK(z * z.inverse() == Complex(1));
  CHECK(Complex(1) / z == z.inverse());
  CHECK_THROWS_AS(Complex(0).inverse(), Error);
}

TEST_CASE("ordering is a strict total order on samples") {
  std::vector<Complex> v = {Complex(0), Complex(1), Complex(-1), Complex::i(),
                            Complex(1, 2), Complex(Rational(1), Rational(-2))};
  for (const auto& a : v)
    for (const auto& b : v) {
      if (a == b) {
        CHECK(!(a < b));
        CHECK(!(b < a));
      } else {
        CHECK((a < b) != (b < a));
      }
    }
}

TEST_CASE("scalar literal round trips") {
  const char* cases[] = {"0",      "1",     "-1",     "3/2",     "-3/2", "i",
                         "-i",     "1/2i",  "-1/2i",  "3/2+1/2i", "1-2i", "-1/2-i"};
  for (const char* s : cases) {
    Complex c = Complex::parse(s);
    CHECK(Complex::parse(c.str()) == c);
  }
  CHECK(Complex::parse("3/2+1/2i") == Complex(Rational(3, 2), Rational(1, 2)));
  CHECK(Complex::parse(" 2 ") == Complex(2));
  CHECK(Complex::parse("4/6") == Complex(2, 3));
}

TEST_CASE("bad scalar literals are rejected with a position") {
  CHECK_THROWS_AS(Complex::parse(""), ParseError);
  CHECK_THROWS_AS(Complex::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Complex::parse("1+2i+3"), ParseError);
  CHECK_THROWS_AS(Complex::parse("x"), ParseError);
}

TEST_CASE("two-part literals combine additively") {
  CHECK(Complex::parse("1+2i") == Complex(Rational(1), Rational(2)));
  CHECK(Complex::parse("1-i") == Complex(Rational(1), Rational(-1)));
}

TEST_CASE("factorial helper") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
}
