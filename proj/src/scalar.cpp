#include "greenop/scalar.hpp"

#include <cctype>

#include "greenop/errors.hpp"

namespace greenop {

Complex::Complex(long num, long den) : re_(num, den), im_(0) {
  if (den == 0) throw Error("rational with zero denominator");
  re_.canonicalize();
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

Complex Complex::inverse() const {
  Rational n = norm();
  if (n == 0) throw Error("division by zero");
  return Complex(re_ / n, -im_ / n);
}

Complex& Complex::operator/=(const Complex& o) { return *this *= o.inverse(); }

bool Complex::operator<(const Complex& o) const {
  int c = cmp(re_, o.re_);
  if (c != 0) return c < 0;
  return cmp(im_, o.im_) < 0;
}

namespace {

std::string rat_str(const Rational& q) { return q.get_str(); }

// Appends "q" or "q i" (with q == 1 collapsed) to out.
void append_imag(std::string& out, const Rational& q) {
  if (q == 1) {
    out += "i";
  } else if (q == -1) {
    out += "-i";
  } else {
    out += rat_str(q);
    out += "i";
  }
}

}  // namespace

std::string Complex::str() const {
  if (is_zero()) return "0";
  if (im_ == 0) return rat_str(re_);
  if (re_ == 0) {
    std::string out;
    append_imag(out, im_);
    return out;
  }
  std::string out = rat_str(re_);
  if (im_ > 0) out += "+";
  append_imag(out, im_);
  return out;
}

namespace {

struct ScalarCursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }

  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  Rational number() {
    skip_ws();
    std::size_t start = pos;
    while (!done() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("digit expected", pos);
    std::string num(text.substr(start, pos - start));
    if (peek() == '/') {
      ++pos;
      std::size_t dstart = pos;
      while (!done() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == dstart) throw ParseError("denominator expected", pos);
      num += '/';
      num += text.substr(dstart, pos - dstart);
    }
    Rational q(num);
    if (q.get_den() == 0) throw ParseError("zero denominator", start);
    q.canonicalize();
    return q;
  }

  // sign? ( 'i' | number ('*'? 'i')? )
  Complex part() {
    skip_ws();
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip_ws();
    }
    if (peek() == 'i') {
      ++pos;
      return Complex(Rational(0), Rational(sign));
    }
    Rational q = number();
    if (sign < 0) q = -q;
    skip_ws();
    if (peek() == '*') {
      std::size_t save = pos;
      ++pos;
      skip_ws();
      if (peek() == 'i') {
        ++pos;
        return Complex(Rational(0), q);
      }
      pos = save;
      return Complex(q);
    }
    if (peek() == 'i') {
      ++pos;
      return Complex(Rational(0), q);
    }
    return Complex(q);
  }
};

}  // namespace

Complex Complex::parse(std::string_view text) {
  ScalarCursor c{text};
  Complex v = c.part();
  c.skip_ws();
  if (c.peek() == '+' || c.peek() == '-') {
    Complex w = c.part();
    v += w;
  }
  c.skip_ws();
  if (!c.done()) throw ParseError("trailing characters in scalar literal", c.pos);
  return v;
}

Rational factorial(int n) {
  Rational r(1);
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace greenop
