#ifndef GREENOP_SCALAR_HPP
#define GREENOP_SCALAR_HPP

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace greenop {

using Rational = mpq_class;

/// Gaussian rational a + b*i. This is the ground field of the whole engine:
/// every coefficient, frequency and matrix entry is one of these, so equality
/// is decidable and all computations are bit-exact.
class Complex {
 public:
  Complex() : re_(0), im_(0) {}
  Complex(long v) : re_(v), im_(0) {}
  Complex(Rational re) : re_(std::move(re)), im_(0) {}
  Complex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(long num, long den);

  static Complex i() { return Complex(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_one() const { return re_ == 1 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  Complex operator-() const { return Complex(-re_, -im_); }
  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }

  Complex inverse() const;
  Complex conj() const { return Complex(re_, -im_); }
  /// re^2 + im^2, exact.
  Rational norm() const { return re_ * re_ + im_ * im_; }

  bool operator==(const Complex& o) const { return re_ == o.re_ && im_ == o.im_; }
  bool operator!=(const Complex& o) const { return !(*this == o); }
  /// Lexicographic (re, im); an arbitrary but fixed total order used for
  /// canonical term ordering, not a field order.
  bool operator<(const Complex& o) const;

  std::complex<double> to_double() const { return {re_.get_d(), im_.get_d()}; }

  /// Compact literal: "0", "3/2", "-i", "1/2i", "3/2+1/2i".
  std::string str() const;
  /// Parses the compact literal format emitted by str().
  static Complex parse(std::string_view text);

 private:
  Rational re_, im_;
};

/// n! as an exact rational (convenience for Taylor coefficients).
Rational factorial(int n);

}  // namespace greenop

#endif
