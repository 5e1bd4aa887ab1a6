#include "greenop/parse.hpp"

#include <cctype>
#include <limits>

#include "greenop/errors.hpp"

namespace greenop {

namespace {

constexpr VarIndex kMaxVarIndex = 1 << 20;

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ExpPoly run() {
    ExpPoly e = expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
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

  long natural() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("number expected", pos_);
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > kMaxVarIndex * 16L) throw ParseError("number literal too large", pos_);
      ++pos_;
    }
    return v;
  }

  ExpPoly expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    ExpPoly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  ExpPoly term() {
    ExpPoly acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  ExpPoly factor() {
    ExpPoly b = base();
    if (eat('^')) {
      std::size_t at = pos_;
      long e = natural();
      if (e > 512) throw ParseError("exponent too large", at);
      return b.pow(static_cast<int>(e));
    }
    return b;
  }

  ExpPoly base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExpPoly e = expr();
      if (!eat(')')) throw ParseError("')' expected", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long num = natural();
      if (eat('/')) {
        std::size_t at = pos_;
        long den = natural();
        if (den == 0) throw ParseError("zero denominator", at);
        return ExpPoly::constant(Complex(num, den));
      }
      return ExpPoly::constant(Complex(num));
    }
    if (c == 'i' && !std::isalnum(static_cast<unsigned char>(
                        pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'))) {
      ++pos_;
      return ExpPoly::constant(Complex::i());
    }
    if (c == 't') {
      ++pos_;
      return ExpPoly::variable(0);
    }
    if (c == 'x') {
      ++pos_;
      std::size_t at = pos_;
      long idx = natural();
      if (idx < 1 || idx > kMaxVarIndex) throw ParseError("variable index out of range", at);
      return ExpPoly::variable(static_cast<VarIndex>(idx));
    }
    if (text_.substr(pos_, 3) == "exp") {
      std::size_t at = pos_;
      pos_ += 3;
      if (!eat('(')) throw ParseError("'(' expected after exp", pos_);
      ExpPoly arg = expr();
      if (!eat(')')) throw ParseError("')' expected", pos_);
      return make_exponential(arg, at);
    }
    throw ParseError("expression expected", pos_);
  }

  // The exponent must be a linear form in the variables with no constant
  // term; anything else leaves the representable class.
  ExpPoly make_exponential(const ExpPoly& arg, std::size_t at) {
    FreqVector freq;
    for (const auto& [f, p] : arg.terms()) {
      if (!f.empty())
        throw ParseError("non-linear exponent inside exp(...)", at);
      for (const auto& [m, c] : p) {
        if (m.empty())
          throw ParseError("constant term inside exp(...) is not representable", at);
        if (total_degree(m) > 1)
          throw ParseError("non-linear exponent inside exp(...)", at);
        freq.emplace(m.begin()->first, c);
      }
    }
    return ExpPoly::exponential(freq);
  }
};

}  // namespace

ExpPoly parse_exppoly(std::string_view text) { return ExprParser(text).run(); }

}  // namespace greenop
