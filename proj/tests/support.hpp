#ifndef GREENOP_TESTS_SUPPORT_HPP
#define GREENOP_TESTS_SUPPORT_HPP

#include <cstdint>
#include <vector>

#include "greenop/cauchy.hpp"
#include "greenop/opexpr.hpp"

namespace greenop::testing {

// Deterministic generator (splitmix64) so every test run sees the same
// sample regardless of platform.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  int range(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool coin() { return next() & 1; }
};

inline const std::vector<Complex>& scalar_palette() {
  static const std::vector<Complex> p = {
      Complex(1),  Complex(-1),    Complex(2),          Complex(-2),
      Complex::i(), -Complex::i(), Complex(1, 2),       Complex(-1, 2),
  };
  return p;
}

inline Complex rand_scalar(Rng& rng) { return scalar_palette()[rng.range(8)]; }

// Random exponential polynomial over variables 0..vars-1 with a few terms.
inline ExpPoly rand_exppoly(Rng& rng, int vars, int max_degree = 3, int max_terms = 3) {
  ExpPoly p;
  const int terms = 1 + rng.range(max_terms);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    FreqVector f;
    for (int v = 0; v < vars; ++v) {
      int e = rng.range(max_degree + 1);
      if (e > 0 && rng.coin()) m[v] = e;
      if (rng.range(3) == 0) {
        Complex x = rand_scalar(rng);
        if (!x.is_zero()) f[v] = x;
      }
    }
    p += ExpPoly::term(f, m, rand_scalar(rng));
  }
  return p;
}

// Random polynomial of degree <= 4 in x1.
inline ExpPoly rand_poly_x1(Rng& rng, int max_degree = 4) {
  ExpPoly p;
  for (int d = 0; d <= max_degree; ++d)
    if (rng.coin()) p += ExpPoly::monomial({{1, d}}, rand_scalar(rng));
  return p;
}

// Random wave datum: polynomial of degree <= 4 plus exponentials with
// frequencies in {1, -1, 2, -2, i, -i}.
inline ExpPoly rand_wave_datum(Rng& rng) {
  ExpPoly p = rand_poly_x1(rng);
  static const Complex freqs[] = {Complex(1),   Complex(-1),   Complex(2),
                                  Complex(-2),  Complex::i(),  -Complex::i()};
  if (rng.coin()) p += ExpPoly::term({{1, freqs[rng.range(6)]}}, {}, rand_scalar(rng));
  return p;
}

// Random first-order factor with nonzero a0, coefficients from the palette.
inline FirstOrderFactor rand_factor(Rng& rng, int n) {
  FirstOrderFactor f;
  f.a = rng.coin() ? rand_scalar(rng) : Complex(0);
  f.a0 = rand_scalar(rng);
  for (int i = 0; i < n; ++i) f.coeffs.push_back(rand_scalar(rng));
  f.multiplicity = 1;
  return f;
}

// Random operator word from the fragment where two-strategy normalization
// has been observed to agree: at most one integral and one derivation per
// variable, substitutions only ahead of any integral, small monomial
// payloads.
inline Word rand_confluence_word(Rng& rng, int vars = 3, int max_len = 6) {
  Word w;
  const int len = 1 + rng.range(max_len);
  bool seen_int = false;
  std::vector<int> ints(vars, 0), diffs(vars, 0);
  while (static_cast<int>(w.size()) < len) {
    switch (rng.range(4)) {
      case 0: {
        int v = rng.range(vars);
        if (diffs[v]++) return w.empty() ? Word{Generator::diff(v)} : w;
        w.push_back(Generator::diff(v));
        break;
      }
      case 1: {
        int v = rng.range(vars);
        if (ints[v]++) return w.empty() ? Word{Generator::integ(v)} : w;
        w.push_back(Generator::integ(v));
        seen_int = true;
        break;
      }
      case 2: {
        Monomial m;
        if (rng.coin()) m[rng.range(vars)] = 1 + rng.range(2);
        FreqVector f;
        if (rng.range(3) == 0) {
          Complex x = rand_scalar(rng);
          if (!x.is_zero()) f[rng.range(vars)] = x;
        }
        ExpPoly p = ExpPoly::term(f, m, rand_scalar(rng));
        if (rng.range(3) == 0) p += ExpPoly::constant(Complex(1));
        w.push_back(Generator::mul(p));
        break;
      }
      default: {
        if (seen_int) break;  // no substitution to the right of an integral
        LinearSubst m;
        for (int i = 0; i < vars; ++i)
          for (int j = 0; j < vars; ++j)
            if (i == j || rng.range(3) == 0) m.set(i, j, rand_scalar(rng));
        m.canonicalize();
        w.push_back(Generator::subst(m));
        break;
      }
    }
  }
  return w;
}

}  // namespace greenop::testing

#endif
