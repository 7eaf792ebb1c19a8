#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace rectcft {

/// Arbitrary-precision rational number. GMP keeps the value canonical
/// (positive denominator, reduced) after every arithmetic operation.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

/// "num/den" with the denominator always present ("3/1", "-1/2").
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "p/q", "p" or a decimal literal such as "0.5".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = s.find('.');
  Rational r;
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t decimals = s.size() - dot - 1;
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
    if (r.get_num().set_str(digits, 10) != 0)
      throw std::invalid_argument("bad rational literal: " + s);
    r.get_den() = den;
  } else if (r.set_str(s, 10) != 0) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace rectcft
