#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rectcft/algebra/rational.hpp"
#include "rectcft/errors.hpp"

namespace rectcft {

/// Polynomial in the formal central-charge symbol c with rational
/// coefficients. Index i of the coefficient list is the power of c.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
class CPoly {
 public:
  CPoly() = default;
  CPoly(const Rational& constant) {  // NOLINT(google-explicit-constructor)
    if (!rectcft::is_zero(constant)) coeff_.push_back(constant);
  }
  CPoly(long constant) : CPoly(Rational(constant)) {}  // NOLINT

  static CPoly c() { return from_coefficients({Rational(0), Rational(1)}); }

  static CPoly from_coefficients(std::vector<Rational> coefficients) {
    CPoly p;
    p.coeff_ = std::move(coefficients);
    p.trim();
    return p;
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeff_.size()) - 1; }
  bool is_zero() const { return coeff_.empty(); }
  bool is_constant() const { return coeff_.size() <= 1; }

  Rational coefficient(std::size_t power) const {
    return power < coeff_.size() ? coeff_[power] : Rational(0);
  }
  Rational constant_term() const { return coefficient(0); }
  std::span<const Rational> coefficients() const { return coeff_; }

  Rational evaluate(const Rational& at) const {
    Rational acc;
    for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) acc = acc * at + *it;
    return acc;
  }

  CPoly& operator+=(const CPoly& o) {
    if (o.coeff_.size() > coeff_.size()) coeff_.resize(o.coeff_.size());
    for (std::size_t i = 0; i < o.coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
    trim();
    return *this;
  }
  CPoly& operator-=(const CPoly& o) {
    if (o.coeff_.size() > coeff_.size()) coeff_.resize(o.coeff_.size());
    for (std::size_t i = 0; i < o.coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
    trim();
    return *this;
  }
  CPoly& operator*=(const Rational& s) {
    if (rectcft::is_zero(s)) {
      coeff_.clear();
      return *this;
    }
    for (auto& x : coeff_) x *= s;
    return *this;
  }
  CPoly& operator*=(const CPoly& o) {
    *this = *this * o;
    return *this;
  }

  friend CPoly operator*(const CPoly& a, const CPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coeff_.size() + b.coeff_.size() - 1);
    for (std::size_t i = 0; i < a.coeff_.size(); ++i) {
      if (rectcft::is_zero(a.coeff_[i])) continue;
      for (std::size_t j = 0; j < b.coeff_.size(); ++j) out[i + j] += a.coeff_[i] * b.coeff_[j];
    }
    return from_coefficients(std::move(out));
  }
  friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
  friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
  friend CPoly operator*(CPoly a, const Rational& s) { return a *= s; }
  friend CPoly operator*(const Rational& s, CPoly a) { return a *= s; }
  friend CPoly operator-(CPoly a) {
    for (auto& x : a.coeff_) x = -x;
    return a;
  }
  friend bool operator==(const CPoly& a, const CPoly& b) { return a.coeff_ == b.coeff_; }

  /// Exact division by the symbol c; the constant term must vanish.
  CPoly divided_by_c() const {
    if (is_zero()) return {};
    if (!rectcft::is_zero(coeff_[0]))
      throw StructuralError("polynomial " + to_string() + " is not divisible by c");
    return from_coefficients(std::vector<Rational>(coeff_.begin() + 1, coeff_.end()));
  }

  /// "c^2/8 + 3c/4"-style rendering, highest power first.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      const Rational& a = coeff_[static_cast<std::size_t>(k)];
      if (rectcft::is_zero(a)) continue;
      Rational mag = abs(a);
      if (!out.empty()) out += sgn(a) < 0 ? " - " : " + ";
      else if (sgn(a) < 0) out += "-";
      std::string m = mag.get_str();
      if (k == 0) out += m;
      else {
        if (mag != 1) out += m + "*";
        out += k == 1 ? "c" : "c^" + std::to_string(k);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!coeff_.empty() && rectcft::is_zero(coeff_.back())) coeff_.pop_back();
  }
  std::vector<Rational> coeff_;
};

inline bool is_zero(const CPoly& p) { return p.is_zero(); }

/// Exact polynomial division; throws StructuralError on a nonzero remainder.
inline CPoly exact_divide(const CPoly& num, const CPoly& den) {
  if (den.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (num.is_zero()) return {};
  std::vector<Rational> rem(num.coefficients().begin(), num.coefficients().end());
  const int dd = den.degree();
  const Rational& lead = den.coefficients().back();
  if (num.degree() < dd)
    throw StructuralError(num.to_string() + " is not divisible by " + den.to_string());
  std::vector<Rational> quot(static_cast<std::size_t>(num.degree() - dd + 1));
  for (int k = num.degree() - dd; k >= 0; --k) {
    Rational q = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dd; ++j)
      rem[static_cast<std::size_t>(k + j)] -= q * den.coefficients()[static_cast<std::size_t>(j)];
  }
  if (std::any_of(rem.begin(), rem.end(), [](const Rational& r) { return !is_zero(r); }))
    throw StructuralError(num.to_string() + " is not divisible by " + den.to_string());
  return CPoly::from_coefficients(std::move(quot));
}

}  // namespace rectcft
