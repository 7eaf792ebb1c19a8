#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/errors.hpp"

namespace rectcft {

enum class Variable { q, qhat };

inline std::string variable_name(Variable v) { return v == Variable::q ? "q" : "qhat"; }

/// Exponent of a symbolic prefactor var^(c_coefficient * c + constant) that
/// accompanies a series without being folded into it.
struct Prefactor {
  Rational c_coefficient;
  Rational constant;

  friend bool operator==(const Prefactor&, const Prefactor&) = default;
};

/// Truncated power series sum_{k=offset}^{order} a_k var^k over the ring R
/// (Rational or CPoly). Coefficients beyond `order` are unknown, so every
/// binary operation keeps the smaller order of its operands.
template <class R>
class Series {
 public:
  Series(Variable var, int order, int offset = 0)
      : var_(var), offset_(offset), order_(order) {
    if (order < offset - 1) throw std::invalid_argument("series order below offset");
    coeff_.resize(static_cast<std::size_t>(order - offset + 1));
  }

  static Series one(Variable var, int order) {
    Series s(var, order);
    if (order >= 0) s.coeff_[0] = R(1);
    return s;
  }

  static Series from_coefficients(Variable var, std::vector<R> coefficients, int offset = 0) {
    Series s(var, offset + static_cast<int>(coefficients.size()) - 1, offset);
    s.coeff_ = std::move(coefficients);
    return s;
  }

  Variable variable() const { return var_; }
  int order() const { return order_; }
  int offset() const { return offset_; }
  const std::vector<R>& coefficients() const { return coeff_; }

  /// Coefficient of var^exponent; zero outside the stored window.
  R operator[](int exponent) const {
    if (exponent < offset_ || exponent > order_) return R();
    return coeff_[static_cast<std::size_t>(exponent - offset_)];
  }
  void set(int exponent, R value) {
    if (exponent < offset_ || exponent > order_)
      throw std::out_of_range("exponent outside series window");
    coeff_[static_cast<std::size_t>(exponent - offset_)] = std::move(value);
  }

  Series truncated(int order) const {
    if (order > order_) throw std::invalid_argument("cannot extend a truncated series");
    Series out(var_, order, offset_);
    for (int k = offset_; k <= order; ++k) out.set(k, (*this)[k]);
    return out;
  }

  Series& operator+=(const Series& o) { return *this = combine(*this, o, 1); }
  Series& operator-=(const Series& o) { return *this = combine(*this, o, -1); }
  Series& operator*=(const Rational& s) {
    for (auto& a : coeff_) a *= s;
    return *this;
  }

  friend Series operator+(const Series& a, const Series& b) { return combine(a, b, 1); }
  friend Series operator-(const Series& a, const Series& b) { return combine(a, b, -1); }
  friend Series operator*(Series a, const Rational& s) { return a *= s; }
  friend Series operator*(const Rational& s, Series a) { return a *= s; }

  /// Truncated Cauchy product.
  friend Series operator*(const Series& a, const Series& b) {
    check_same_variable(a, b);
    const int order = std::min(a.order_ + b.offset_, b.order_ + a.offset_);
    Series out(a.var_, order, a.offset_ + b.offset_);
    for (int i = a.offset_; i <= a.order_; ++i) {
      const R& x = a.coeff_[static_cast<std::size_t>(i - a.offset_)];
      if (is_zero(x)) continue;
      for (int j = b.offset_; i + j <= order && j <= b.order_; ++j) {
        const R& y = b.coeff_[static_cast<std::size_t>(j - b.offset_)];
        if (is_zero(y)) continue;
        out.coeff_[static_cast<std::size_t>(i + j - out.offset_)] += x * y;
      }
    }
    return out;
  }

  /// Coefficientwise equality on the common window of known coefficients.
  bool agrees_with(const Series& o, int up_to) const {
    if (var_ != o.var_) return false;
    if (up_to > order_ || up_to > o.order_) return false;
    for (int k = std::min(offset_, o.offset_); k <= up_to; ++k)
      if (!((*this)[k] == o[k])) return false;
    return true;
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.var_ == b.var_ && a.order_ == b.order_ &&
           a.agrees_with(b, a.order_);
  }

 private:
  static void check_same_variable(const Series& a, const Series& b) {
    if (a.var_ != b.var_)
      throw std::invalid_argument("series variable mismatch: " + variable_name(a.var_) +
                                  " vs " + variable_name(b.var_));
  }
  static Series combine(const Series& a, const Series& b, int sign) {
    check_same_variable(a, b);
    const int order = std::min(a.order_, b.order_);
    Series out(a.var_, order, std::min(a.offset_, b.offset_));
    for (int k = out.offset_; k <= order; ++k) {
      R v = a[k];
      if (sign > 0) v += b[k];
      else v -= b[k];
      out.set(k, std::move(v));
    }
    return out;
  }

  Variable var_;
  int offset_;
  int order_;
  std::vector<R> coeff_;
};

namespace detail {

template <class R>
void require_power_series(const Series<R>& a, const char* what) {
  if (a.offset() != 0) throw std::invalid_argument(std::string(what) + ": Laurent series not supported");
}

}  // namespace detail

/// exp(a) for a with vanishing constant term, via n b_n = sum_k k a_k b_{n-k}.
template <class R>
Series<R> exp(const Series<R>& a) {
  detail::require_power_series(a, "exp");
  if (!is_zero(a[0])) throw std::domain_error("exp: constant term must be zero");
  Series<R> b = Series<R>::one(a.variable(), a.order());
  for (int n = 1; n <= a.order(); ++n) {
    R acc;
    for (int k = 1; k <= n; ++k) {
      if (is_zero(a[k])) continue;
      acc += a[k] * b[n - k] * Rational(k);
    }
    acc *= Rational(1, static_cast<unsigned long>(n));
    b.set(n, std::move(acc));
  }
  return b;
}

/// log(a) for a with constant term 1, via n b_n = n a_n - sum_{k<n} k b_k a_{n-k}.
template <class R>
Series<R> log(const Series<R>& a) {
  detail::require_power_series(a, "log");
  if (!(a[0] == R(1))) throw std::domain_error("log: constant term must be one");
  Series<R> b(a.variable(), a.order());
  for (int n = 1; n <= a.order(); ++n) {
    R acc = a[n] * Rational(n);
    for (int k = 1; k < n; ++k) {
      if (is_zero(b[k])) continue;
      acc -= b[k] * a[n - k] * Rational(k);
    }
    acc *= Rational(1, static_cast<unsigned long>(n));
    b.set(n, std::move(acc));
  }
  return b;
}

/// a^r = exp(r log a) for a with constant term 1.
template <class R>
Series<R> pow(const Series<R>& a, const Rational& r) {
  if (is_zero(r)) return Series<R>::one(a.variable(), a.order());
  return exp(log(a) * r);
}

/// A ratio of c-polynomials used as an exponent, e.g. 2/c.
struct CRatio {
  CPoly numerator;
  CPoly denominator;
};

/// a^(num/den) for a CPoly series: log, multiply by num, divide every
/// coefficient exactly by den, exp. A non-divisible coefficient is a
/// StructuralError.
inline Series<CPoly> pow(const Series<CPoly>& a, const CRatio& r) {
  Series<CPoly> l = log(a);
  Series<CPoly> scaled(a.variable(), a.order());
  for (int k = 1; k <= a.order(); ++k) {
    try {
      scaled.set(k, exact_divide(l[k] * r.numerator, r.denominator));
    } catch (const StructuralError& e) {
      throw StructuralError("log-coefficient " + std::to_string(k) + ": " + e.what());
    }
  }
  return exp(scaled);
}

inline Series<CPoly> pow_two_over_c(const Series<CPoly>& a) {
  return pow(a, CRatio{CPoly(2), CPoly::c()});
}

inline Series<CPoly> lift(const Series<Rational>& a) {
  std::vector<CPoly> out(a.coefficients().begin(), a.coefficients().end());
  return Series<CPoly>::from_coefficients(a.variable(), std::move(out), a.offset());
}

/// Specializes a CPoly series at a rational value of c.
inline Series<Rational> evaluate_at(const Series<CPoly>& a, const Rational& c) {
  std::vector<Rational> out;
  out.reserve(a.coefficients().size());
  for (const auto& p : a.coefficients()) out.push_back(p.evaluate(c));
  return Series<Rational>::from_coefficients(a.variable(), std::move(out), a.offset());
}

/// Throws StructuralError unless every coefficient is c-independent.
inline Series<Rational> require_constant(const Series<CPoly>& a) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
    const CPoly& p = a.coefficients()[i];
    if (!p.is_constant())
      throw StructuralError("coefficient " + std::to_string(static_cast<int>(i) + a.offset()) +
                            " depends on c: " + p.to_string());
    out.push_back(p.constant_term());
  }
  return Series<Rational>::from_coefficients(a.variable(), std::move(out), a.offset());
}

/// q -> qhat^2. A q-series known through q^n is known through qhat^(2n+1).
template <class R>
Series<R> substitute_square(const Series<R>& a) {
  if (a.variable() != Variable::q) throw std::invalid_argument("substitute_square expects a q-series");
  detail::require_power_series(a, "substitute_square");
  Series<R> out(Variable::qhat, 2 * a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) out.set(2 * k, a[k]);
  return out;
}

/// qhat-series with vanishing odd coefficients -> q-series.
template <class R>
Series<R> even_part_in_q(const Series<R>& a) {
  if (a.variable() != Variable::qhat) throw std::invalid_argument("even_part_in_q expects a qhat-series");
  detail::require_power_series(a, "even_part_in_q");
  Series<R> out(Variable::q, a.order() / 2);
  for (int k = 0; k <= a.order(); ++k) {
    if (k % 2 == 1) {
      if (!is_zero(a[k]))
        throw StructuralError("odd qhat coefficient " + std::to_string(k) + " does not vanish");
      continue;
    }
    out.set(k / 2, a[k]);
  }
  return out;
}

}  // namespace rectcft
