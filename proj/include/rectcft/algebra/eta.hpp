#pragma once

#include <stdexcept>
#include <vector>

#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/series.hpp"

namespace rectcft {

/// p_0..p_kmax by Euler's pentagonal-number recurrence.
inline std::vector<BigInt> partition_numbers(int kmax) {
  if (kmax < 0) throw std::invalid_argument("partition_numbers: kmax < 0");
  std::vector<BigInt> p(static_cast<std::size_t>(kmax) + 1);
  p[0] = 1;
  for (int n = 1; n <= kmax; ++n) {
    BigInt acc = 0;
    for (int j = 1;; ++j) {
      const int g1 = j * (3 * j - 1) / 2;
      if (g1 > n) break;
      const int g2 = j * (3 * j + 1) / 2;
      const bool plus = j % 2 == 1;
      auto idx = [](int i) { return static_cast<std::size_t>(i); };
      if (plus) acc += p[idx(n - g1)];
      else acc -= p[idx(n - g1)];
      if (g2 <= n) {
        if (plus) acc += p[idx(n - g2)];
        else acc -= p[idx(n - g2)];
      }
    }
    p[static_cast<std::size_t>(n)] = acc;
  }
  return p;
}

/// Exponent s of prod (1-q^n)^(-s), written s = c_coefficient * c + constant.
struct EtaExponent {
  Rational c_coefficient;
  Rational constant;

  CPoly as_cpoly() const { return CPoly::from_coefficients({constant, c_coefficient}); }
};

struct EtaPower {
  Series<CPoly> series;
  /// Exponent of the accompanying q-power (-s/24), in the series variable.
  Prefactor prefactor;
};

/// prod_{n>=1} (1-q^n)^(-s) = exp(s * sum_k sigma_1(k)/k q^k), with the
/// prefactor q^(-s/24) reported separately. In qhat the substitution
/// q = qhat^2 is applied and the prefactor exponent doubles.
inline EtaPower eta_inverse_power(const EtaExponent& s, Variable var, int order) {
  if (order < 0) throw std::invalid_argument("eta_inverse_power: order < 0");
  const int q_order = var == Variable::q ? order : order / 2;
  std::vector<Rational> sigma(static_cast<std::size_t>(q_order) + 1);
  for (int d = 1; d <= q_order; ++d)
    for (int m = d; m <= q_order; m += d) sigma[static_cast<std::size_t>(m)] += d;
  const CPoly sp = s.as_cpoly();
  Series<CPoly> l(Variable::q, q_order);
  for (int k = 1; k <= q_order; ++k)
    l.set(k, sp * (sigma[static_cast<std::size_t>(k)] / Rational(k)));
  Series<CPoly> prod = exp(l);
  const Rational scale = var == Variable::q ? Rational(-1, 24) : Rational(-1, 12);
  Prefactor pre{s.c_coefficient * scale, s.constant * scale};
  if (var == Variable::q) return {prod, pre};
  return {substitute_square(prod).truncated(order), pre};
}

}  // namespace rectcft
