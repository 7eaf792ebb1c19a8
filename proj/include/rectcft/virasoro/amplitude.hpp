#pragma once

#include <stdexcept>
#include <vector>

#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/eta.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/series.hpp"
#include "rectcft/virasoro/boundary_state.hpp"
#include "rectcft/virasoro/verma.hpp"

namespace rectcft {

template <class R>
struct Amplitude {
  Series<R> series;  // in qhat
  Prefactor prefactor;
};

/// <v|qhat^{L0 - c/24}|v> = qhat^{-c/24} sum_n c_n qhat^n with c_n the
/// Shapovalov norm of the level-n component.
template <class R>
Amplitude<R> amplitude(VermaEngine<R>& engine, const VermaVector<R>& v, int order) {
  if (order > v.cutoff()) throw std::invalid_argument("amplitude order exceeds state cutoff");
  Series<R> s(Variable::qhat, order);
  for (int n = 0; n <= order; ++n) {
    const VermaVector<R> vn = v.level_component(n);
    if (vn.is_zero()) continue;
    s.set(n, engine.shapovalov(vn, vn));
  }
  return {s, Prefactor{make_rational(-1, 24), Rational(0)}};
}

inline Amplitude<CPoly> boundary_amplitude(int order) {
  VermaEngine<CPoly> engine(CPoly::c(), order);
  return amplitude(engine, boundary_state(engine, order), order);
}

/// Symbolic amplitude of the N-factor state, as a q-series (odd qhat levels
/// must vanish).
inline Series<CPoly> finitized_amplitude_q(int N, int q_order) {
  const int cutoff = 2 * q_order;
  VermaEngine<CPoly> engine(CPoly::c(), cutoff);
  const auto amp = amplitude(engine, finitized_state(engine, N, cutoff), cutoff);
  return even_part_in_q(amp.series);
}

/// P_N(q): the 2/c power of the finitized amplitude, asserted c-independent.
inline Series<Rational> p_series(int N, int q_order) {
  if (N < 1) throw std::invalid_argument("p_series: N must be >= 1");
  return require_constant(pow_two_over_c(finitized_amplitude_q(N, q_order)));
}

/// (1+2q)^{1/2} (1+4q^2)^{5/8} (1-16q^4)^{-3/4}
inline Series<Rational> p2_closed_form(int order) {
  auto binom = [order](int power, long coeff) {
    Series<Rational> s = Series<Rational>::one(Variable::q, order);
    if (power <= order) s.set(power, Rational(coeff));
    return s;
  };
  return pow(binom(1, 2), make_rational(1, 2)) * pow(binom(2, 4), make_rational(5, 8)) *
         pow(binom(4, -16), make_rational(-3, 4));
}

inline bool p2_closed_form_check(int order) {
  return p_series(2, order) == p2_closed_form(order);
}

struct PkReport {
  int first_deviation = -1;  // -1 when P_N agrees with p_k through the order
  int sign = 0;
  Rational value;
  BigInt partitions;
};

/// First k where the q^k coefficient of P_N differs from p_k.
inline PkReport pk_conjecture_check(const Series<Rational>& pn) {
  const auto p = partition_numbers(pn.order());
  PkReport r;
  for (int k = 0; k <= pn.order(); ++k) {
    const Rational diff = pn[k] - Rational(p[static_cast<std::size_t>(k)]);
    if (!is_zero(diff)) {
      r.first_deviation = k;
      r.sign = sgn(diff);
      r.value = pn[k];
      r.partitions = p[static_cast<std::size_t>(k)];
      break;
    }
  }
  return r;
}

inline PkReport pk_conjecture_check(int N, int order) { return pk_conjecture_check(p_series(N, order)); }

}  // namespace rectcft
