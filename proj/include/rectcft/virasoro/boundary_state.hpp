#pragma once

#include <stdexcept>

#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/virasoro/verma.hpp"

namespace rectcft {

/// e^{x L_{-k}} v, where lower(k, v) returns L_{-k} v truncated at the
/// vector's cutoff. Works for any realization whose vectors support +=,
/// *= Rational and is_zero().
template <class Vec, class Lower>
Vec exp_lowering(const Vec& v, int k, const Rational& x, Lower&& lower) {
  Vec out = v;
  Vec term = v;
  for (long j = 1;; ++j) {
    term = lower(k, term);
    if (term.is_zero()) break;
    term *= Rational(x / Rational(j));
    out += term;
  }
  return out;
}

/// prod_{N=1}^{factors} e^{-(1/2^{N-1}) L_{-2^N}} applied right to left
/// (N = 1 acts first) to `vacuum`. Factors with 2^N above the cutoff act
/// trivially and are skipped.
template <class Vec, class Lower>
Vec slit_product_state(Vec vacuum, int factors, int cutoff, Lower&& lower) {
  for (int N = 1; N <= factors && N < 31; ++N) {
    const int k = 1 << N;
    if (k > cutoff) break;
    BigInt den = BigInt(1) << (N - 1);
    const Rational x = -Rational(BigInt(1), den);
    vacuum = exp_lowering(vacuum, k, x, lower);
  }
  return vacuum;
}

namespace detail {

inline int factors_for_cutoff(int cutoff) {
  int n = 0;
  while (n < 30 && (1 << (n + 1)) <= cutoff) ++n;
  return n;
}

}  // namespace detail

/// Product of the first N exponential factors (2^N - 1 slits).
template <class R>
VermaVector<R> finitized_state(VermaEngine<R>& engine, int N, int cutoff) {
  if (N < 0) throw std::invalid_argument("finitized_state: N < 0");
  if (cutoff > engine.max_level()) throw std::invalid_argument("cutoff exceeds engine level");
  auto lower = [&engine](int k, const VermaVector<R>& v) { return engine.apply(-k, v); };
  return slit_product_state(VermaVector<R>::vacuum(cutoff), N, cutoff, lower);
}

/// Boundary state truncated at level cutoff: all factors with 2^N <= cutoff.
template <class R>
VermaVector<R> boundary_state(VermaEngine<R>& engine, int cutoff) {
  return finitized_state(engine, detail::factors_for_cutoff(cutoff), cutoff);
}

inline VermaVector<CPoly> boundary_state(int cutoff) {
  VermaEngine<CPoly> engine(CPoly::c(), cutoff);
  return boundary_state(engine, cutoff);
}

inline VermaVector<CPoly> finitized_state(int N, int cutoff) {
  VermaEngine<CPoly> engine(CPoly::c(), cutoff);
  return finitized_state(engine, N, cutoff);
}

/// Mode index and corner weights of L_n - L_{-n} - 2n(h_l + (-1)^n h_r).
struct GluingParams {
  int n = 1;
  CPoly h_left;
  CPoly h_right;

  /// Both corners at h = -c/16, which gives the anomaly nc/8 (1 + (-1)^n).
  static GluingParams homogeneous(int n) {
    const CPoly h = CPoly::c() * make_rational(-1, 16);
    return {n, h, h};
  }
};

/// (L_n - L_{-n} - 2n(h_l + (-1)^n h_r)) v. Components at level <= cutoff - n
/// are exact; above that L_{-n} v is truncated.
inline VermaVector<CPoly> gluing_residual(VermaEngine<CPoly>& engine, const VermaVector<CPoly>& v,
                                          const GluingParams& g) {
  if (g.n < 1) throw std::invalid_argument("gluing mode index must be >= 1");
  if (g.n > v.cutoff()) throw std::invalid_argument("gluing mode index exceeds cutoff");
  VermaVector<CPoly> out = engine.apply(g.n, v);
  out -= engine.apply(-g.n, v);
  CPoly shift = g.h_left + (g.n % 2 == 0 ? g.h_right : -g.h_right);
  shift *= Rational(-2 * g.n);
  VermaVector<CPoly> scaled = v;
  scaled *= shift;
  out += scaled;
  return out;
}

}  // namespace rectcft
