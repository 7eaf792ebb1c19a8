#pragma once

#include <algorithm>
#include <stdexcept>

#include "rectcft/algebra/eta.hpp"
#include "rectcft/algebra/linear_combination.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/series.hpp"
#include "rectcft/virasoro/amplitude.hpp"
#include "rectcft/virasoro/boundary_state.hpp"
#include "rectcft/virasoro/partition.hpp"
#include "rectcft/virasoro/verma.hpp"

namespace rectcft {

struct BosonTag {};

/// a_{-l1}...a_{-lk}|0> keyed by partitions with parts >= 1.
using BosonVector = LinearCombination<Partition, Rational, PartitionLevel, BosonTag>;

namespace detail {

inline Partition insert_part(const Partition& p, int k) {
  Partition out = p;
  out.insert(std::upper_bound(out.begin(), out.end(), k, std::greater<int>()), k);
  return out;
}

}  // namespace detail

/// a_m with [a_m, a_n] = m delta_{m+n,0}; a_0 acts as zero.
inline BosonVector boson_mode(int m, const BosonVector& v) {
  BosonVector out(v.cutoff());
  if (m == 0) return out;
  for (const auto& [p, a] : v.terms()) {
    if (m < 0) {
      out.add(detail::insert_part(p, -m), a);
      continue;
    }
    auto it = std::find(p.begin(), p.end(), m);
    if (it == p.end()) continue;
    const long mult = std::count(p.begin(), p.end(), m);
    Partition q = p;
    q.erase(q.begin() + (it - p.begin()));
    out.add(q, a * Rational(static_cast<long>(m) * mult));
  }
  return out;
}

/// Virasoro generators at c = 1: L_n = 1/2 sum_m :a_{n-m} a_m:, a_0 = 0.
inline BosonVector boson_virasoro(int n, const BosonVector& v) {
  BosonVector out(v.cutoff());
  const int top = std::max(v.max_level(), 0);
  if (n == 0) {
    for (const auto& [p, a] : v.terms()) out.add(p, a * Rational(level(p)));
    return out;
  }
  const int an = std::abs(n);
  const Rational half(1, 2);
  // a_{-i} a_{-(|n|-i)} for n < 0, a_i a_{n-i} for n > 0
  for (int i = 1; i < an; ++i) {
    BosonVector t = boson_mode(n > 0 ? an - i : -(an - i), boson_mode(n > 0 ? i : -i, v));
    t *= half;
    out += t;
  }
  // creation to the left: a_{-k} a_{n+k} (n > 0) or a_{n-k} a_k (n < 0)
  for (int k = 1; k <= top + an; ++k) {
    if (n > 0) out += boson_mode(-k, boson_mode(n + k, v));
    else out += boson_mode(n - k, boson_mode(k, v));
  }
  return out;
}

/// exp(-sum_n a_{-n}^2 / 2n)|0>, truncated at level cutoff.
inline BosonVector boson_boundary_state(int cutoff) {
  BosonVector v = BosonVector::vacuum(cutoff);
  auto square = [](int k, const BosonVector& w) { return boson_mode(-k, boson_mode(-k, w)); };
  for (int n = 1; 2 * n <= cutoff; ++n) v = exp_lowering(v, n, Rational(-1, 2 * n), square);
  return v;
}

/// (a_m + a_{-m}) v; exact at levels <= cutoff - m.
inline BosonVector boson_gluing_residual(const BosonVector& v, int m) {
  if (m < 1) throw std::invalid_argument("boson gluing mode must be >= 1");
  BosonVector out = boson_mode(m, v);
  out += boson_mode(-m, v);
  return out;
}

/// <l|l> = prod_m m^{k_m} k_m! for multiplicities k_m; distinct keys are orthogonal.
inline Rational boson_norm(const Partition& p) {
  BigInt z = 1;
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    const unsigned long k = j - i;
    BigInt fact;
    mpz_fac_ui(fact.get_mpz_t(), k);
    BigInt pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p[i]), k);
    z *= fact * pw;
    i = j;
  }
  return Rational(z);
}

inline Rational boson_inner(const BosonVector& u, const BosonVector& v) {
  Rational s;
  for (const auto& [p, a] : u.terms()) {
    auto it = v.terms().find(p);
    if (it != v.terms().end()) s += a * it->second * boson_norm(p);
  }
  return s;
}

/// The slit product state built from c = 1 boson Virasoro generators.
inline BosonVector boson_virasoro_state(int cutoff) {
  auto lower = [](int k, const BosonVector& w) { return boson_virasoro(-k, w); };
  return slit_product_state(BosonVector::vacuum(cutoff), 30, cutoff, lower);
}

/// <B|qhat^{L0}|B> as a qhat-series; the accompanying prefactor is qhat^{-1/24}.
inline Amplitude<Rational> boson_amplitude(int order) {
  const BosonVector b = boson_boundary_state(order);
  Series<Rational> s(Variable::qhat, order);
  for (int n = 0; n <= order; ++n) {
    const BosonVector bn = b.level_component(n);
    if (!bn.is_zero()) s.set(n, boson_inner(bn, bn));
  }
  return {s, Prefactor{Rational(0), make_rational(-1, 24)}};
}

/// prod_{m>0} sum_s (2s)!/(s!)^2 (q^m/4)^s, through q^order.
inline Series<Rational> boson_product_formula(int order) {
  Series<Rational> out = Series<Rational>::one(Variable::q, order);
  for (int m = 1; m <= order; ++m) {
    Series<Rational> f(Variable::q, order);
    BigInt central = 1;  // (2s)!/(s!)^2
    for (int s = 0; s * m <= order; ++s) {
      if (s > 0) central = central * (2 * s) * (2 * s - 1) / (BigInt(s) * s);
      BigInt four;
      mpz_ui_pow_ui(four.get_mpz_t(), 4, static_cast<unsigned long>(s));
      f.set(s * m, make_rational(central, four));
    }
    out = out * f;
  }
  return out;
}

}  // namespace rectcft
