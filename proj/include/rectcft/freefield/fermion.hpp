#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rectcft/algebra/linear_combination.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/series.hpp"
#include "rectcft/freefield/gmatrix.hpp"
#include "rectcft/virasoro/amplitude.hpp"
#include "rectcft/virasoro/boundary_state.hpp"

namespace rectcft {

/// Strictly decreasing m's, one per mode psi_{-m-1/2}, in that order.
using FermionModes = std::vector<int>;

/// Twice the level, sum (2m + 1), so cutoffs stay integral.
struct FermionTwiceLevel {
  int operator()(const FermionModes& k) const {
    int s = 0;
    for (int m : k) s += 2 * m + 1;
    return s;
  }
};
struct FermionTag {};

/// NS Majorana Fock vector. Its cutoff is in twice-level units.
using FermionVector = LinearCombination<FermionModes, Rational, FermionTwiceLevel, FermionTag>;

inline FermionVector fermion_vacuum(int level_cutoff) { return FermionVector::vacuum(2 * level_cutoff); }

namespace detail {

// psi_r on one basis key, r = twice_r / 2. Returns the new key and the sign
// from anticommuting past the modes to its left, or nothing if the result is zero.
inline std::optional<std::pair<FermionModes, int>> fermion_act(int twice_r, const FermionModes& k) {
  if (twice_r % 2 == 0) throw std::invalid_argument("NS modes are half-odd");
  if (twice_r < 0) {
    const int m = (-twice_r - 1) / 2;
    auto pos = std::lower_bound(k.begin(), k.end(), m, std::greater<int>());
    if (pos != k.end() && *pos == m) return std::nullopt;
    FermionModes out = k;
    const auto idx = pos - k.begin();
    out.insert(out.begin() + idx, m);
    return std::make_pair(std::move(out), idx % 2 == 0 ? 1 : -1);
  }
  const int m = (twice_r - 1) / 2;
  auto pos = std::lower_bound(k.begin(), k.end(), m, std::greater<int>());
  if (pos == k.end() || *pos != m) return std::nullopt;
  FermionModes out = k;
  const auto idx = pos - k.begin();
  out.erase(out.begin() + idx);
  return std::make_pair(std::move(out), idx % 2 == 0 ? 1 : -1);
}

}  // namespace detail

/// psi_r v with r = twice_r / 2, truncated at the cutoff of v.
inline FermionVector fermion_mode(int twice_r, const FermionVector& v) {
  FermionVector out(v.cutoff());
  for (const auto& [k, a] : v.terms()) {
    auto r = detail::fermion_act(twice_r, k);
    if (r) out.add(r->first, r->second > 0 ? a : Rational(-a));
  }
  return out;
}

/// L_n = 1/2 sum_k k :psi_{n-k} psi_k: at c = 1/2. For n != 0 the two modes
/// anticommute, so the annihilator is moved to the right before acting and
/// intermediate states never exceed the final level.
inline FermionVector fermion_virasoro(int n, const FermionVector& v) {
  FermionVector out(v.cutoff());
  if (n == 0) {
    for (const auto& [k, a] : v.terms()) out.add(k, a * make_rational(FermionTwiceLevel{}(k), 2));
    return out;
  }
  int top = 0;
  for (const auto& [k, a] : v.terms()) top = std::max(top, FermionTwiceLevel{}(k));
  const int span = (top + 2 * std::abs(n)) | 1;  // odd, tk stays on half-odd modes
  for (const auto& [key, a] : v.terms()) {
    for (int tk = -span; tk <= span; tk += 2) {
      const int tl = 2 * n - tk;  // twice (n - k)
      int first = tk, second = tl;
      Rational coeff = make_rational(tk, 4) * a;
      if (tl > 0 && tk < 0) {
        std::swap(first, second);
        coeff = -coeff;
      }
      auto r1 = detail::fermion_act(first, key);
      if (!r1) continue;
      auto r2 = detail::fermion_act(second, r1->first);
      if (!r2) continue;
      out.add(r2->first, r1->second * r2->second > 0 ? coeff : Rational(-coeff));
    }
  }
  return out;
}

/// prod_{m<n} (1 + G_mn psi_{-m-1/2} psi_{-n-1/2})|O>, the expanded
/// exponential of the quadratic form, truncated at level_cutoff.
inline FermionVector fermion_boundary_state(int level_cutoff, const GMatrix& g) {
  FermionVector v = fermion_vacuum(level_cutoff);
  const int tc = 2 * level_cutoff;
  for (int m = 0; 2 * m + 1 <= tc; ++m) {
    for (int n = m + 1; (2 * m + 1) + (2 * n + 1) <= tc; ++n) {
      const Rational& gmn = g.at(m, n);
      if (is_zero(gmn)) continue;
      FermionVector t = fermion_mode(-(2 * m + 1), fermion_mode(-(2 * n + 1), v));
      t *= gmn;
      v += t;
    }
  }
  return v;
}

/// (psi_{m+1/2} - sum_n G_mn psi_{-n-1/2}) v; exact at levels <= cutoff - (m + 1/2).
inline FermionVector fermion_annihilation_residual(const FermionVector& v, int m, const GMatrix& g) {
  FermionVector out = fermion_mode(2 * m + 1, v);
  for (int n = 0; n < g.size() && 2 * n + 1 <= v.cutoff(); ++n) {
    const Rational& gmn = g.at(m, n);
    if (is_zero(gmn)) continue;
    FermionVector t = fermion_mode(-(2 * n + 1), v);
    t *= Rational(-gmn);
    out += t;
  }
  return out;
}

/// Basis keys are orthonormal.
inline Rational fermion_inner(const FermionVector& u, const FermionVector& v) {
  Rational s;
  for (const auto& [k, a] : u.terms()) {
    auto it = v.terms().find(k);
    if (it != v.terms().end()) s += a * it->second;
  }
  return s;
}

/// The slit product state built from c = 1/2 fermion Virasoro generators.
inline FermionVector fermion_virasoro_state(int level_cutoff) {
  auto lower = [](int k, const FermionVector& w) { return fermion_virasoro(-k, w); };
  return slit_product_state(fermion_vacuum(level_cutoff), 30, level_cutoff, lower);
}

/// <B|qhat^{L0}|B> as a qhat-series (prefactor qhat^{-1/48}); half-odd
/// levels occur only for odd mode counts and are absent from |B>.
inline Amplitude<Rational> fermion_amplitude(int order) {
  const GMatrix g = g_series(order + 1);
  const FermionVector b = fermion_boundary_state(order, g);
  Series<Rational> s(Variable::qhat, order);
  for (int n = 0; n <= order; ++n) {
    const FermionVector bn = b.level_component(2 * n);
    if (!bn.is_zero()) s.set(n, fermion_inner(bn, bn));
  }
  for (const auto& [k, a] : b.terms())
    if (FermionTwiceLevel{}(k) % 2 != 0)
      throw StructuralError("half-odd level component in the fermion boundary state");
  return {s, Prefactor{Rational(0), make_rational(-1, 48)}};
}

}  // namespace rectcft
