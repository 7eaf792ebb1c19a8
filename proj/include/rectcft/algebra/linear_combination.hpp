#pragma once

#include <algorithm>
#include <cstddef>
#include <map>

#include "rectcft/algebra/rational.hpp"

namespace rectcft {

namespace detail {

// Unqualified so CPoly and later rings are found by ADL.
template <class R>
bool coefficient_is_zero(const R& a) {
  return is_zero(a);
}

}  // namespace detail

/// Finite linear combination of basis keys with coefficients in R. Zero
/// coefficients are never stored and no key above the cutoff is kept; levels
/// are measured by LevelFn in integer units. Tag only separates realizations
/// that share a key type.
template <class Key, class R, class LevelFn, class Tag>
class LinearCombination {
 public:
  using Map = std::map<Key, R>;
  using key_type = Key;
  using coefficient_type = R;

  explicit LinearCombination(int cutoff = 0) : cutoff_(cutoff) {}

  static LinearCombination vacuum(int cutoff) {
    LinearCombination v(cutoff);
    v.add(Key{}, R(1));
    return v;
  }

  int cutoff() const { return cutoff_; }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  R coefficient(const Key& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? R() : it->second;
  }

  /// Adds a*p; silently drops terms above the cutoff.
  void add(const Key& p, const R& a) {
    if (is_zero_coeff(a) || LevelFn{}(p) > cutoff_) return;
    auto [it, inserted] = terms_.try_emplace(p, a);
    if (!inserted) {
      it->second += a;
      if (is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  LinearCombination& operator+=(const LinearCombination& o) {
    for (const auto& [p, a] : o.terms_) add(p, a);
    return *this;
  }
  LinearCombination& operator-=(const LinearCombination& o) {
    for (const auto& [p, a] : o.terms_) add(p, -a);
    return *this;
  }
  LinearCombination& operator*=(const R& s) {
    if (is_zero_coeff(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [p, a] : terms_) a *= s;
    return *this;
  }

  /// Component at one level, same cutoff.
  LinearCombination level_component(int lvl) const {
    LinearCombination out(cutoff_);
    for (const auto& [p, a] : terms_)
      if (LevelFn{}(p) == lvl) out.terms_.emplace(p, a);
    return out;
  }
  /// All components at level <= lvl, with cutoff lowered to lvl.
  LinearCombination truncated(int lvl) const {
    LinearCombination out(std::min(lvl, cutoff_));
    for (const auto& [p, a] : terms_)
      if (LevelFn{}(p) <= lvl) out.terms_.emplace(p, a);
    return out;
  }
  int max_level() const {
    int m = -1;
    for (const auto& [p, a] : terms_) m = std::max(m, LevelFn{}(p));
    return m;
  }

  friend bool operator==(const LinearCombination& a, const LinearCombination& b) { return a.terms_ == b.terms_; }

 private:
  static bool is_zero_coeff(const R& a) { return detail::coefficient_is_zero(a); }
  int cutoff_;
  Map terms_;
};

}  // namespace rectcft
