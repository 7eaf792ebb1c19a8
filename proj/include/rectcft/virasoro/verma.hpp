#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/linear_combination.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/virasoro/partition.hpp"

namespace rectcft {

struct PartitionLevel {
  int operator()(const Partition& p) const { return level(p); }
};
struct VermaTag {};

/// Finite combination of descendants L_{-l1}...L_{-lk}|0> of the vacuum,
/// keyed by partitions with parts >= 2.
template <class R>
using VermaVector = LinearCombination<Partition, R, PartitionLevel, VermaTag>;

/// Normal-ordering engine for the vacuum Verma module at central charge c_
/// (the formal symbol for R = CPoly, a number for R = Rational). Mode
/// actions on basis vectors are memoized; an engine is not thread-safe, so
/// use one per thread.
template <class R>
class VermaEngine {
 public:
  using Terms = std::vector<std::pair<Partition, R>>;

  VermaEngine(R central_charge, int max_level)
      : c_(std::move(central_charge)), max_level_(max_level) {
    if (max_level < 0) throw std::invalid_argument("negative level cutoff");
  }

  const R& central_charge() const { return c_; }
  int max_level() const { return max_level_; }

  /// L_n on a single basis vector, in normal order, truncated at max_level.
  const Terms& act(int n, const Partition& lam) {
    Key key{n, lam};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Terms out = compute(n, lam);
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  VermaVector<R> apply(int n, const VermaVector<R>& v) {
    if (v.cutoff() > max_level_) throw std::invalid_argument("vector cutoff exceeds engine cutoff");
    VermaVector<R> out(v.cutoff());
    for (const auto& [p, a] : v.terms())
      for (const auto& [q, b] : act(n, p)) out.add(q, a * b);
    return out;
  }

  /// Shapovalov pairing <u|v> with L_n^dagger = L_{-n} and <0|0> = 1.
  R shapovalov(const VermaVector<R>& u, const VermaVector<R>& v) {
    std::map<int, std::vector<Entry>> by_level;
    for (const auto& [p, a] : u.terms()) by_level[level(p)].push_back({&p, a});
    R total;
    for (auto& [lvl, entries] : by_level) {
      Map w;
      for (const auto& [p, a] : v.terms())
        if (level(p) == lvl) w.emplace(p, a);
      if (w.empty()) continue;
      total += pair(entries, 0, w);
    }
    return total;
  }

 private:
  using Map = std::map<Partition, R>;
  struct Entry {
    const Partition* parts;
    R coeff;
  };
  struct Key {
    int n;
    Partition lam;
    bool operator==(const Key& o) const { return n == o.n && lam == o.lam; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return PartitionHash{}(k.lam) * 31u + static_cast<std::size_t>(k.n + 1024);
    }
  };

  // <0|L_{p_k}...L_{p_{depth}} w, summed over the entries' suffixes. Entries
  // sharing the next part share the application of that mode to w.
  R pair(std::vector<Entry>& entries, std::size_t depth, const Map& w) {
    R total;
    std::map<int, std::vector<Entry>> groups;
    for (auto& e : entries) {
      if (e.parts->size() == depth) {
        auto it = w.find(Partition{});
        if (it != w.end()) total += e.coeff * it->second;
      } else {
        groups[(*e.parts)[depth]].push_back(e);
      }
    }
    for (auto& [m, group] : groups) {
      Map next;
      for (const auto& [p, a] : w)
        for (const auto& [q, b] : act(m, p)) {
          auto [it, inserted] = next.try_emplace(q, a * b);
          if (!inserted) it->second += a * b;
        }
      for (auto it = next.begin(); it != next.end();)
        it = rectcft::is_zero(it->second) ? next.erase(it) : std::next(it);
      if (!next.empty()) total += pair(group, depth + 1, next);
    }
    return total;
  }

  Terms compute(int n, const Partition& lam) {
    const int lvl = level(lam);
    if (lvl - n < 0) return {};
    if (n < 0 && lvl - n > max_level_) return {};
    if (lam.empty()) {
      if (n >= -1) return {};
      return {{Partition{-n}, R(1)}};
    }
    if (n == 0) return {{lam, R(static_cast<long>(lvl))}};
    if (n <= -2 && -n >= lam.front()) {
      Partition p;
      p.reserve(lam.size() + 1);
      p.push_back(-n);
      p.insert(p.end(), lam.begin(), lam.end());
      return {{std::move(p), R(1)}};
    }
    // L_n L_{-m} X = L_{-m} L_n X + (n+m) L_{n-m} X + delta_{n,m} c/12 (n^3-n) X
    const int m = lam.front();
    const Partition rest(lam.begin() + 1, lam.end());
    Map acc;
    auto accumulate = [&acc](const Partition& p, const R& a) {
      auto [it, inserted] = acc.try_emplace(p, a);
      if (!inserted) it->second += a;
    };
    const Terms first = act(n, rest);
    for (const auto& [mu, a] : first)
      for (const auto& [nu, b] : act(-m, mu)) accumulate(nu, a * b);
    if (n + m != 0) {
      const Rational k(n + m);
      for (const auto& [mu, a] : act(n - m, rest)) accumulate(mu, a * k);
    }
    if (n == m) {
      const long n3 = static_cast<long>(n) * n * n - n;
      accumulate(rest, c_ * make_rational(n3, 12));
    }
    Terms out;
    out.reserve(acc.size());
    for (auto& [p, a] : acc)
      if (!rectcft::is_zero(a)) out.emplace_back(p, std::move(a));
    return out;
  }

  R c_;
  int max_level_;
  std::unordered_map<Key, Terms, KeyHash> memo_;
};

}  // namespace rectcft
