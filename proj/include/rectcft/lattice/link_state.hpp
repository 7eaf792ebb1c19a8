#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rectcft {

/// Non-crossing perfect matching of N sites with no through lines, stored as
/// a parenthesis word: bit i set means site i (0-based) opens an arc.
using LinkState = std::uint64_t;

/// partner[i] = site paired with i.
inline std::vector<int> pairing(LinkState s, int N) {
  std::vector<int> partner(static_cast<std::size_t>(N), -1);
  std::vector<int> stack;
  for (int i = 0; i < N; ++i) {
    if ((s >> i) & 1u) {
      stack.push_back(i);
    } else {
      if (stack.empty()) throw std::invalid_argument("unbalanced link state");
      const int j = stack.back();
      stack.pop_back();
      partner[static_cast<std::size_t>(i)] = j;
      partner[static_cast<std::size_t>(j)] = i;
    }
  }
  if (!stack.empty()) throw std::invalid_argument("unbalanced link state");
  return partner;
}

inline LinkState from_pairing(const std::vector<int>& partner) {
  LinkState s = 0;
  for (std::size_t i = 0; i < partner.size(); ++i)
    if (partner[i] > static_cast<int>(i)) s |= LinkState{1} << i;
  return s;
}

/// "(())"-style word, site 0 first.
inline std::string to_parentheses(LinkState s, int N) {
  std::string out;
  for (int i = 0; i < N; ++i) out += ((s >> i) & 1u) ? '(' : ')';
  return out;
}

/// (12)(34)...: every site 2j paired with 2j+1.
inline LinkState adjacent_arcs(int N) {
  LinkState s = 0;
  for (int i = 0; i < N; i += 2) s |= LinkState{1} << i;
  return s;
}

/// All link states of N sites in increasing numeric order (Catalan(N/2) of them).
inline std::vector<LinkState> enumerate_links(int N) {
  if (N < 0 || N % 2 != 0 || N > 62) throw std::invalid_argument("enumerate_links: N must be even, 0..62");
  std::vector<LinkState> out;
  std::function<void(int, int, LinkState)> rec = [&](int pos, int open, LinkState s) {
    if (pos == N) {
      out.push_back(s);
      return;
    }
    const int placed_open = (pos + open) / 2;  // openers placed so far
    if (placed_open < N / 2) rec(pos + 1, open + 1, s | (LinkState{1} << pos));
    if (open > 0) rec(pos + 1, open - 1, s);
  };
  rec(0, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

struct TLImage {
  LinkState state;
  int loops;  // closed loops created, 0 or 1
};

/// e_i on strands (i, i+1), 1 <= i <= N-1: caps the two strands and cups the
/// remaining ends together.
inline TLImage apply_tl(int i, LinkState s, int N) {
  if (i < 1 || i >= N) throw std::out_of_range("TL generator index");
  std::vector<int> p = pairing(s, N);
  const int a0 = i - 1, b0 = i;
  if (p[static_cast<std::size_t>(a0)] == b0) return {s, 1};
  const int a = p[static_cast<std::size_t>(a0)], b = p[static_cast<std::size_t>(b0)];
  p[static_cast<std::size_t>(a0)] = b0;
  p[static_cast<std::size_t>(b0)] = a0;
  p[static_cast<std::size_t>(a)] = b;
  p[static_cast<std::size_t>(b)] = a;
  return {from_pairing(p), 0};
}

/// Closed loops formed by gluing s to the reflection of t.
inline int loop_count(const std::vector<int>& ps, const std::vector<int>& pt) {
  const std::size_t N = ps.size();
  std::vector<char> seen(N, 0);
  int loops = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (seen[i]) continue;
    ++loops;
    std::size_t k = i;
    do {
      seen[k] = 1;
      const auto k2 = static_cast<std::size_t>(ps[k]);
      seen[k2] = 1;
      k = static_cast<std::size_t>(pt[k2]);
    } while (k != i);
  }
  return loops;
}

/// Sorted basis with binary-search lookup.
class LinkBasis {
 public:
  explicit LinkBasis(int N) : N_(N), states_(enumerate_links(N)) {}

  int sites() const { return N_; }
  std::size_t size() const { return states_.size(); }
  LinkState operator[](std::size_t i) const { return states_[i]; }
  const std::vector<LinkState>& states() const { return states_; }

  std::size_t index(LinkState s) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), s);
    if (it == states_.end() || *it != s) throw std::out_of_range("link state not in basis");
    return static_cast<std::size_t>(it - states_.begin());
  }

 private:
  int N_;
  std::vector<LinkState> states_;
};

}  // namespace rectcft
