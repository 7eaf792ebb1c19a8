#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace rectcft {

/// Weakly decreasing list of positive parts. For Verma descendants every part
/// is >= 2; the free boson uses parts >= 1.
using Partition = std::vector<int>;

inline int level(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

inline bool is_canonical(const Partition& p, int min_part) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < min_part) return false;
    if (i > 0 && p[i] > p[i - 1]) return false;
  }
  return true;
}

/// All partitions of n with parts in [min_part, max_part], descending
/// lexicographic order.
inline std::vector<Partition> partitions_of(int n, int min_part, int max_part) {
  std::vector<Partition> out;
  Partition cur;
  std::function<void(int, int)> rec = [&](int left, int cap) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(left, cap); k >= min_part; --k) {
      cur.push_back(k);
      rec(left - k, k);
      cur.pop_back();
    }
  };
  if (n >= 0) rec(n, max_part);
  return out;
}

inline std::vector<Partition> partitions_of(int n, int min_part = 1) {
  return partitions_of(n, min_part, n);
}

inline std::string to_string(const Partition& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

struct PartitionHash {
  std::size_t operator()(const Partition& p) const noexcept {
    std::size_t h = p.size();
    for (int x : p) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace rectcft
