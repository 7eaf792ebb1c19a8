#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace rectcft::cli {

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

class CheckList {
 public:
  void add(std::string name, bool ok, std::string detail = {}) {
    checks_.push_back({std::move(name), ok, std::move(detail)});
  }
  bool all_ok() const {
    for (const auto& c : checks_)
      if (!c.ok) return false;
    return true;
  }
  const std::vector<Check>& items() const { return checks_; }

  void print(std::ostream& os) const {
    for (const auto& c : checks_) {
      os << (c.ok ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) os << " (" << c.detail << ")";
      os << '\n';
    }
  }

 private:
  std::vector<Check> checks_;
};

inline std::string fmt(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace rectcft::cli
