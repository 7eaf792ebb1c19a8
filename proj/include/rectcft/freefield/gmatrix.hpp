#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/series.hpp"
#include "rectcft/errors.hpp"

namespace rectcft {

/// Exact antisymmetric table G_mn for 0 <= m, n < size.
class GMatrix {
 public:
  explicit GMatrix(int size) : n_(size), g_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    if (size < 0) throw std::invalid_argument("negative GMatrix size");
  }

  int size() const { return n_; }
  const Rational& at(int m, int n) const {
    if (m < 0 || n < 0 || m >= n_ || n >= n_) throw std::out_of_range("GMatrix index");
    return g_[idx(m, n)];
  }
  void set(int m, int n, const Rational& v) {
    g_[idx(m, n)] = v;
    g_[idx(n, m)] = -v;
  }

  bool is_antisymmetric() const {
    for (int m = 0; m < n_; ++m)
      for (int n = 0; n < n_; ++n)
        if (at(m, n) != -at(n, m)) return false;
    return true;
  }
  bool has_parity_zeros() const {
    for (int m = 0; m < n_; ++m)
      for (int n = m % 2; n < n_; n += 2)
        if (!is_zero(at(m, n))) return false;
    return true;
  }

 private:
  std::size_t idx(int m, int n) const {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(n);
  }
  int n_;
  std::vector<Rational> g_;
};

/// sum_{m,n} G_mn x^m y^n = F(x, y) / (x - y) with
/// F = S(x) S(y) / (1 - xy) - 1 and S(x) = sqrt(1 - x^2), where x = 1/z1, y = 1/z2.
/// Entries 0 <= m, n <= cutoff.
inline GMatrix g_series(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("g_series: cutoff must be >= 1");
  const int deg = 2 * cutoff + 1;
  Series<Rational> one_minus_x2 = Series<Rational>::one(Variable::q, deg);
  if (deg >= 2) one_minus_x2.set(2, Rational(-1));
  const Series<Rational> s = pow(one_minus_x2, make_rational(1, 2));

  const auto w = static_cast<std::size_t>(deg) + 1;
  // F_ij = sum_k s_{i-k} s_{j-k} - delta_i0 delta_j0, for i + j <= deg
  std::vector<Rational> f(w * w);
  auto F = [&](int i, int j) -> Rational& { return f[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)]; };
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) {
      Rational acc;
      for (int k = 0; k <= std::min(i, j); ++k) acc += s[i - k] * s[j - k];
      if (i == 0 && j == 0) acc -= 1;
      F(i, j) = acc;
    }
  // F_{i,j+1} = Q_{i-1,j+1} - Q_{i,j}
  std::vector<Rational> q(w * w);
  auto Q = [&](int i, int j) -> Rational& { return q[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)]; };
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j + 1 <= deg; ++j) Q(i, j) = (i > 0 ? Q(i - 1, j + 1) : Rational(0)) - F(i, j + 1);

  GMatrix g(cutoff + 1);
  for (int m = 0; m <= cutoff; ++m)
    for (int n = m + 1; n <= cutoff; ++n) {
      if (Q(m, n) != -Q(n, m))
        throw StructuralError("G(z1,z2) expansion is not antisymmetric at (" + std::to_string(m) + "," +
                              std::to_string(n) + ")");
      g.set(m, n, Q(m, n));
    }
  return g;
}

struct AMatrixG {
  Eigen::MatrixXd g;             // antisymmetrized
  double raw_antisymmetry = 0;   // max |G + G^T| before antisymmetrizing
};

/// G = -(1 + a)^{-1} b from the truncated blocks
/// a_mn = (1 - (-1)^{m+n+1}) / (pi (m+n+1)), b_mn = (1 - (-1)^{m-n}) / (pi (m-n)).
inline AMatrixG g_from_amatrix(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("g_from_amatrix: cutoff must be >= 2");
  const double pi = std::numbers::pi;
  Eigen::MatrixXd a(cutoff, cutoff), b(cutoff, cutoff);
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n) {
      const int s = m + n + 1;
      a(m, n) = s % 2 == 1 ? 2.0 / (pi * s) : 0.0;
      const int d = m - n;
      b(m, n) = d % 2 != 0 ? 2.0 / (pi * d) : 0.0;
    }
  Eigen::MatrixXd one_a = Eigen::MatrixXd::Identity(cutoff, cutoff) + a;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(one_a);
  if (!(lu.rcond() > 1e-14)) throw NumericalAlarm("1 + a is numerically singular at this truncation");
  Eigen::MatrixXd g = -lu.solve(b);
  AMatrixG out;
  out.raw_antisymmetry = (g + g.transpose()).cwiseAbs().maxCoeff();
  out.g = 0.5 * (g - g.transpose());
  return out;
}

}  // namespace rectcft
