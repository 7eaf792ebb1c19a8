#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rectcft {

enum class FitTerm { N = 0, LogN, One, InvN, InvN2, InvN3 };
inline constexpr int kFitTerms = 6;

inline const char* term_name(FitTerm t) {
  static const char* names[] = {"N", "logN", "1", "1/N", "1/N^2", "1/N^3"};
  return names[static_cast<int>(t)];
}

inline double term_value(FitTerm t, double N) {
  switch (t) {
    case FitTerm::N: return N;
    case FitTerm::LogN: return std::log(N);
    case FitTerm::One: return 1.0;
    case FitTerm::InvN: return 1.0 / N;
    case FitTerm::InvN2: return 1.0 / (N * N);
    case FitTerm::InvN3: return 1.0 / (N * N * N);
  }
  return 0.0;
}

/// Subset of {N, log N, 1, 1/N, 1/N^2, 1/N^3}; coefficient a_i belongs to term i.
struct FitBasis {
  std::array<bool, kFitTerms> use{};

  static FitBasis of(std::initializer_list<FitTerm> terms) {
    FitBasis b;
    for (FitTerm t : terms) b.use[static_cast<std::size_t>(t)] = true;
    return b;
  }
  /// a0 N + a1 log N + a2 + a3/N + a4/N^2
  static FitBasis absolute() {
    return of({FitTerm::N, FitTerm::LogN, FitTerm::One, FitTerm::InvN, FitTerm::InvN2});
  }
  /// a2 + a3/N + a4/N^2 + a5/N^3
  static FitBasis ratio() { return of({FitTerm::One, FitTerm::InvN, FitTerm::InvN2, FitTerm::InvN3}); }

  int count() const { return static_cast<int>(std::count(use.begin(), use.end(), true)); }
  std::vector<FitTerm> terms() const {
    std::vector<FitTerm> t;
    for (int i = 0; i < kFitTerms; ++i)
      if (use[static_cast<std::size_t>(i)]) t.push_back(static_cast<FitTerm>(i));
    return t;
  }
};

struct FitPoint {
  double N;
  double y;
};

struct FitResult {
  std::array<std::optional<double>, kFitTerms> a{};
  std::array<double, kFitTerms> spread{};  // window spread, 0 for absent terms
  double residual_norm = 0;
  int points = 0;
  int windows = 0;  // refits that contributed to the spread
  double nmin = 0, nmax = 0;

  double coefficient(FitTerm t) const {
    const auto& v = a[static_cast<std::size_t>(t)];
    if (!v) throw std::invalid_argument(std::string("term ") + term_name(t) + " not in the fit basis");
    return *v;
  }
  double uncertainty(FitTerm t) const { return spread[static_cast<std::size_t>(t)]; }
};

namespace detail {

inline FitResult solve_fit(const std::vector<FitPoint>& pts, const FitBasis& basis) {
  const auto terms = basis.terms();
  const int n = static_cast<int>(pts.size()), m = static_cast<int>(terms.size());
  if (m < 2) throw std::invalid_argument("fit basis needs at least two terms");
  if (n <= m) throw std::invalid_argument("fit needs more points than basis terms (" + std::to_string(n) + " <= " +
                                          std::to_string(m) + ")");
  Eigen::MatrixXd A(n, m);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    y(i) = pts[static_cast<std::size_t>(i)].y;
    for (int j = 0; j < m; ++j) A(i, j) = term_value(terms[static_cast<std::size_t>(j)], pts[static_cast<std::size_t>(i)].N);
  }
  // unit-norm columns so the rank test is scale-free
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int j = 0; j < m; ++j) A.col(j) /= scale(j);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-13);
  if (qr.rank() < m) throw std::invalid_argument("fit design matrix is rank deficient");
  const Eigen::VectorXd x = qr.solve(y);
  FitResult r;
  for (int j = 0; j < m; ++j) r.a[static_cast<std::size_t>(terms[static_cast<std::size_t>(j)])] = x(j) / scale(j);
  r.residual_norm = (A * x - y).norm();
  r.points = n;
  r.nmin = pts.front().N;
  r.nmax = pts.back().N;
  return r;
}

}  // namespace detail

/// Least-squares fit after dropping the `drop_first` smallest N. The spread
/// of each coefficient is its largest deviation over refits that drop
/// 1..extra_windows further points (while enough points remain).
inline FitResult fit(std::vector<FitPoint> data, const FitBasis& basis, int drop_first = 0, int extra_windows = 3) {
  if (drop_first < 0 || extra_windows < 0) throw std::invalid_argument("fit: negative window parameter");
  for (const auto& p : data)
    if (!(p.N > 0) || !std::isfinite(p.y)) throw std::invalid_argument("fit: points need N > 0 and finite y");
  std::stable_sort(data.begin(), data.end(), [](const FitPoint& a, const FitPoint& b) { return a.N < b.N; });
  if (static_cast<int>(data.size()) <= drop_first) throw std::invalid_argument("fit: every point dropped");
  auto window = [&](int drop) { return std::vector<FitPoint>(data.begin() + drop, data.end()); };
  FitResult main = detail::solve_fit(window(drop_first), basis);
  for (int w = 1; w <= extra_windows; ++w) {
    const int drop = drop_first + w;
    if (static_cast<int>(data.size()) - drop <= basis.count()) break;
    const FitResult alt = detail::solve_fit(window(drop), basis);
    for (int t = 0; t < kFitTerms; ++t)
      if (main.a[static_cast<std::size_t>(t)])
        main.spread[static_cast<std::size_t>(t)] =
            std::max(main.spread[static_cast<std::size_t>(t)],
                     std::abs(*alt.a[static_cast<std::size_t>(t)] - *main.a[static_cast<std::size_t>(t)]));
    ++main.windows;
  }
  return main;
}

enum class OverlapMode { absolute, ratio };

struct ExtractedOverlap {
  double value;
  double spread;  // propagated from the a2 window spread
};

/// Ratio fit of -log(<B|k>_N/<B|0>_N): <B|k> = exp(-a2). Absolute fit of
/// -log<B|k>_N: exp(-a2) = alpha <B|k>, so the result is exp(-a2)/alpha
/// (alpha itself for k = 0 with the default alpha = 1).
inline ExtractedOverlap extract_overlap(const FitResult& f, OverlapMode mode, double alpha = 1.0) {
  const double a2 = f.coefficient(FitTerm::One);
  double v = std::exp(-a2);
  if (mode == OverlapMode::absolute) v /= alpha;
  return {v, v * f.uncertainty(FitTerm::One)};
}

/// (N, -(log num - log den)) over the N present in both; inputs hold log overlaps.
inline std::vector<FitPoint> ratio_points(const std::vector<FitPoint>& log_num, const std::vector<FitPoint>& log_den) {
  std::vector<FitPoint> out;
  for (const auto& a : log_num)
    for (const auto& b : log_den)
      if (a.N == b.N) out.push_back({a.N, -(a.y - b.y)});
  return out;
}

}  // namespace rectcft
