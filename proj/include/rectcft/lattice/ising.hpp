#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rectcft/algebra/rational.hpp"
#include "rectcft/errors.hpp"

namespace rectcft {

/// Single-particle data of the critical free/free transverse-field chain.
/// phi_plus(k-1, i-1) and phi_minus(k-1, i-1) hold phi^+_{ki}, phi^-_{ki}.
struct FreeFermionSolution {
  int N = 0;
  Eigen::VectorXd lambda;  // ascending
  Eigen::MatrixXd phi_plus;
  Eigen::MatrixXd phi_minus;

  double ground_energy() const { return -0.5 * lambda.sum(); }
};

inline FreeFermionSolution solve_chain(int N) {
  if (N < 1) throw std::invalid_argument("solve_chain: N must be >= 1");
  const double pi = std::numbers::pi;
  const double M = 2.0 * N + 1.0;
  const double amp = 2.0 / std::sqrt(M);
  FreeFermionSolution s;
  s.N = N;
  s.lambda.resize(N);
  s.phi_plus.resize(N, N);
  s.phi_minus.resize(N, N);
  for (int k = 1; k <= N; ++k) {
    s.lambda(k - 1) = 2.0 * std::sin((2.0 * k - 1.0) * pi / (2.0 * M));
    for (int i = 1; i <= N; ++i) {
      const double sign = i % 2 == 0 ? 1.0 : -1.0;  // (-1)^i
      s.phi_plus(k - 1, i - 1) = sign * amp * std::cos((2.0 * k - 1.0) * pi * (i - 0.5) / M);
      s.phi_minus(k - 1, i - 1) = -sign * amp * std::sin((2.0 * k - 1.0) * pi * i / M);
    }
  }
  return s;
}

/// Sorted fermion indices k (1-based) excited above the ground state.
using ExcitationSet = std::vector<int>;

inline double excitation_energy(const FreeFermionSolution& s, const ExcitationSet& e) {
  double E = 0;
  for (int k : e) E += s.lambda(k - 1);
  return E;
}

/// G_ij = -sum_k s_k phi^-_{ki} phi^+_{kj}, s_k = -1 on excited modes.
inline Eigen::MatrixXd correlation_matrix(const FreeFermionSolution& s, const ExcitationSet& exc) {
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(s.N);
  for (int k : exc) {
    if (k < 1 || k > s.N) throw std::out_of_range("excitation index outside 1..N");
    sign(k - 1) = -1.0;
  }
  return -(s.phi_minus.transpose() * sign.asDiagonal() * s.phi_plus);
}

struct OverlapValue {
  double sq = 0;                 // |<B|exc>|^2, clamped to [0, 1]
  double log_abs = -std::numeric_limits<double>::infinity();  // log |<B|exc>|
};

struct Determinant {
  int sign = 0;       // 0 for an exactly singular matrix
  double log_abs = -std::numeric_limits<double>::infinity();

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// det((1 + G)/2) by pivoted LU, accumulated as a log to survive large N.
inline Determinant overlap_determinant(const FreeFermionSolution& s, const ExcitationSet& exc) {
  const Eigen::MatrixXd m = 0.5 * (Eigen::MatrixXd::Identity(s.N, s.N) + correlation_matrix(s, exc));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& U = lu.matrixLU();
  Determinant d;
  d.sign = static_cast<int>(lu.permutationP().determinant());
  d.log_abs = 0;
  for (int i = 0; i < s.N; ++i) {
    const double u = U(i, i);
    if (u == 0.0) return {};
    if (u < 0) d.sign = -d.sign;
    d.log_abs += std::log(std::abs(u));
  }
  return d;
}

/// |<B|exc>|^2 = det((1 + G)/2). The all-up state has even fermion parity, so
/// odd excitation sets are exactly orthogonal to it; their determinant is
/// only round-off and is checked, then replaced by 0.
inline OverlapValue overlap(const FreeFermionSolution& s, const ExcitationSet& exc) {
  const Determinant d = overlap_determinant(s, exc);
  const double det = d.value();
  if (det < -1e-12) throw NumericalAlarm("negative overlap determinant " + std::to_string(det));
  if (exc.size() % 2 == 1) {
    if (std::abs(det) > 1e-10) throw NumericalAlarm("odd-parity determinant " + std::to_string(det) + " is not zero");
    return {};
  }
  if (d.sign <= 0) return {};
  OverlapValue v;
  v.sq = std::min(det, 1.0);
  v.log_abs = 0.5 * d.log_abs;
  return v;
}

inline double overlap_sq(const FreeFermionSolution& s, const ExcitationSet& exc) { return overlap(s, exc).sq; }

/// Conformal weight sum (k - 1/2) of an excitation set, as a rational.
inline Rational conformal_weight(const ExcitationSet& e) {
  Rational h;
  for (int k : e) h += make_rational(2 * k - 1, 2);
  return h;
}

inline std::string h_label(const ExcitationSet& e) {
  const Rational h = conformal_weight(e);
  return h.get_den() == 1 ? h.get_num().get_str() : h.get_str();
}

/// The kmax+1 lowest excitation sets by total energy (k = 0 is empty).
inline std::vector<ExcitationSet> enumerate_low_states(const FreeFermionSolution& s, int kmax) {
  if (kmax < 0) throw std::invalid_argument("kmax < 0");
  const int modes = std::min(s.N, kmax + 1);
  if (modes > 24) throw std::invalid_argument("kmax too large for subset enumeration");
  std::vector<std::pair<double, ExcitationSet>> sets;
  for (unsigned mask = 0; mask < (1u << modes); ++mask) {
    ExcitationSet e;
    for (int k = 1; k <= modes; ++k)
      if (mask & (1u << (k - 1))) e.push_back(k);
    sets.emplace_back(excitation_energy(s, e), std::move(e));
  }
  std::stable_sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ExcitationSet> out;
  for (std::size_t i = 0; i < sets.size() && static_cast<int>(i) <= kmax; ++i) out.push_back(sets[i].second);
  return out;
}

struct OverlapRecord {
  int N = 0;
  int k = 0;
  ExcitationSet excitation;
  std::string h;
  double energy = 0;  // above the ground state
  double overlap = 0;
  double log_overlap = 0;
};

/// <B|k>_N for every N in [nmin, nmax] and k <= kmax (fewer when 2^N <= kmax).
inline std::vector<OverlapRecord> ising_overlap_table(int nmin, int nmax, int kmax, int jobs = 1) {
  if (nmin < 1 || nmax < nmin) throw std::invalid_argument("ising_overlap_table: bad N range");
  auto one = [kmax](int N) {
    const FreeFermionSolution s = solve_chain(N);
    std::vector<OverlapRecord> rows;
    const auto states = enumerate_low_states(s, kmax);
    for (std::size_t k = 0; k < states.size(); ++k) {
      const OverlapValue v = overlap(s, states[k]);
      rows.push_back({N, static_cast<int>(k), states[k], h_label(states[k]), excitation_energy(s, states[k]),
                      std::sqrt(v.sq), v.log_abs});
    }
    return rows;
  };
  const int count = nmax - nmin + 1;
  std::vector<std::vector<OverlapRecord>> parts(static_cast<std::size_t>(count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) parts[static_cast<std::size_t>(i)] = one(nmin + i);
  } else {
    std::vector<std::future<void>> fut;
    for (int j = 0; j < jobs; ++j)
      fut.push_back(std::async(std::launch::async, [&, j] {
        for (int i = j; i < count; i += jobs) parts[static_cast<std::size_t>(i)] = one(nmin + i);
      }));
    for (auto& f : fut) f.get();
  }
  std::vector<OverlapRecord> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace rectcft
