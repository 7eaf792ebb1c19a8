#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <arpack/arpack.hpp>

#include "rectcft/errors.hpp"
#include "rectcft/lattice/link_state.hpp"

namespace rectcft {

/// beta = 2 cos(pi/(p+1)), c = 1 - 6/(p(p+1)); p = infinity gives beta = 2, c = 1.
struct LoopWeight {
  double p = 3;
  bool infinite = false;

  static LoopWeight finite(double p) {
    if (!(p >= 1)) throw std::invalid_argument("loop parameter p must be >= 1");
    return {p, false};
  }
  static LoopWeight infinity() { return {std::numeric_limits<double>::infinity(), true}; }

  double beta() const { return infinite ? 2.0 : 2.0 * std::cos(std::numbers::pi / (p + 1.0)); }
  double central_charge() const { return infinite ? 1.0 : 1.0 - 6.0 / (p * (p + 1.0)); }
  std::string label() const {
    if (infinite) return "inf";
    std::string s = std::to_string(p);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

/// Link basis together with the pairing of every state, flattened row-major.
class LoopSystem {
 public:
  LoopSystem(int N, double beta) : basis_(N), beta_(beta) {
    if (N < 2) throw std::invalid_argument("loop model needs N >= 2");
    partners_.resize(basis_.size() * static_cast<std::size_t>(N));
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const auto p = pairing(basis_[j], N);
      std::copy(p.begin(), p.end(), partners_.begin() + static_cast<std::ptrdiff_t>(j * static_cast<std::size_t>(N)));
    }
  }

  int sites() const { return basis_.sites(); }
  double beta() const { return beta_; }
  std::size_t dim() const { return basis_.size(); }
  const LinkBasis& basis() const { return basis_; }

  std::vector<int> partners(std::size_t j) const {
    const auto N = static_cast<std::size_t>(sites());
    return {partners_.begin() + static_cast<std::ptrdiff_t>(j * N),
            partners_.begin() + static_cast<std::ptrdiff_t>((j + 1) * N)};
  }

  /// H = -sum_{i=1}^{N-1} e_i; column j is the image of basis state j.
  Eigen::SparseMatrix<double, Eigen::RowMajor> hamiltonian_sparse() const {
    std::vector<Eigen::Triplet<double>> trip;
    const int N = sites();
    trip.reserve(dim() * static_cast<std::size_t>(N - 1));
    for (std::size_t j = 0; j < dim(); ++j)
      for (int i = 1; i < N; ++i) {
        const TLImage img = apply_tl(i, basis_[j], N);
        trip.emplace_back(static_cast<int>(basis_.index(img.state)), static_cast<int>(j),
                          img.loops ? -beta_ : -1.0);
      }
    Eigen::SparseMatrix<double, Eigen::RowMajor> h(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
  }
  Eigen::MatrixXd hamiltonian() const { return Eigen::MatrixXd(hamiltonian_sparse()); }

  /// e_i as a dense matrix, for algebra checks.
  Eigen::MatrixXd generator(int i) const {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (std::size_t j = 0; j < dim(); ++j) {
      const TLImage img = apply_tl(i, basis_[j], sites());
      e(static_cast<Eigen::Index>(basis_.index(img.state)), static_cast<Eigen::Index>(j)) += img.loops ? beta_ : 1.0;
    }
    return e;
  }

  /// Loops between basis states s and t.
  int loops(std::size_t s, std::size_t t) const { return loop_count(partners(s), partners(t)); }

  /// Row s of the Gram matrix, beta^{loops(s, t)}.
  Eigen::VectorXd gram_row(std::size_t s) const {
    Eigen::VectorXd row(static_cast<Eigen::Index>(dim()));
    const auto ps = partners(s);
    for (std::size_t t = 0; t < dim(); ++t) row(static_cast<Eigen::Index>(t)) = std::pow(beta_, loop_count(ps, partners(t)));
    return row;
  }
  Eigen::MatrixXd gram() const {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (std::size_t s = 0; s < dim(); ++s) g.row(static_cast<Eigen::Index>(s)) = gram_row(s).transpose();
    return g;
  }

  std::size_t adjacent_index() const { return basis_.index(adjacent_arcs(sites())); }

  /// beta^{-N/2} times the all-adjacent-arcs state.
  Eigen::VectorXd boundary_state() const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
    b(static_cast<Eigen::Index>(adjacent_index())) = std::pow(beta_, -0.5 * sites());
    return b;
  }

 private:
  LinkBasis basis_;
  double beta_;
  std::vector<int> partners_;
};

struct SpectrumEntry {
  int k = 0;
  double energy = 0;
  Eigen::VectorXd vector;  // right eigenvector, scaled to |loop norm| = 1 unless null
  double loop_norm = 0;    // sign of x^T G x after scaling (+1, -1) or ~0 when null
  double overlap = 0;      // |<B|k>| with the loop-normalized eigenvector
  bool null_norm = false;
  bool degenerate = false;
};

struct SpectrumOptions {
  std::size_t dense_limit = 600;
  double tol = 1e-13;
  int ncv = 40;
};

namespace detail {

// ARPACK keeps internal SAVE state, so calls are serialized.
inline std::mutex& arpack_mutex() {
  static std::mutex m;
  return m;
}

inline void check_real(double re, double im, double scale) {
  if (std::abs(im) > 1e-8 * std::max(1.0, scale))
    throw NumericalAlarm("complex eigenvalue " + std::to_string(re) + " + " + std::to_string(im) + "i");
}

struct EigenPairs {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;
};

// Lowest `nev` eigenpairs (smallest real part) of the operator x -> op(x).
template <class Op>
EigenPairs arpack_lowest(Op&& op, int n, int nev, const SpectrumOptions& opt) {
  std::lock_guard<std::mutex> lock(arpack_mutex());
  int ncv = std::min(n, std::max(opt.ncv, 2 * nev + 2));
  if (nev >= n - 1) throw std::invalid_argument("ARPACK needs nev < n - 1");
  a_int ido = 0, info = 1;
  std::vector<double> resid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) resid[static_cast<std::size_t>(i)] = 1.0 + 0.01 * std::sin(0.37 * i);
  std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(ncv));
  std::vector<double> workd(3 * static_cast<std::size_t>(n));
  const a_int lworkl = 3 * ncv * ncv + 6 * ncv;
  std::vector<double> workl(static_cast<std::size_t>(lworkl));
  a_int iparam[11] = {0};
  a_int ipntr[14] = {0};
  iparam[0] = 1;
  iparam[2] = 20000;
  iparam[6] = 1;
  Eigen::VectorXd x(n), y(n);
  for (;;) {
    arpack::internal::dnaupd_c(&ido, "I", n, "SR", nev, opt.tol, resid.data(), ncv, v.data(), n, iparam, ipntr,
                               workd.data(), workl.data(), lworkl, &info);
    if (ido != -1 && ido != 1) break;
    x = Eigen::Map<Eigen::VectorXd>(workd.data() + ipntr[0] - 1, n);
    y = op(x);
    Eigen::Map<Eigen::VectorXd>(workd.data() + ipntr[1] - 1, n) = y;
  }
  if (info < 0) throw NumericalAlarm("dnaupd failed with info = " + std::to_string(info));
  if (info == 1) throw NumericalAlarm("dnaupd reached the iteration limit");
  std::vector<a_int> select(static_cast<std::size_t>(ncv));
  std::vector<double> dr(static_cast<std::size_t>(nev) + 1), di(static_cast<std::size_t>(nev) + 1);
  std::vector<double> z(static_cast<std::size_t>(n) * (static_cast<std::size_t>(nev) + 1));
  std::vector<double> workev(3 * static_cast<std::size_t>(ncv));
  arpack::internal::dneupd_c(1, "A", select.data(), dr.data(), di.data(), z.data(), n, 0.0, 0.0, workev.data(), "I", n,
                             "SR", nev, opt.tol, resid.data(), ncv, v.data(), n, iparam, ipntr, workd.data(),
                             workl.data(), lworkl, &info);
  if (info != 0) throw NumericalAlarm("dneupd failed with info = " + std::to_string(info));
  const int nconv = iparam[4];
  if (nconv < nev) throw NumericalAlarm("ARPACK converged only " + std::to_string(nconv) + " eigenvalues");
  std::vector<int> order(static_cast<std::size_t>(nev));
  for (int i = 0; i < nev; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return dr[static_cast<std::size_t>(a)] < dr[static_cast<std::size_t>(b)]; });
  EigenPairs out;
  for (int i : order) {
    check_real(dr[static_cast<std::size_t>(i)], di[static_cast<std::size_t>(i)], std::abs(dr[static_cast<std::size_t>(i)]));
    out.values.push_back(dr[static_cast<std::size_t>(i)]);
    out.vectors.emplace_back(Eigen::Map<Eigen::VectorXd>(z.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n), n));
  }
  return out;
}

inline void flag_degeneracies(std::vector<SpectrumEntry>& out) {
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double gap = out[i].energy - out[i - 1].energy;
    if (std::abs(gap) < 1e-9 * std::max(1.0, std::abs(out[i].energy))) out[i].degenerate = out[i - 1].degenerate = true;
  }
}

}  // namespace detail

/// Lowest `count` eigenstates of H, loop-normalized, with their overlaps
/// with the lattice boundary state. Small bases are diagonalized densely
/// (via the Gram Cholesky factor when G is positive definite); large ones
/// with ARPACK on H and H^T, using G x proportional to the left eigenvector.
inline std::vector<SpectrumEntry> spectrum(const LoopSystem& sys, int count, const SpectrumOptions& opt = {}) {
  const auto D = static_cast<int>(sys.dim());
  count = std::min(count, D);
  if (count < 1) throw std::invalid_argument("spectrum: count must be >= 1");
  const auto a = static_cast<Eigen::Index>(sys.adjacent_index());
  const double bN = std::pow(sys.beta(), -0.5 * sys.sites());
  std::vector<SpectrumEntry> out;

  auto finish = [&](double energy, Eigen::VectorXd x, double norm, double gx_a, double null_scale) {
    SpectrumEntry e;
    e.k = static_cast<int>(out.size());
    e.energy = energy;
    e.null_norm = std::abs(norm) < 1e-10 * null_scale;
    if (!e.null_norm) {
      const double s = 1.0 / std::sqrt(std::abs(norm));
      x *= s;
      gx_a *= s;
      e.loop_norm = norm > 0 ? 1.0 : -1.0;
      e.overlap = std::abs(bN * gx_a);
    } else {
      e.loop_norm = norm;
      e.overlap = 0.0;
    }
    e.vector = std::move(x);
    out.push_back(std::move(e));
  };

  if (sys.dim() <= opt.dense_limit || D < count + 3) {
    const Eigen::MatrixXd H = sys.hamiltonian();
    const Eigen::MatrixXd G = sys.gram();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gsolve(G, Eigen::EigenvaluesOnly);
    const double gmin = gsolve.eigenvalues().minCoeff(), gmax = gsolve.eigenvalues().maxCoeff();
    if (gmin > 1e-10 * gmax) {
      Eigen::LLT<Eigen::MatrixXd> llt(G);
      const Eigen::MatrixXd L = llt.matrixL();
      // S = L^T H L^{-T} is symmetric because G H = H^T G
      Eigen::MatrixXd S = L.transpose() * H * L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(D, D));
      S = 0.5 * (S + S.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      for (int k = 0; k < count; ++k) {
        Eigen::VectorXd x = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors().col(k));
        const double gx_a = G.row(a).dot(x);
        const double norm = x.dot(G * x);
        finish(es.eigenvalues()(k), std::move(x), norm, gx_a, 1.0);
      }
    } else {
      Eigen::EigenSolver<Eigen::MatrixXd> es(H);
      const auto& ev = es.eigenvalues();
      std::vector<int> order(static_cast<std::size_t>(D));
      for (int i = 0; i < D; ++i) order[static_cast<std::size_t>(i)] = i;
      std::sort(order.begin(), order.end(), [&](int i, int j) { return ev(i).real() < ev(j).real(); });
      for (int k = 0; k < count; ++k) {
        const int i = order[static_cast<std::size_t>(k)];
        detail::check_real(ev(i).real(), ev(i).imag(), std::abs(ev(i).real()));
        Eigen::VectorXd x = es.eigenvectors().col(i).real();
        if (x.norm() == 0) x = es.eigenvectors().col(i).imag();
        x.normalize();
        const Eigen::VectorXd gx = G * x;
        const double norm = x.dot(gx);
        finish(ev(i).real(), std::move(x), norm, gx(a), gx.norm());
      }
    }
    detail::flag_degeneracies(out);
    return out;
  }

  const auto H = sys.hamiltonian_sparse();
  const Eigen::SparseMatrix<double, Eigen::RowMajor> Ht = H.transpose();
  auto right = detail::arpack_lowest([&H](const Eigen::VectorXd& v) -> Eigen::VectorXd { return H * v; }, D, count, opt);
  auto left = detail::arpack_lowest([&Ht](const Eigen::VectorXd& v) -> Eigen::VectorXd { return Ht * v; }, D, count, opt);
  for (int k = 0; k < count; ++k) {
    const double e = right.values[static_cast<std::size_t>(k)];
    if (std::abs(e - left.values[static_cast<std::size_t>(k)]) > 1e-8 * std::max(1.0, std::abs(e)))
      throw NumericalAlarm("left and right spectra disagree at k = " + std::to_string(k));
    Eigen::VectorXd x = right.vectors[static_cast<std::size_t>(k)];
    const Eigen::VectorXd& y = left.vectors[static_cast<std::size_t>(k)];
    x.normalize();
    // G x = lambda y; fix lambda from the row where y is largest
    Eigen::Index s = 0;
    y.cwiseAbs().maxCoeff(&s);
    const double gx_s = sys.gram_row(static_cast<std::size_t>(s)).dot(x);
    const double lambda = gx_s / y(s);
    const double norm = lambda * x.dot(y);
    const double gx_a = lambda * y(a);
    finish(e, std::move(x), norm, gx_a, std::abs(gx_s) + std::abs(lambda) * y.norm());
  }
  detail::flag_degeneracies(out);
  return out;
}

struct LoopRecord {
  std::string p;
  int N = 0;
  int k = 0;
  double energy = 0;
  double overlap = 0;
  bool null_norm = false;
  bool degenerate = false;
};

/// <B|k>_N for k = 0..kmax and even N in [nmin, nmax], in (N, k) order.
inline std::vector<LoopRecord> overlap_table(const LoopWeight& w, int nmin, int nmax, int kmax, int jobs = 1,
                                             const SpectrumOptions& opt = {}) {
  if (nmin < 2 || nmax < nmin) throw std::invalid_argument("overlap_table: bad N range");
  if (kmax < 0) throw std::invalid_argument("overlap_table: kmax < 0");
  std::vector<int> sizes;
  for (int N = nmin + (nmin % 2); N <= nmax; N += 2) sizes.push_back(N);
  auto one = [&](int N) {
    const LoopSystem sys(N, w.beta());
    std::vector<LoopRecord> rows;
    for (const auto& e : spectrum(sys, kmax + 1, opt))
      rows.push_back({w.label(), N, e.k, e.energy, e.overlap, e.null_norm, e.degenerate});
    return rows;
  };
  std::vector<std::vector<LoopRecord>> parts(sizes.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < sizes.size(); ++i) parts[i] = one(sizes[i]);
  } else {
    std::vector<std::future<std::vector<LoopRecord>>> fut;
    std::size_t next = 0;
    while (next < sizes.size()) {
      fut.clear();
      const std::size_t start = next;
      for (int j = 0; j < jobs && next < sizes.size(); ++j, ++next) fut.push_back(std::async(std::launch::async, one, sizes[next]));
      for (std::size_t j = 0; j < fut.size(); ++j) parts[start + j] = fut[j].get();
    }
  }
  std::vector<LoopRecord> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace rectcft
