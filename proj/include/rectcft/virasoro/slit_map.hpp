#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rectcft/errors.hpp"

namespace rectcft {

using Complex = std::complex<double>;

namespace detail {

inline void check_slit_domain(int N, double modulus) {
  if (N < 1) throw std::invalid_argument("slit map index N must be >= 1");
  const double bound = std::pow(2.0, 1.0 / std::ldexp(1.0, N));
  if (!(modulus > bound * (1.0 + 1e-9)))
    throw NumericalAlarm("|z| = " + std::to_string(modulus) + " too close to the branch points (|z| <= " +
                         std::to_string(bound) + ")");
}

inline Complex nearest_root(const Complex& r, const Complex& target) {
  return std::abs(r - target) <= std::abs(-r - target) ? r : -r;
}

}  // namespace detail

/// f_N(z) = 2 cos(2^-N arccos(z^{2^N}/2)), evaluated as N nested square roots
/// t -> sqrt(2 + t) starting from t = z^{2^N}. Each root takes the branch
/// nearest z^{2^{N-j}}, the leading behaviour near infinity.
inline Complex slit_map(int N, Complex z) {
  detail::check_slit_domain(N, std::abs(z));
  std::vector<Complex> powers(static_cast<std::size_t>(N) + 1);
  powers[0] = z;
  for (int j = 1; j <= N; ++j) powers[static_cast<std::size_t>(j)] = powers[static_cast<std::size_t>(j - 1)] * powers[static_cast<std::size_t>(j - 1)];
  Complex t = powers[static_cast<std::size_t>(N)];
  for (int j = N - 1; j >= 0; --j) {
    Complex target = powers[static_cast<std::size_t>(j)];
    if (j == 0) target += 1.0 / z;
    t = detail::nearest_root(std::sqrt(2.0 + t), target);
  }
  return t;
}

/// g_k(z) = z (1 + 2/z^k)^{1/k}, principal power.
inline Complex elementary_slit(int k, Complex z) {
  return z * std::pow(1.0 + 2.0 / std::pow(z, k), 1.0 / k);
}

/// g_2 o g_4 o ... o g_{2^N}(z), innermost g_{2^N}.
inline Complex slit_composition(int N, Complex z) {
  for (int j = N; j >= 1; --j) z = elementary_slit(1 << j, z);
  return z;
}

/// h_N = f_N^{-1}: u -> u^2 - 2 applied N times gives z^{2^N}; the 2^N-th
/// root is the one nearest (w + sqrt(w^2 - 4))/2.
inline Complex slit_map_inverse(int N, Complex w) {
  if (N < 1) throw std::invalid_argument("slit map index N must be >= 1");
  Complex u = w;
  for (int j = 0; j < N; ++j) u = u * u - 2.0;
  const Complex guess = 0.5 * (w + detail::nearest_root(std::sqrt(w * w - 4.0), w));
  const double m = std::ldexp(1.0, N);
  const Complex root = std::pow(u, 1.0 / m);
  Complex best = root;
  for (int k = 0; k < (1 << N); ++k) {
    const Complex cand = root * std::polar(1.0, 2.0 * std::numbers::pi * k / m);
    if (std::abs(cand - guess) < std::abs(best - guess)) best = cand;
  }
  detail::check_slit_domain(N, std::abs(best));
  return best;
}

/// Real-axis f_N for z beyond the branch points, in any floating type with
/// sqrt (double, long double, Boost multiprecision).
template <class T>
T slit_map_real(int N, const T& z) {
  T t = z;
  for (int j = 0; j < N; ++j) t = t * t;
  using std::sqrt;
  for (int j = 0; j < N; ++j) t = sqrt(T(2) + t);
  return t;
}

/// Log-log slope of |f_N(z) - z - 1/z| over real z, computed with 100
/// decimal digits so the remainder is not swamped by round-off.
inline double slit_decay_slope(int N, const std::vector<double>& zs = {4.0, 8.0, 16.0}) {
  using Big = boost::multiprecision::cpp_bin_float_100;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double zd : zs) {
    const Big z(zd);
    const Big r = abs(slit_map_real(N, z) - z - Big(1) / z);
    const double x = std::log(zd);
    const double y = static_cast<double>(log(r));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(zs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace rectcft
