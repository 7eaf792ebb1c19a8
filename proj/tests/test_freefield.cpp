#include <gtest/gtest.h>

#include <random>

#include "rectcft/algebra/eta.hpp"
#include "rectcft/freefield/boson.hpp"
#include "rectcft/freefield/fermion.hpp"
#include "rectcft/freefield/gmatrix.hpp"

using namespace rectcft;

namespace {

Rational R(long p, long q = 1) { return make_rational(p, q); }

bool boson_vanishes_through(const BosonVector& v, int lvl) {
  for (const auto& [p, a] : v.terms())
    if (level(p) <= lvl) return false;
  return true;
}

bool fermion_vanishes_through(const FermionVector& v, int twice_lvl) {
  for (const auto& [k, a] : v.terms())
    if (FermionTwiceLevel{}(k) <= twice_lvl) return false;
  return true;
}

// exp(-sum a_{-n}^2/2n)|0> = prod_n sum_j (-1/2n)^j / j! a_{-n}^{2j}|0>
Rational boson_coherent_coefficient(const Partition& p) {
  Rational out(1);
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    const long k = static_cast<long>(j - i);
    if (k % 2) return Rational(0);
    Rational x = make_rational(-1, 2L * p[i]);
    Rational term(1);
    for (long s = 1; s <= k / 2; ++s) term *= x / Rational(s);
    out *= term;
    i = j;
  }
  return out;
}

BosonVector random_boson(std::mt19937& rng, int max_level, int cutoff) {
  std::uniform_int_distribution<int> coef(-5, 5);
  BosonVector v(cutoff);
  for (int n = 0; n <= max_level; ++n)
    for (const auto& p : partitions_of(n, 1)) v.add(p, Rational(coef(rng)));
  return v;
}

FermionVector random_fermion(std::mt19937& rng, int twice_max, int twice_cutoff) {
  std::uniform_int_distribution<int> coef(-5, 5);
  FermionVector v(twice_cutoff);
  // all strictly decreasing mode lists from {0..3}
  for (int mask = 0; mask < 16; ++mask) {
    FermionModes k;
    for (int m = 3; m >= 0; --m)
      if (mask & (1 << m)) k.push_back(m);
    if (FermionTwiceLevel{}(k) <= twice_max) v.add(k, Rational(coef(rng)));
  }
  return v;
}

}  // namespace

TEST(Boson, CoherentStateMatchesProductExpansion) {
  BosonVector two(2);
  two.add({}, R(1));
  two.add({1, 1}, R(-1, 2));
  EXPECT_EQ(boson_boundary_state(2), two);

  const BosonVector b = boson_boundary_state(4);
  EXPECT_EQ(b.coefficient({1, 1, 1, 1}), R(1, 8));
  EXPECT_EQ(b.coefficient({2, 2}), R(-1, 4));
  for (int cutoff : {4, 8, 12}) {
    const BosonVector s = boson_boundary_state(cutoff);
    BosonVector oracle(cutoff);
    for (int n = 0; n <= cutoff; ++n)
      for (const auto& p : partitions_of(n, 1)) oracle.add(p, boson_coherent_coefficient(p));
    EXPECT_EQ(s, oracle) << cutoff;
  }
}

TEST(Boson, AnnihilationResidualsVanish) {
  const BosonVector b = boson_boundary_state(10);
  for (int m = 1; m <= 10; ++m) EXPECT_TRUE(boson_vanishes_through(boson_gluing_residual(b, m), 10 - m)) << m;
  EXPECT_THROW(boson_gluing_residual(b, 0), std::invalid_argument);
}

TEST(Boson, VirasoroModeExamples) {
  BosonVector a3(6);
  a3.add({3}, R(1));
  BosonVector three = a3;
  three *= R(3);
  EXPECT_EQ(boson_virasoro(0, a3), three);

  BosonVector a11(6);
  a11.add({1, 1}, R(1));
  EXPECT_EQ(boson_virasoro(2, a11), BosonVector::vacuum(6));
  EXPECT_TRUE(boson_virasoro(-1, BosonVector::vacuum(6)).is_zero());
  BosonVector l2vac(6);
  l2vac.add({1, 1}, R(1, 2));
  EXPECT_EQ(boson_virasoro(-2, BosonVector::vacuum(6)), l2vac);
}

TEST(BosonProperty, VirasoroAlgebraAtUnitCentralCharge) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const BosonVector v = random_boson(rng, 4, 16);
    for (int m = -3; m <= 3; ++m)
      for (int n = -3; n <= 3; ++n) {
        BosonVector lhs = boson_virasoro(m, boson_virasoro(n, v));
        lhs -= boson_virasoro(n, boson_virasoro(m, v));
        BosonVector rhs = boson_virasoro(m + n, v);
        rhs *= Rational(m - n);
        if (m + n == 0) {
          BosonVector central = v;
          central *= make_rational(static_cast<long>(m) * (m * m - 1), 12);
          rhs += central;
        }
        lhs -= rhs;
        EXPECT_TRUE(lhs.is_zero()) << m << "," << n;
      }
  }
}

TEST(Boson, VirasoroProductStateEqualsCoherentState) {
  EXPECT_EQ(boson_virasoro_state(8), boson_boundary_state(8));
}

TEST(Boson, AmplitudeIsEtaPower) {
  const auto a = boson_amplitude(16);
  const auto eta = eta_inverse_power({R(0), R(1, 2)}, Variable::qhat, 16);
  EXPECT_EQ(lift(a.series), eta.series);
  EXPECT_EQ(a.prefactor, eta.prefactor);
  const auto prod = boson_product_formula(8);
  EXPECT_EQ(prod[1], R(1, 2));
  EXPECT_EQ(prod, require_constant(eta_inverse_power({R(0), R(1, 2)}, Variable::q, 8).series));
  EXPECT_EQ(substitute_square(prod).truncated(16), a.series);
}

TEST(GMatrix, PrintedValues) {
  const GMatrix g = g_series(8);
  EXPECT_EQ(g.at(0, 1), R(1, 2));
  EXPECT_EQ(g.at(0, 3), R(1, 8));
  EXPECT_EQ(g.at(1, 2), R(5, 8));
  EXPECT_EQ(g.at(0, 5), R(1, 16));
  EXPECT_EQ(g.at(1, 4), R(3, 16));
  EXPECT_EQ(g.at(2, 3), R(5, 8));
  EXPECT_EQ(g.at(0, 7), R(5, 128));
  EXPECT_EQ(g.at(1, 6), R(13, 128));
  EXPECT_EQ(g.at(2, 5), R(25, 128));
  EXPECT_EQ(g.at(3, 4), R(81, 128));
  EXPECT_EQ(g.at(1, 0), R(-1, 2));
}

TEST(GMatrixProperty, ParityAndAntisymmetry) {
  for (int cutoff = 1; cutoff <= 10; ++cutoff) {
    const GMatrix g = g_series(cutoff);
    EXPECT_EQ(g.size(), cutoff + 1);
    EXPECT_TRUE(g.is_antisymmetric()) << cutoff;
    EXPECT_TRUE(g.has_parity_zeros()) << cutoff;
  }
}

TEST(GMatrix, AMatrixRouteConverges) {
  const GMatrix exact = g_series(7);
  auto error = [&](int t) {
    const AMatrixG a = g_from_amatrix(t);
    double e = 0;
    for (int m = 0; m < 7; ++m)
      for (int n = 0; n < 7; ++n) e = std::max(e, std::abs(a.g(m, n) - to_double(exact.at(m, n))));
    return e;
  };
  const double e50 = error(50), e100 = error(100), e200 = error(200), e400 = error(400);
  EXPECT_GT(e50, e100);
  EXPECT_GT(e100, e200);
  EXPECT_GT(e200, e400);
  EXPECT_LT(e200, 5e-3);
}

TEST(Fermion, BoundaryStateLowLevels) {
  const FermionVector b = fermion_boundary_state(4, g_series(8));
  EXPECT_EQ(b.size(), 4u);
  EXPECT_EQ(b.coefficient({}), R(1));
  // psi_{-1/2} psi_{-3/2} is stored as -psi_{-3/2} psi_{-1/2}
  EXPECT_EQ(b.coefficient({1, 0}), R(-1, 2));
  EXPECT_EQ(b.coefficient({3, 0}), R(-1, 8));
  EXPECT_EQ(b.coefficient({2, 1}), R(-5, 8));
}

TEST(Fermion, AnnihilationResiduals) {
  const GMatrix g = g_series(16);
  const FermionVector b5 = fermion_boundary_state(5, g);
  EXPECT_TRUE(fermion_vanishes_through(fermion_annihilation_residual(b5, 0, g), 10 - 1));
  const FermionVector b6 = fermion_boundary_state(6, g);
  EXPECT_TRUE(fermion_vanishes_through(fermion_annihilation_residual(b6, 1, g), 12 - 3));
}

TEST(Fermion, VirasoroModeExamples) {
  FermionVector pp(8);
  pp.add({1, 0}, R(1));
  FermionVector two = pp;
  two *= R(2);
  EXPECT_EQ(fermion_virasoro(0, pp), two);
  const FermionVector l2 = fermion_virasoro(-2, fermion_vacuum(4));
  EXPECT_EQ(fermion_inner(l2, l2), R(1, 4));
  EXPECT_TRUE(fermion_virasoro(-1, fermion_vacuum(4)).is_zero());
  EXPECT_THROW(fermion_mode(2, pp), std::invalid_argument);
}

TEST(FermionProperty, VirasoroAlgebraAtHalfCentralCharge) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    const FermionVector v = random_fermion(rng, 8, 24);
    for (int m = -3; m <= 3; ++m)
      for (int n = -3; n <= 3; ++n) {
        FermionVector lhs = fermion_virasoro(m, fermion_virasoro(n, v));
        lhs -= fermion_virasoro(n, fermion_virasoro(m, v));
        FermionVector rhs = fermion_virasoro(m + n, v);
        rhs *= Rational(m - n);
        if (m + n == 0) {
          FermionVector central = v;
          central *= make_rational(static_cast<long>(m) * (m * m - 1), 24);
          rhs += central;
        }
        lhs -= rhs;
        EXPECT_TRUE(lhs.is_zero()) << m << "," << n;
      }
  }
}

TEST(Fermion, AmplitudeValuesAndEtaPower) {
  const auto a = fermion_amplitude(10);
  const Rational printed[] = {R(1), R(1, 4), R(13, 32), R(55, 128), R(1235, 2048)};
  for (int k = 0; k < 5; ++k) EXPECT_EQ(a.series[2 * k], printed[k]) << k;
  const auto eta = eta_inverse_power({R(0), R(1, 4)}, Variable::qhat, 10);
  EXPECT_EQ(lift(a.series), eta.series);
  EXPECT_EQ(a.prefactor, eta.prefactor);
}

TEST(Fermion, VirasoroProductStateEqualsCoherentState) {
  EXPECT_EQ(fermion_virasoro_state(8), fermion_boundary_state(8, g_series(17)));
}
