#include <gtest/gtest.h>

#include <cmath>

#include "rectcft/lattice/link_state.hpp"
#include "rectcft/lattice/loop_spectrum.hpp"

using namespace rectcft;

namespace {

const double kBeta3 = std::sqrt(2.0);

// e_{i_k} ... e_{i_1} applied to s, accumulating closed loops.
TLImage word(const std::vector<int>& ops, LinkState s, int N) {
  int loops = 0;
  for (int i : ops) {
    const TLImage img = apply_tl(i, s, N);
    s = img.state;
    loops += img.loops;
  }
  return {s, loops};
}

bool same(const TLImage& a, const TLImage& b) { return a.state == b.state && a.loops == b.loops; }

}  // namespace

TEST(LinkStates, CatalanCounts) {
  EXPECT_EQ(LinkBasis(2).size(), 1u);
  EXPECT_EQ(LinkBasis(4).size(), 2u);
  EXPECT_EQ(LinkBasis(12).size(), 132u);
  EXPECT_EQ(LinkBasis(16).size(), 1430u);
  EXPECT_THROW(LinkBasis(5), std::invalid_argument);
  for (LinkState s : enumerate_links(10)) EXPECT_EQ(from_pairing(pairing(s, 10)), s);
  EXPECT_EQ(to_parentheses(adjacent_arcs(6), 6), "()()()");
}

TEST(LinkStates, GeneratorExamples) {
  const LinkState two_arcs = adjacent_arcs(4);  // ()()
  const TLImage a = apply_tl(1, two_arcs, 4);
  EXPECT_EQ(a.state, two_arcs);
  EXPECT_EQ(a.loops, 1);
  const TLImage b = apply_tl(2, two_arcs, 4);
  EXPECT_EQ(to_parentheses(b.state, 4), "(())");
  EXPECT_EQ(b.loops, 0);
  EXPECT_THROW(apply_tl(4, two_arcs, 4), std::out_of_range);
}

TEST(TLProperty, RelationsHoldOnEveryLinkState) {
  for (int N = 2; N <= 12; N += 2) {
    for (LinkState s : enumerate_links(N)) {
      for (int i = 1; i < N; ++i) {
        const TLImage once = apply_tl(i, s, N);
        const TLImage twice = word({i, i}, s, N);
        EXPECT_TRUE(twice.state == once.state && twice.loops == once.loops + 1);
        if (i + 1 < N) {
          EXPECT_TRUE(same(word({i, i + 1, i}, s, N), once));
          EXPECT_TRUE(same(word({i + 1, i, i + 1}, s, N), apply_tl(i + 1, s, N)));
        }
        for (int j = i + 2; j < N; ++j) EXPECT_TRUE(same(word({i, j}, s, N), word({j, i}, s, N)));
      }
    }
  }
}

TEST(TLProperty, MatrixRelationsAtAnyWeight) {
  for (double beta : {kBeta3, 1.7, 2.0}) {
    const LoopSystem sys(8, beta);
    for (int i = 1; i < 8; ++i) {
      const Eigen::MatrixXd e = sys.generator(i);
      EXPECT_EQ(e * e, beta * e);
      if (i + 1 < 8) EXPECT_EQ(e * sys.generator(i + 1) * e, e);
      for (int j = i + 2; j < 8; ++j) EXPECT_EQ(e * sys.generator(j), sys.generator(j) * e);
    }
  }
}

TEST(LoopSystem, SmallHamiltoniansAndGram) {
  const double b = kBeta3;
  const LoopSystem two(2, b);
  ASSERT_EQ(two.dim(), 1u);
  EXPECT_DOUBLE_EQ(two.hamiltonian()(0, 0), -b);

  // basis order: (()) then ()()
  const LoopSystem four(4, b);
  Eigen::MatrixXd h(2, 2), g(2, 2);
  h << -b, -1, -2, -2 * b;
  g << b * b, b, b, b * b;
  EXPECT_TRUE(four.hamiltonian().isApprox(h, 1e-15));
  EXPECT_TRUE(four.gram().isApprox(g, 1e-15));

  const LoopSystem six(6, b);
  const LinkBasis& basis = six.basis();
  const std::size_t s = basis.index(adjacent_arcs(6));
  const std::size_t t = basis.index(0b010011);  // (())()
  EXPECT_EQ(to_parentheses(basis[t], 6), "(())()");
  EXPECT_EQ(six.loops(s, t), 2);
  EXPECT_NEAR(six.gram()(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)), b * b, 1e-15);
}

TEST(LoopSystem, BoundaryStateAndAdjacentDiagonal) {
  for (int N : {4, 8, 12}) {
    const LoopSystem sys(N, kBeta3);
    const auto a = static_cast<Eigen::Index>(sys.adjacent_index());
    EXPECT_NEAR(sys.gram()(a, a), std::pow(kBeta3, N / 2), 1e-12);
    const Eigen::VectorXd bs = sys.boundary_state();
    EXPECT_NEAR(bs(a), std::pow(kBeta3, -N / 2.0), 1e-15);
    EXPECT_EQ((bs.array() != 0).count(), 1);
  }
}

TEST(LoopProperty, GramIsSymmetricAndHamiltonianSelfAdjoint) {
  for (double beta : {kBeta3, 2 * std::cos(std::numbers::pi / 6), 2.0}) {
    for (int N = 2; N <= 12; N += 2) {
      const LoopSystem sys(N, beta);
      const Eigen::MatrixXd G = sys.gram();
      const Eigen::MatrixXd H = sys.hamiltonian();
      EXPECT_EQ(G, G.transpose());
      EXPECT_LT((G * H - H.transpose() * G).cwiseAbs().maxCoeff(), 1e-12 * G.cwiseAbs().maxCoeff()) << N;
    }
  }
}

TEST(LoopSpectrum, FourSiteGroundEnergy) {
  for (double beta : {kBeta3, 1.5, 2.0}) {
    const auto sp = spectrum(LoopSystem(4, beta), 2);
    EXPECT_NEAR(sp[0].energy, -(3 * beta + std::sqrt(beta * beta + 8)) / 2, 1e-12);
    EXPECT_NEAR(sp[1].energy, -(3 * beta - std::sqrt(beta * beta + 8)) / 2, 1e-12);
  }
}

TEST(LoopSpectrum, ArpackAgreesWithDense) {
  const LoopSystem sys(12, kBeta3);
  SpectrumOptions sparse;
  sparse.dense_limit = 0;
  const auto dense = spectrum(sys, 4);
  const auto arnoldi = spectrum(sys, 4, sparse);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(dense[k].energy, arnoldi[k].energy, 1e-9) << k;
    EXPECT_NEAR(dense[k].overlap, arnoldi[k].overlap, 1e-7) << k;
  }
}

TEST(LoopSpectrum, SecondExcitedOverlapVanishesAtCriticalIsing) {
  const auto rows = overlap_table(LoopWeight::finite(3), 10, 16, 2);
  for (const auto& r : rows)
    if (r.k == 2) EXPECT_LT(r.overlap, 1e-8) << r.N;
}

TEST(LoopSpectrum, GapClosesWithSize) {
  double prev = std::numeric_limits<double>::infinity();
  for (int N = 6; N <= 14; N += 2) {
    const auto sp = spectrum(LoopSystem(N, kBeta3), 2);
    const double gap = sp[1].energy - sp[0].energy;
    EXPECT_GT(gap, 0);
    EXPECT_LT(gap, prev) << N;
    prev = gap;
  }
}

TEST(LoopSpectrum, TableIsIndependentOfJobCount) {
  const auto a = overlap_table(LoopWeight::finite(4), 8, 14, 2, 1);
  const auto b = overlap_table(LoopWeight::finite(4), 8, 14, 2, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].N, b[i].N);
    EXPECT_EQ(a[i].k, b[i].k);
    EXPECT_EQ(a[i].energy, b[i].energy);
    EXPECT_EQ(a[i].overlap, b[i].overlap);
  }
}

TEST(LoopWeight, ParametersAndLabels) {
  EXPECT_NEAR(LoopWeight::finite(3).central_charge(), 0.5, 1e-15);
  EXPECT_NEAR(LoopWeight::finite(3).beta(), kBeta3, 1e-15);
  EXPECT_EQ(LoopWeight::infinity().beta(), 2.0);
  EXPECT_EQ(LoopWeight::infinity().label(), "inf");
  EXPECT_EQ(LoopWeight::finite(5).label(), "5");
  EXPECT_THROW(LoopWeight::finite(0.5), std::invalid_argument);
}
