#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "starcalc/error.hpp"
#include "starcalc/posdef.hpp"

using namespace starcalc;

namespace {

// int (G1 * G2) k dlambda by the midpoint rule, for G1, G2 supported on at
// most one point each, so only configurations of size <= 2 contribute.
double grid_pairing(const Kernel& g1, const Kernel& g2, const Kernel& k, double z, int cells) {
  const double h = 1.0 / cells;
  auto cover = [&](const std::vector<PhasePoint>& eta) {
    const std::uint32_t n = static_cast<std::uint32_t>(eta.size());
    double acc = 0.0;
    for (std::uint32_t a = 0; a < (1u << n); ++a) {
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        if ((a | b) != (1u << n) - 1) continue;
        std::vector<PhasePoint> ea, eb;
        for (std::uint32_t i = 0; i < n; ++i) {
          if (a >> i & 1) ea.push_back(eta[i]);
          if (b >> i & 1) eb.push_back(eta[i]);
        }
        acc += g1(ea) * g2(eb);
      }
    }
    return acc * k(eta);
  };
  double total = cover({});
  double one = 0.0, two = 0.0;
  for (int i = 0; i < cells; ++i) {
    const PhasePoint x{(i + 0.5) * h};
    one += cover({x}) * h;
    for (int j = 0; j < cells; ++j) {
      // Configurations are sets; the diagonal cell uses two distinct points.
      if (i == j) two += cover({PhasePoint{(i + 0.25) * h}, PhasePoint{(i + 0.75) * h}}) * h * h;
      else two += cover({x, PhasePoint{(j + 0.5) * h}}) * h * h;
    }
  }
  total += z * one + z * z * two / 2.0;
  return total;
}

}  // namespace

TEST(Pairing, ClosedFormMatchesGridSum) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 0.7);
  const Kernel g1 = Kernel::singleton(Expr::parse("1 + x0"));
  const Kernel g2 = Kernel::singleton(Expr::parse("x0")) + Kernel::unit_star();
  const Kernel k = Kernel::lp_exponent(Expr::parse("2 - x0"));
  const auto exact = star_pairing(g1, g2, k, space, space.box(), 1000, 1);
  ASSERT_TRUE(exact.exact);
  EXPECT_NEAR(exact.value, grid_pairing(g1, g2, k, 0.7, 400), 1e-4);
}

TEST(Pairing, MonteCarloAgreesWithClosedForm) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const Kernel g1 = Kernel::singleton(Expr::parse("1 + x0"));
  const Kernel g2 = Kernel::singleton(Expr::parse("ind(0, 0.5)"));
  const Kernel k = Kernel::level_weight({1.0, 0.5, 0.25});
  const Kernel k_custom = Kernel::custom("same", [k](std::span<const PhasePoint> p) { return k(p); });
  const auto exact = star_pairing(g1, g2, k, space, space.box(), 0, 1);
  const auto mc = star_pairing(g1, g2, k_custom, space, space.box(), 100000, 2);
  ASSERT_TRUE(exact.exact);
  ASSERT_FALSE(mc.exact);
  EXPECT_LE(std::abs(mc.value - exact.value), 4.0 * mc.std_error);
}

TEST(Gram, PositiveKernelIsPsdAndMatrixIsSymmetric) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const auto basis = default_basis(space.box(), 4);
  ASSERT_EQ(basis.size(), 5u);
  const auto rep = gram_star(Kernel::lp_exponent(Expr::parse("1 + x0")), basis, space, space.box());
  EXPECT_TRUE(rep.exact);
  EXPECT_TRUE(rep.psd);
  EXPECT_EQ(rep.verdict, "no violation found");
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(rep.matrix[i][j], rep.matrix[j][i]);
  EXPECT_LE(rep.max_asymmetry, 1e-12);
  EXPECT_TRUE(std::is_sorted(rep.eigenvalues.begin(), rep.eigenvalues.end()));
}

TEST(Gram, EigenvaluesBoundTheQuadraticForm) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const auto basis = default_basis(space.box(), 3);
  const auto rep = gram_star(Kernel::level_weight({1.0, -1.5, 2.0, -0.5}), basis, space, space.box());
  Philox4x32 rng(70, 0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(basis.size());
    double norm2 = 0.0;
    for (auto& x : v) {
      x = gen::uniform(rng, -1, 1);
      norm2 += x * x;
    }
    double q = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) q += v[i] * rep.matrix[i][j] * v[j];
    EXPECT_GE(q / norm2, rep.min_eig - 1e-10);
    EXPECT_LE(q / norm2, rep.eigenvalues.back() + 1e-10);
  }
}

TEST(Gram, NegativeControlIsFound) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const auto basis = default_basis(space.box(), 4);
  const auto ctl = negative_control_search(basis, space, space.box(), 77);
  ASSERT_TRUE(ctl.has_value());
  EXPECT_FALSE(ctl->report.psd);
  EXPECT_EQ(ctl->report.verdict, "violation found");
  EXPECT_LT(ctl->report.min_eig, -10.0 * ctl->report.tol);
  EXPECT_EQ(ctl->kernel.empty_value(), 1.0);
}

TEST(TwoType, LiftEvaluatesOnTheUnion) {
  const Kernel g = Kernel::singleton(Expr::parse("1 + x0")) + Kernel::level_weight({0.5, 0.0, 2.0});
  const TwoTypeKernel lifted = TwoTypeKernel::lift(g);
  const std::vector<PhasePoint> a{{0.1}}, b{{0.3}}, none{};
  EXPECT_NEAR(lifted(a, b), g(std::vector<PhasePoint>{{0.1}, {0.3}}), 1e-14);
  EXPECT_NEAR(lifted(a, none), g(a), 1e-14);
  EXPECT_NEAR(lifted(none, none), 0.5, 1e-14);
  const TwoTypeKernel f = TwoTypeKernel::factorized(Kernel::constant_level(2.0), Kernel::constant_level(3.0));
  EXPECT_DOUBLE_EQ(f(a, std::vector<PhasePoint>{{0.3}, {0.4}}), 18.0);
  EXPECT_THROW(TwoTypeKernel::lift(Kernel::lp_exponent(Expr::parse("x0"))), Error);
}

TEST(TwoType, PositivityTransfersToTheConvolution) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const auto basis = default_basis(space.box(), 3);
  GramOptions opt;
  opt.samples = 20000;
  const auto rep = critposdef_check(Kernel::lp_exponent(Expr::parse("1 + x0")),
                                    Kernel::lp_exponent(Expr::parse("0.5 + 0.5*x0")), basis, space, space.box(), opt);
  EXPECT_TRUE(rep.entries_match);
  EXPECT_TRUE(rep.implication_holds);
  EXPECT_TRUE(rep.one_type.psd);
}
