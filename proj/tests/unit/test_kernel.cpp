#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "starcalc/error.hpp"
#include "starcalc/expr.hpp"
#include "starcalc/kernel.hpp"

using namespace starcalc;

namespace {

double product_of(const Expr& f, std::span<const PhasePoint> pts) {
  double p = 1.0;
  for (const auto& x : pts) p *= f(x.coords);
  return p;
}

double factorial(std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); }

}  // namespace

TEST(Expr, ParsesWithStandardPrecedence) {
  const Expr e = Expr::parse("1 + 2*x0^2 - x[1]/4");
  const std::vector<double> x{0.5, 2.0};
  EXPECT_DOUBLE_EQ(e(x), 1.0 + 2.0 * 0.25 - 0.5);
  EXPECT_EQ(e.arity(), 2u);
  EXPECT_DOUBLE_EQ(Expr::parse("-2^2")(x), -4.0);
  EXPECT_DOUBLE_EQ(Expr::parse("exp(x0) * abs(-3)")(x), 3.0 * std::exp(0.5));
}

TEST(Expr, IndicatorIsClosedBox) {
  const Expr e = Expr::parse("ind(0, 0.5)");
  EXPECT_EQ(e(std::vector<double>{0.5}), 1.0);
  EXPECT_EQ(e(std::vector<double>{0.0}), 1.0);
  EXPECT_EQ(e(std::vector<double>{0.51}), 0.0);
  std::vector<double> br;
  e.collect_breakpoints(0, br);
  EXPECT_NE(std::find(br.begin(), br.end(), 0.5), br.end());
}

TEST(Expr, RejectsMalformedText) {
  for (const char* bad : {"1 +", "x", "exp(1", "2^x0", "ind(0)", "foo(1)", "1 2"}) {
    try {
      Expr::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
    }
  }
}

TEST(Expr, RoundTripsThroughText) {
  const Expr e = Expr::parse("exp(0.3 - x0) * (1 + ind(0.1, 0.4)) / 2");
  const Expr back = Expr::parse(e.to_string());
  for (double x : {0.0, 0.1, 0.25, 0.4, 0.9}) EXPECT_DOUBLE_EQ(back(std::vector<double>{x}), e(std::vector<double>{x}));
}

TEST(Expr, BoundEnclosesRange) {
  const Expr e = Expr::parse("x0^2 - 3*x0 + exp(x0)");
  const Box box({{-1.0, 2.0}});
  const Interval b = e.bound(box);
  for (int i = 0; i <= 300; ++i) {
    const double x = -1.0 + 3.0 * i / 300.0;
    const double v = e(std::vector<double>{x});
    EXPECT_LE(b.lo, v);
    EXPECT_GE(b.hi, v);
  }
}

TEST(Kernel, FamiliesEvaluateAsDefined) {
  const std::vector<PhasePoint> pts{{0.2}, {0.7}, {0.4}};
  const Expr f = Expr::parse("1 + x0");
  EXPECT_DOUBLE_EQ(Kernel::lp_exponent(f)(pts), product_of(f, pts));
  EXPECT_DOUBLE_EQ(Kernel::constant_level(2.0)(pts), 8.0);
  EXPECT_EQ(Kernel::unit_star()(pts), 0.0);
  EXPECT_EQ(Kernel::unit_star()({}), 1.0);
  EXPECT_EQ(Kernel::singleton(f)(pts), 0.0);
  EXPECT_DOUBLE_EQ(Kernel::singleton(f)(std::vector<PhasePoint>{{0.2}}), 1.2);
  EXPECT_DOUBLE_EQ(Kernel::level_weight({1.0, 2.0, 3.0, 4.0})(pts), 4.0);
  EXPECT_EQ(Kernel::level_weight({1.0, 2.0})(pts), 0.0);
  EXPECT_NEAR(Kernel::extremal_witness(2.0, 0.5)(pts), 8.0 * std::sqrt(6.0), 1e-12);
  EXPECT_DOUBLE_EQ((Kernel::constant_level(2.0) + Kernel::constant_level(3.0))(pts), 35.0);
  EXPECT_DOUBLE_EQ((Kernel::constant_level(2.0) * Kernel::constant_level(3.0))(pts), 216.0);
  EXPECT_DOUBLE_EQ((0.5 * Kernel::constant_level(2.0))(pts), 4.0);
}

TEST(Kernel, ConvolutionOfExponentsIsSumOfFactors) {
  const Expr f = Expr::parse("x0"), g = Expr::parse("1 - x0");
  const Kernel c = Kernel::convolution(Kernel::lp_exponent(f), Kernel::lp_exponent(g));
  const std::vector<PhasePoint> pts{{0.2}, {0.7}, {0.4}, {0.9}};
  EXPECT_NEAR(c(pts), 1.0, 1e-12);
}

TEST(Kernel, ExpStarCountsPartitions) {
  // exp*(u) with u = 1 on nonempty sets gives Bell numbers.
  const Kernel u = Kernel::constant_level(1.0) + Kernel::scale(-1.0, Kernel::unit_star());
  const Kernel e = Kernel::exp_star(u);
  const double bell[] = {1, 1, 2, 5, 15, 52, 203};
  std::vector<PhasePoint> pts;
  for (int n = 0; n <= 6; ++n) {
    EXPECT_NEAR(e(pts), bell[n], 1e-9) << n;
    pts.push_back({0.1 * (n + 1)});
  }
}

TEST(Kernel, EvaluationIsPermutationInvariant) {
  const Kernel k = Kernel::convolution(Kernel::lp_exponent(Expr::parse("1 + x0")),
                                       Kernel::singleton(Expr::parse("x0^2")) + Kernel::level_weight({0, 0, 1.5}));
  std::vector<PhasePoint> pts{{0.3}, {0.1}, {0.8}, {0.5}};
  const double ref = k(pts);
  std::sort(pts.begin(), pts.end(), canonical_less);
  do {
    EXPECT_EQ(k(pts), ref);
  } while (std::next_permutation(pts.begin(), pts.end(), canonical_less));
}

TEST(Kernel, CustomSeesCanonicalOrder) {
  const Kernel k = Kernel::custom("first", [](std::span<const PhasePoint> p) { return p.empty() ? 0.0 : p[0][0]; });
  EXPECT_EQ(k(std::vector<PhasePoint>{{0.9}, {0.2}, {0.5}}), 0.2);
  EXPECT_EQ(k.family(), Kernel::Family::Custom);
}

TEST(Kernel, TabulateMatchesPointwiseEvaluation) {
  auto g = oracle::ground(21, 6);
  const Kernel k = Kernel::lp_exponent(Expr::parse("0.5 + x0")) + Kernel::level_weight({0.0, 1.0, 0.0, 2.0});
  const SetFunction t = tabulate(k, g);
  for (Mask m = 0; m < 64; ++m) EXPECT_DOUBLE_EQ(t[m], k(g->select(m)));
}

TEST(Kernel, LevelFormOfExponentFamilies) {
  const auto lf = Kernel::lp_exponent(Expr::parse("2*x0")).level_form();
  ASSERT_TRUE(lf.has_value());
  ASSERT_EQ(lf->size(), 1u);
  EXPECT_FALSE(Kernel::custom("c", [](std::span<const PhasePoint>) { return 1.0; }).level_form().has_value());
  EXPECT_EQ(Kernel::extremal_witness(2.0, 0.0).empty_value(), 1.0);
}

TEST(LevelWeights, TableAndTail) {
  const LevelWeights w{{1.0, 3.0}, 2.0, 1.0};
  EXPECT_EQ(w(0), 1.0);
  EXPECT_EQ(w(1), 3.0);
  EXPECT_DOUBLE_EQ(w(4), 2.0 * factorial(4));
  EXPECT_FALSE(w.finite_support());
  const LevelWeights t = LevelWeights::table({1.0, 2.0, 0.0});
  EXPECT_TRUE(t.finite_support());
  EXPECT_EQ(t.constant_value(), std::nullopt);
  EXPECT_EQ(LevelWeights::one().constant_value(), 1.0);
  const LevelWeights p = t * LevelWeights::table({2.0, 2.0, 2.0});
  EXPECT_EQ(p(1), 4.0);
  EXPECT_EQ(t.scaled(3.0)(1), 6.0);
}

TEST(GrowthWeight, DirectAndLogAgree) {
  for (std::size_t n : {0u, 1u, 5u, 20u, 150u}) {
    EXPECT_NEAR(log_growth_weight(1.5, 0.5, n), n * std::log(1.5) + 0.5 * std::lgamma(n + 1.0), 1e-9 * (1 + n));
  }
  EXPECT_NEAR(growth_weight(2.0, 1.0, 5), 32.0 * 120.0, 1e-9);
}
