#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "starcalc/error.hpp"
#include "starcalc/lebesgue_poisson.hpp"

using namespace starcalc;

namespace {

// Composite Simpson on [a, b] in one dimension.
double simpson(const Expr& f, double a, double b, int cells = 2000) {
  const double h = (b - a) / cells;
  double s = 0.0;
  for (int i = 0; i <= cells; ++i) {
    const double w = (i == 0 || i == cells) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * f(std::vector<double>{a + i * h});
  }
  return s * h / 3.0;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Quadrature, MatchesSimpsonInOneDimension) {
  const PhaseSpace space(Box({{0.0, 2.0}}), 1.0, Expr::parse("1 + x0"));
  const Expr smooth = Expr::parse("exp(-x0) * x0^2");
  const Expr f = smooth + Expr::parse("ind(0.5, 1.5)");
  const Box w({{0.25, 1.75}});
  // The indicator part integrates 1 + x over [0.5, 1.5], which is 2.
  const double ref = simpson(smooth * Expr::parse("1 + x0"), 0.25, 1.75) + 2.0;
  EXPECT_NEAR(space.integrate(f, w).value, ref, 1e-10);
  EXPECT_NEAR(space.mass(w), 1.5 + (1.75 * 1.75 - 0.0625) / 2.0, 1e-12);
}

TEST(Quadrature, TwoDimensionalProduct) {
  const PhaseSpace space(Box({{0.0, 1.0}, {0.0, 1.0}}), 1.0);
  EXPECT_NEAR(space.integrate(Expr::parse("x0 * x1"), space.box()).value, 0.25, 1e-12);
  EXPECT_THROW(space.check_window(Box({{0.0, 2.0}, {0.0, 1.0}})), Error);
}

TEST(LevelSeries, KnownSums) {
  EXPECT_NEAR(level_series(LevelWeights::one(), 1.3), std::exp(1.3), 1e-14);
  EXPECT_NEAR(level_series(LevelWeights::table({1.0, 2.0, 3.0}), 2.0), 1.0 + 4.0 + 6.0, 1e-14);
  // sum (n!)^{1/2} x^n / n! at x = 0.5, by direct summation.
  double ref = 0.0;
  for (int n = 0; n < 200; ++n) ref += std::exp(0.5 * std::lgamma(n + 1.0) + n * std::log(0.5) - std::lgamma(n + 1.0));
  EXPECT_NEAR(level_series(LevelWeights::factorial_power(0.5), 0.5), ref, 1e-12);
  EXPECT_NEAR(level_series(LevelWeights::factorial_power(1.0), 0.5), 2.0, 1e-12);
  EXPECT_EQ(code_of([] { level_series(LevelWeights::factorial_power(1.0), 1.0); }), ErrorCode::DivergentSeries);
  EXPECT_EQ(code_of([] { level_series(LevelWeights::factorial_power(1.5), 0.1); }), ErrorCode::DivergentSeries);
}

TEST(ClosedForm, ExponentAndLevelKernels) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 2.0);
  const Box w = space.box();
  const Expr f = Expr::parse("0.5 + x0");
  EXPECT_NEAR(*integrate_closed(Kernel::lp_exponent(f), space, w), std::exp(2.0 * 1.0), 1e-12);
  EXPECT_NEAR(integrate_exponent(f, space, w).value, std::exp(2.0), 1e-12);
  // sum_n w(n) (z m)^n / n!
  EXPECT_NEAR(*integrate_closed(Kernel::level_weight({1.0, 0.0, 3.0}), space, w), 1.0 + 3.0 * 4.0 / 2.0, 1e-12);
  EXPECT_NEAR(*integrate_closed(Kernel::unit_star(), space, w), 1.0, 0.0);
  // Singleton sigma: z int sigma.
  EXPECT_NEAR(*integrate_closed(Kernel::singleton(f), space, w), 2.0, 1e-12);
  // Convolution integrates to the product of integrals.
  const Kernel a = Kernel::lp_exponent(f), b = Kernel::level_weight({1.0, 2.0});
  EXPECT_NEAR(*integrate_closed(Kernel::convolution(a, b), space, w),
              *integrate_closed(a, space, w) * *integrate_closed(b, space, w), 1e-10);
  EXPECT_FALSE(integrate_closed(Kernel::custom("c", [](std::span<const PhasePoint>) { return 1.0; }), space, w));
}

TEST(MonteCarlo, AgreesWithClosedFormWithinStandardErrors) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.5, Expr::parse("0.5 + x0"));
  const Box w({{0.0, 0.8}});
  const Kernel k = Kernel::lp_exponent(Expr::parse("1 - 0.5*x0")) + Kernel::level_weight({0.0, 1.0, -2.0});
  const double exact = *integrate_closed(k, space, w);
  const auto mc = integrate_mc(k, space, w, 200000, 17);
  EXPECT_FALSE(mc.exact);
  EXPECT_GT(mc.std_error, 0.0);
  EXPECT_LE(std::abs(mc.value - exact), 4.0 * mc.std_error);
  EXPECT_NEAR(mc.normalization, std::exp(1.5 * space.mass(w)), 1e-12);
}

TEST(MonteCarlo, ResultDoesNotDependOnThreadCount) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const Kernel k = Kernel::lp_exponent(Expr::parse("x0"));
  ::setenv("STARCALC_THREADS", "1", 1);
  const auto one = integrate_mc(k, space, space.box(), 50000, 99);
  ::setenv("STARCALC_THREADS", "4", 1);
  EXPECT_EQ(mc_threads(), 4u);
  const auto four = integrate_mc(k, space, space.box(), 50000, 99);
  ::unsetenv("STARCALC_THREADS");
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(RunningStats, MergeMatchesSinglePass) {
  RunningStats all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i * 0.7) * 3.0 + i * 0.01;
    all.push(x);
    (i < 37 ? a : b).push(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count, all.count);
  EXPECT_NEAR(a.mean, all.mean, 1e-13);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-12);
}

TEST(Sampler, CountIsPoissonAndPointsStayInWindow) {
  const PhaseSpace space(Box({{0.0, 2.0}}), 3.0);
  const Box w({{0.5, 1.5}});
  LPSampler s(space, w);
  EXPECT_DOUBLE_EQ(s.intensity(), 3.0);
  Philox4x32 rng(5, 0);
  double sum = 0.0, sum2 = 0.0;
  const int n = 40000;
  std::vector<PhasePoint> pts;
  for (int i = 0; i < n; ++i) {
    s.draw(rng, pts);
    for (const auto& p : pts) ASSERT_TRUE(w.contains(p));
    sum += pts.size();
    sum2 += static_cast<double>(pts.size()) * pts.size();
  }
  const double mean = sum / n, var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, 3.0, 5.0 * std::sqrt(3.0 / n));
  EXPECT_NEAR(var, 3.0, 0.15);
  const PhaseSpace half(Box({{0.0, 2.0}}), 1.0, Expr::parse("ind(0, 0.5)"));
  EXPECT_EQ(code_of([&] { LPSampler z(half, Box({{1.0, 2.0}})); }), ErrorCode::ZeroMassWindow);
}

TEST(Sampler, SampleLpIsReproducible) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 4.0);
  const auto a = sample_lp(space, space.box(), 8, 2);
  const auto b = sample_lp(space, space.box(), 8, 2);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.stream, 2u);
}

TEST(Identities, MinlosHoldsForExponents) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const Kernel h = Kernel::lp_exponent(Expr::parse("0.5 + 0.5*x0"));
  const Kernel g1 = Kernel::lp_exponent(Expr::parse("x0"));
  const Kernel g2 = Kernel::level_weight({1.0, -1.0, 0.5});
  const auto r = minlos_check(h, g1, g2, space, space.box(), 40000, 3);
  EXPECT_TRUE(r.within(4.0));
  ASSERT_TRUE(r.closed_lhs && r.closed_rhs);
  EXPECT_LE(r.closed_residual(), 1e-10);
  EXPECT_EQ(r.overlap_violations, 0u);
}

TEST(Identities, MeasureConvolutionRejectsNegativeDensities) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const Kernel g = Kernel::lp_exponent(Expr::parse("0.5"));
  const Kernel ok = Kernel::lp_exponent(Expr::parse("1 + x0"));
  const auto r = measure_convolution_check(ok, ok, g, space, space.box(), 20000, 4);
  EXPECT_TRUE(r.identity.within(4.0));
  EXPECT_TRUE(r.window_mass_finite);
  EXPECT_EQ(code_of([&] { measure_convolution_check(Kernel::lp_exponent(Expr::parse("x0 - 0.5")), ok, g, space,
                                                    space.box(), 20000, 4); }),
            ErrorCode::NegativeDensity);
}

TEST(Bogolyubov, ClosedFormAndErrors) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 2.0);
  const Box w = space.box();
  const Expr f = Expr::parse("x0");
  const Kernel k = Kernel::lp_exponent(Expr::parse("1 + x0"));
  const auto v = bogolyubov(k, f, space, w);
  EXPECT_TRUE(v.exact);
  EXPECT_NEAR(v.value, std::exp(2.0 * simpson(Expr::parse("x0 + x0^2"), 0.0, 1.0)), 1e-9);

  BogolyubovOptions mc;
  mc.method = Method::MonteCarlo;
  mc.samples = 100000;
  const auto m = bogolyubov(k, f, space, w, mc);
  EXPECT_LE(std::abs(m.value - v.value), 4.0 * m.std_error);

  BogolyubovOptions bad;
  bad.growth.delta = 1.0;
  EXPECT_EQ(code_of([&] { bogolyubov(k, f, space, w, bad); }), ErrorCode::GrowthViolation);
  BogolyubovOptions closed;
  closed.method = Method::ClosedForm;
  EXPECT_EQ(code_of([&] {
              bogolyubov(Kernel::custom("c", [](std::span<const PhasePoint>) { return 1.0; }), f, space, w, closed);
            }),
            ErrorCode::InvalidArgument);
}

TEST(Bogolyubov, ExpOfCumulantIsPositive) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const Kernel u = Kernel::singleton(Expr::parse("1 + x0")) + Kernel::level_weight({0.0, 0.0, -0.7});
  const auto r = bogolyubov_positivity_check(u, Expr::parse("0.3*x0"), space, space.box());
  EXPECT_TRUE(r.positive);
  EXPECT_LE(r.relative_deviation, 1e-10);
  EXPECT_EQ(code_of([&] { bogolyubov_positivity_check(Kernel::constant_level(1.0), Expr::parse("0"), space,
                                                      space.box()); }),
            ErrorCode::NotInIdeal);
}
