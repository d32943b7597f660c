#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "starcalc/calculus.hpp"
#include "starcalc/error.hpp"
#include "starcalc/evolution.hpp"
#include "starcalc/transforms.hpp"

using namespace starcalc;

namespace {

// T_m(x) = sum_j S(m, j) x^j, Stirling numbers of the second kind.
double touchard(unsigned m, double x) {
  std::vector<std::vector<double>> s(m + 1, std::vector<double>(m + 1, 0.0));
  s[0][0] = 1.0;
  for (unsigned i = 1; i <= m; ++i)
    for (unsigned j = 1; j <= i; ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  double acc = 0.0;
  for (unsigned j = 0; j <= m; ++j) acc += s[m][j] * std::pow(x, j);
  return acc;
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

TEST(MultOperator, MatchesBruteForceAndFastPaths) {
  const unsigned n = 7;
  auto g = oracle::ground(41, n);
  Philox4x32 rng(41, 0);
  const SetFunction k = oracle::random_function(rng, g);
  const SetFunction a = oracle::random_function(rng, g);
  EXPECT_LE(oracle::max_diff(mult_operator(a, k).values(), oracle::conv(oracle::copy(a), oracle::copy(k), n)), 1e-12);
  EXPECT_LE(oracle::max_diff(mult_operator(SetFunction::constant(g, 1.0), k).values(), oracle::zeta(oracle::copy(k), n)),
            1e-12);
  std::vector<double> alt(std::size_t{1} << n);
  for (Mask m = 0; m < alt.size(); ++m) alt[m] = oracle::bits(m) % 2 ? -1.0 : 1.0;
  EXPECT_LE(oracle::max_diff(mult_operator(SetFunction(g, alt), k).values(), oracle::mobius(oracle::copy(k), n)), 1e-12);
}

TEST(Evolve, ConstantMultiplierGivesTouchardPolynomials) {
  const unsigned n = 6;
  auto g = oracle::ground(42, n);
  const SetFunction one = SetFunction::unit(g);
  for (double sign : {1.0, -1.0}) {
    for (double t : {0.0, 0.3, 1.0, 2.0}) {
      const auto r = evolve(SetFunction::constant(g, sign), one, t);
      for (Mask m = 0; m < 64; ++m) {
        const double expect = std::exp(sign * t) * touchard(oracle::bits(m), sign * t);
        EXPECT_NEAR(r.solution[m], expect, 1e-12 * std::max(1.0, std::abs(expect))) << sign << " " << t << " " << m;
      }
    }
  }
}

TEST(Evolve, SplitsOffTheEmptyValue) {
  const unsigned n = 6;
  auto g = oracle::ground(43, n);
  Philox4x32 rng(43, 0);
  const SetFunction a = oracle::random_function(rng, g);
  const SetFunction k0 = oracle::random_function(rng, g);
  const double t = 0.7;
  SetFunction abar = a;
  abar -= a.empty_value() * SetFunction::unit(g);
  const SetFunction expect = std::exp(t * a.empty_value()) * conv_fast(exp_star(t * abar), k0);
  const auto r = evolve(a, k0, t);
  EXPECT_LE(max_rel_diff(r.solution, expect), 1e-12);
  EXPECT_GT(r.truncation_terms, 0u);
}

TEST(Evolve, NilpotentMultiplierIsExactAndFinite) {
  const unsigned n = 5;
  auto g = oracle::ground(44, n);
  Philox4x32 rng(44, 0);
  const SetFunction a = gen::set_function(rng, g, -1.0, 1.0, 0.0);
  const SetFunction k0 = oracle::random_function(rng, g);
  const auto r = evolve(a, k0, 1.3);
  EXPECT_LE(r.truncation_terms, n + 1);
  EXPECT_EQ(r.tail_bound, 0.0);
  EXPECT_LE(max_abs_diff(r.solution, conv_fast(exp_star(1.3 * a), k0)), 1e-12);
}

TEST(Evolve, SemigroupAndOde) {
  const unsigned n = 5;
  auto g = oracle::ground(45, n);
  Philox4x32 rng(45, 0);
  const SetFunction a = oracle::random_function(rng, g);
  const SetFunction k0 = oracle::random_function(rng, g);
  const auto st = evolve(a, k0, 0.9);
  const auto s_then_t = evolve(a, evolve(a, k0, 0.4).solution, 0.5);
  EXPECT_LE(max_rel_diff(st.solution, s_then_t.solution), 1e-12);
  EXPECT_LE(ode_residual(a, k0, 0.5, 1e-4), 1e-6);
  EXPECT_EQ(max_abs_diff(evolve(a, k0, 0.0).solution, k0), 0.0);
}

TEST(Evolve, RejectsNegativeTimeAndMismatchedGrounds) {
  auto g = oracle::ground(46, 3);
  const SetFunction a = SetFunction::constant(g, 1.0);
  EXPECT_EQ(code_of([&] { evolve(a, a, -1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { evolve(a, SetFunction::unit(oracle::ground(47, 3)), 1.0); }), ErrorCode::GroundMismatch);
}

TEST(Resolvent, SolvesTheShiftedEquation) {
  const unsigned n = 6;
  auto g = oracle::ground(48, n);
  Philox4x32 rng(48, 0);
  const SetFunction a = oracle::random_function(rng, g, -0.5, 0.5);
  const SetFunction k = oracle::random_function(rng, g);
  const double z = 3.0 * a.sup_norm();
  const auto r = resolvent(a, k, z);
  const auto ar = oracle::conv(oracle::copy(a), oracle::copy(r.solution), n);
  std::vector<double> lhs(ar.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = z * r.solution.values()[i] - ar[i];
  EXPECT_LE(oracle::max_diff(lhs, k.values()), 1e-12);
  EXPECT_LE(r.residual, 1e-12);
}

TEST(Resolvent, NilpotentAllowsAnyNonzeroShift) {
  const unsigned n = 5;
  auto g = oracle::ground(49, n);
  Philox4x32 rng(49, 0);
  const SetFunction a = gen::set_function(rng, g, -2.0, 2.0, 0.0);
  const SetFunction k = oracle::random_function(rng, g);
  const auto r = resolvent(a, k, 0.05);
  EXPECT_LE(r.terms, n + 1);
  EXPECT_LE(r.residual, 1e-9 * std::max(1.0, r.solution.sup_norm()));
}

TEST(Resolvent, ErrorsBelowBoundAndAtZero) {
  auto g = oracle::ground(50, 3);
  const SetFunction a = SetFunction::constant(g, 1.0);
  EXPECT_EQ(code_of([&] { resolvent(a, a, 1.0); }), ErrorCode::DivergentSeries);
  EXPECT_EQ(code_of([&] { resolvent(a, a, 0.0); }), ErrorCode::InvalidArgument);
}

TEST(Evolve, SingletonMultiplierIsPointwiseExponent) {
  const Expr sigma = Expr::parse("x0 - 0.5");
  const Kernel k0 = Kernel::lp_exponent(Expr::parse("1 + x0"));
  auto g = oracle::ground(51, 5);
  const double t = 0.8;
  const SetFunction lhs = evolve_singleton(sigma, k0, t, g);
  const SetFunction a = tabulate(Kernel::singleton(sigma), g);
  const SetFunction rhs = evolve(a, tabulate(k0, g), t).solution;
  EXPECT_LE(max_rel_diff(lhs, rhs), 1e-12);
}

TEST(Evolve, NormGrowthExitsWhenWeightOutgrowsBound) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const auto rep = norm_growth_time(Expr::parse("1"), 1.0, 2.0, 1.0, space, 2.0, 0.25);
  ASSERT_TRUE(rep.exit_time.has_value());
  EXPECT_GT(*rep.exit_time, 0.75);
  EXPECT_LE(*rep.exit_time, 1.25);
  for (std::size_t i = 1; i < rep.norms.size(); ++i) EXPECT_GE(rep.norms[i], rep.norms[i - 1]);
}

TEST(Cumulants, DerivationsPreserveTheLogarithm) {
  const unsigned n = 6;
  auto g = oracle::ground(52, n);
  Philox4x32 rng(52, 0);
  const SetFunction u0 = gen::set_function(rng, g, -0.5, 0.5, 0.0);
  const auto rep = cumulant_evolution_check(OperatorHandle::number(), u0, 0.5, 50);
  EXPECT_LE(rep.deviation, 1e-9);
  const auto twice = OperatorHandle::custom("number twice", [](const SetFunction& k) { return number_op(number_op(k)); });
  const auto bad = cumulant_evolution_check(twice, u0, 0.5, 50);
  EXPECT_GT(bad.deviation, 1e-4);
}

TEST(DualSum, NumberHoldsSquareFails) {
  const Kernel g = Kernel::lp_exponent(Expr::parse("2 + x0"));
  std::vector<ConfigurationPair> pairs{{{{0.1}, {0.2}}, {{0.3}}}, {{}, {{0.4}, {0.5}}}, {{{0.6}}, {{0.7}, {0.8}}}};
  EXPECT_LE(dual_sum_check(DualOperator::number(), g, pairs).max_residual, 1e-12);
  EXPECT_GT(dual_sum_check(DualOperator::square(), g, pairs).max_residual, 1.0);
  std::vector<ConfigurationPair> overlap{{{{0.1}}, {{0.1}}}};
  EXPECT_EQ(code_of([&] { dual_sum_check(DualOperator::number(), g, overlap); }), ErrorCode::OverlappingConfigurations);
}

TEST(Predual, UnitIsIdentityAndConstantGivesMayerFactor) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.5);
  const Kernel g = Kernel::lp_exponent(Expr::parse("0.5 + x0"));
  const std::vector<PhasePoint> eta{{0.2}, {0.9}};
  EXPECT_EQ(predual_apply(Kernel::unit_star(), g, eta, space, space.box()).value, g(eta));
  // int e(f)(eta u xi) dlambda(xi) = e(f)(eta) exp(z int f).
  const auto r = predual_apply(Kernel::constant_level(1.0), g, eta, space, space.box());
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.value, g(eta) * std::exp(1.5 * 1.0), 1e-12);
}
