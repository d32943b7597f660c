#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "starcalc/error.hpp"
#include "starcalc/kernel.hpp"
#include "starcalc/norms.hpp"

using namespace starcalc;

namespace {

double lfact(double n) { return std::lgamma(n + 1.0); }

// Sup over levels <= n of |k(S)| / (C^|S| (|S|!)^delta), by scanning every mask.
double sup_ratio(const oracle::Values& k, double c, double delta, unsigned n, unsigned level) {
  double m = 0.0;
  for (std::uint32_t s = 0; s < k.size(); ++s) {
    if (oracle::bits(s) != static_cast<int>(level)) continue;
    m = std::max(m, std::abs(k[s]) / std::exp(level * std::log(c) + delta * lfact(level)));
  }
  (void)n;
  return m;
}

// Sum over compositions m = n_1 + ... + n_p of (m! / prod n_i!)^{1 - delta}.
double compositions(unsigned m, unsigned p, double delta) {
  double total = 0.0;
  std::function<void(unsigned, unsigned, double)> rec = [&](unsigned left, unsigned parts, double lden) {
    if (parts == 1) {
      total += std::exp((1.0 - delta) * (lfact(m) - lden - lfact(left)));
      return;
    }
    for (unsigned i = 0; i <= left; ++i) rec(left - i, parts - 1, lden + lfact(i));
  };
  rec(m, p, 0.0);
  return total;
}

}  // namespace

TEST(NormParams, Validation) {
  EXPECT_THROW(NormParams(0.0, 0.0), Error);
  EXPECT_THROW(NormParams(1.0, -0.1), Error);
  EXPECT_NO_THROW(NormParams(0.5, 2.0));
}

TEST(KNorm, SetFunctionScanMatchesBruteForce) {
  auto g = oracle::ground(61, 6);
  Philox4x32 rng(61, 0);
  const SetFunction k = oracle::random_function(rng, g, -3.0, 3.0);
  const NormParams p(1.5, 0.5);
  double ref = 0.0;
  for (unsigned l = 0; l <= 6; ++l) ref = std::max(ref, sup_ratio(oracle::copy(k), 1.5, 0.5, 6, l));
  EXPECT_NEAR(k_norm_estimate(k, p), ref, 1e-14);
  double ref3 = 0.0;
  for (unsigned l = 0; l <= 3; ++l) ref3 = std::max(ref3, sup_ratio(oracle::copy(k), 1.5, 0.5, 6, l));
  EXPECT_NEAR(k_norm_estimate(k, p, 3), ref3, 1e-14);
}

TEST(KNorm, ProbesNeverDecreaseWithMoreSamples) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  const Kernel k = Kernel::lp_exponent(Expr::parse("0.5 + 2*x0"));
  ProbeOptions few{8, 8, 3}, many{8, 64, 3};
  const double a = k_norm_estimate(k, NormParams(2.0, 0.0), space, few);
  const double b = k_norm_estimate(k, NormParams(2.0, 0.0), space, many);
  EXPECT_LE(a, b);
  EXPECT_LE(b, std::pow(1.25, 8) + 1e-12);  // each factor (0.5 + 2x) / 2 is at most 1.25
  EXPECT_GE(b, 1.0);
  EXPECT_NEAR(k_norm_estimate(Kernel::extremal_witness(2.0, 0.5), NormParams(2.0, 0.5), space, many), 1.0, 1e-12);
}

TEST(LNorm, ExponentIsExact) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 1.5);
  const Kernel g = Kernel::lp_exponent(Expr::parse("x0 - 0.25"));
  // int |e(f)| C^n dlambda = exp(z C int |f|), int_0^1 |x - 1/4| = 1/32 + 9/32.
  const auto r = l_norm(g, NormParams(2.0, 0.0), space, space.box());
  EXPECT_TRUE(r.estimate.exact);
  EXPECT_NEAR(r.estimate.value, std::exp(1.5 * 2.0 * 10.0 / 32.0), 1e-9);
  EXPECT_EQ(r.finite, std::optional<bool>(true));
}

TEST(LNorm, DivergenceIsAGrowthViolation) {
  const PhaseSpace space(Box({{0.0, 1.0}}), 2.0);
  const Kernel g = Kernel::constant_level(1.0);
  EXPECT_EQ(l_norm_finite(g, NormParams(1.0, 1.0), space, space.box()), std::optional<bool>(false));
  try {
    l_norm(g, NormParams(1.0, 1.0), space, space.box());
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GrowthViolation);
  }
  EXPECT_EQ(l_norm_finite(g, NormParams(1.0, 0.5), space, space.box()), std::optional<bool>(true));
}

TEST(Young, RatiosMatchTabulatedConvolution) {
  // Extremal witnesses tabulated on n points, convolved by brute force.
  const unsigned n = 9;
  auto g = oracle::ground(62, n);
  struct Case {
    YoungVariant v;
    YoungParams p;
    double c_out, d_out;
  };
  const std::vector<Case> cases{
      {YoungVariant::Y1, {1.0, 0.5, 2.0, 0.0, 2.0, 9}, 3.0, 0.5},
      {YoungVariant::Y2, {1.0, 1.0, 3.0, 1.5, 2.0, 9}, 3.0, 1.5},
      {YoungVariant::Y3, {2.0, 1.0, 2.0, 1.0, 5.0, 9}, 5.0, 1.0},
  };
  for (const auto& c : cases) {
    const auto rep = young_check(c.v, c.p);
    const auto k1 = oracle::copy(tabulate(Kernel::extremal_witness(c.p.c1, c.p.delta1), g));
    const auto k2 = oracle::copy(tabulate(Kernel::extremal_witness(c.p.c2, c.p.delta2), g));
    const auto conv = oracle::conv(k1, k2, n);
    for (unsigned l = 0; l <= n; ++l) {
      const double ref = sup_ratio(conv, c.c_out, c.d_out, n, l);
      EXPECT_NEAR(rep.lhs_per_level[l], ref, 1e-12 * std::max(1.0, ref)) << to_string(c.v) << " level " << l;
    }
    EXPECT_TRUE(rep.satisfied) << to_string(c.v);
  }
}

TEST(Young, BoundedSecondInputAndBoundedPair) {
  const unsigned n = 8;
  auto g = oracle::ground(63, n);
  YoungParams p4{2.0, 1.0, 1.0, 0.0, 2.0, 8};
  const auto rep4 = young_check(YoungVariant::Y4, p4);
  const auto k1 = oracle::copy(tabulate(Kernel::extremal_witness(2.0, 1.0), g));
  const auto one = oracle::copy(tabulate(Kernel::constant_level(1.0), g));
  const auto c4 = oracle::conv(k1, one, n);
  for (unsigned l = 0; l <= n; ++l) EXPECT_NEAR(rep4.lhs_per_level[l], sup_ratio(c4, 2.0, 1.0, n, l), 1e-12);
  EXPECT_TRUE(rep4.satisfied);
  EXPECT_DOUBLE_EQ(rep4.rhs_bound, 2.0);

  YoungParams p5;
  p5.c_target = 2.0;
  p5.n_max = 8;
  const auto rep5 = young_check(YoungVariant::Y5, p5);
  const auto c5 = oracle::conv(one, one, n);
  for (unsigned l = 0; l <= n; ++l) EXPECT_NEAR(rep5.lhs_per_level[l], sup_ratio(c5, 2.0, 0.0, n, l), 1e-12);
  EXPECT_TRUE(rep5.satisfied);
}

TEST(Young, HypothesesAreEnforced) {
  auto code = [](YoungVariant v, YoungParams p) {
    try {
      young_check(v, p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code(YoungVariant::Y2, {1.0, 0.5, 2.0, 0.5, 2.0, 5}), ErrorCode::HypothesisViolated);
  EXPECT_EQ(code(YoungVariant::Y2, {2.0, 1.0, 2.0, 1.0, 2.0, 5}), ErrorCode::HypothesisViolated);
  EXPECT_EQ(code(YoungVariant::Y3, {2.0, 1.0, 2.0, 1.0, 1.5, 5}), ErrorCode::HypothesisViolated);
  EXPECT_EQ(code(YoungVariant::Y4, {1.0, 1.0, 1.0, 0.0, 2.0, 5}), ErrorCode::HypothesisViolated);
  EXPECT_EQ(code(YoungVariant::Y5, {1.0, 0.0, 1.0, 0.0, 1.5, 5}), ErrorCode::HypothesisViolated);
  EXPECT_EQ(young_variant_from_string("Y3"), YoungVariant::Y3);
  EXPECT_EQ(young_variant_from_string("5"), YoungVariant::Y5);
  EXPECT_THROW(young_variant_from_string("Y9"), Error);
}

TEST(Young, LogLevelConvolutionMatchesDirectSum) {
  for (std::size_t n : {0u, 3u, 12u, 40u}) {
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      s += std::exp(lfact(n) - lfact(k) - lfact(n - k) + k * std::log(1.5) + 0.5 * lfact(k) + (n - k) * std::log(2.0) +
                    1.0 * lfact(n - k));
    }
    EXPECT_NEAR(log_level_convolution(n, 1.5, 0.5, 2.0, 1.0), std::log(s), 1e-10 * (1.0 + n));
  }
}

TEST(Powers, CompositionSumMatchesEnumeration) {
  for (unsigned p : {2u, 3u, 4u}) {
    for (unsigned m : {0u, 1u, 5u, 9u}) {
      for (double d : {0.0, 0.5, 1.0, 2.0}) {
        EXPECT_NEAR(log_power_composition_sum(m, p, d), std::log(compositions(m, p, d)), 1e-10)
            << p << " " << m << " " << d;
      }
    }
  }
  // delta = 0 sums multinomials: p^m.
  EXPECT_NEAR(log_power_composition_sum(30, 3, 0.0), 30 * std::log(3.0), 1e-9);
}

TEST(Powers, PowerRatiosMatchTabulatedPowers) {
  const unsigned n = 8;
  auto g = oracle::ground(64, n);
  const auto k = oracle::copy(tabulate(Kernel::extremal_witness(1.0, 0.5), g));
  PowerParams pp;
  pp.c = 1.0;
  pp.delta = 0.5;
  pp.n_power = 3;
  pp.n_max = n;
  const auto rep = power_norm_check(pp);
  const auto k3 = oracle::power(k, 3, n);
  for (unsigned l = 0; l <= n; ++l) EXPECT_NEAR(rep.lhs_per_level[l], sup_ratio(k3, 3.0, 0.5, n, l), 1e-11);
  EXPECT_TRUE(rep.satisfied);

  PowerParams pf;
  pf.c = 1.0;
  pf.delta = 1.0;
  pf.n_power = 3;
  pf.c_prime = 2.0;
  pf.n_max = 40;
  EXPECT_TRUE(power_norm_check(pf).satisfied);
}

TEST(Powers, BoundedCaseFailsForCubes) {
  // k = 1 gives k^{*p}(S) = p^{|S|}; against C = 2 the ratio (p/2)^m is unbounded for p = 3.
  PowerParams pb;
  pb.bounded = true;
  pb.n_power = 3;
  pb.c_prime = 2.0;
  pb.n_max = 20;
  const auto rep = power_norm_check(pb);
  EXPECT_FALSE(rep.satisfied);
  EXPECT_NEAR(rep.max_ratio, std::pow(1.5, 20), 1e-6);
  pb.n_power = 2;
  EXPECT_TRUE(power_norm_check(pb).satisfied);
}
