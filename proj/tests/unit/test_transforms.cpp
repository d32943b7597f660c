#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "starcalc/error.hpp"
#include "starcalc/transforms.hpp"

using namespace starcalc;

class ConvolutionSizes : public ::testing::TestWithParam<unsigned> {};

TEST_P(ConvolutionSizes, EnginesMatchBruteForce) {
  const unsigned n = GetParam();
  auto g = oracle::ground(11, n);
  Philox4x32 rng(11, n);
  for (int trial = 0; trial < 5; ++trial) {
    const SetFunction a = oracle::random_function(rng, g);
    const SetFunction b = oracle::random_function(rng, g);
    const auto ref = oracle::conv(oracle::copy(a), oracle::copy(b), n);
    EXPECT_LE(oracle::max_diff(conv_naive(a, b).values(), ref), 1e-12);
    EXPECT_LE(oracle::max_diff(conv_fast(a, b).values(), ref), 1e-12);
    std::vector<double> ranked(ref.size());
    raw::conv_ranked(a.values(), b.values(), ranked, n);
    EXPECT_LE(oracle::max_diff(ranked, ref), 1e-12);

    const auto sref = oracle::star(oracle::copy(a), oracle::copy(b), n);
    EXPECT_LE(oracle::max_diff(star_naive(a, b).values(), sref), 1e-12);
    EXPECT_LE(oracle::max_diff(star_fast(a, b).values(), sref), 1e-11);
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, ConvolutionSizes, ::testing::Values(0u, 1u, 2u, 3u, 5u, 7u, 8u, 9u));

TEST(Transforms, ZetaAndMobiusMatchBruteForceAndInvert) {
  for (unsigned n : {0u, 1u, 4u, 8u}) {
    auto g = oracle::ground(12, n);
    Philox4x32 rng(12, n);
    const SetFunction a = oracle::random_function(rng, g);
    EXPECT_LE(oracle::max_diff(zeta(a).values(), oracle::zeta(oracle::copy(a), n)), 1e-12);
    EXPECT_LE(oracle::max_diff(mobius(a).values(), oracle::mobius(oracle::copy(a), n)), 1e-12);
    EXPECT_LE(max_abs_diff(mobius(zeta(a)), a), 1e-12);
    EXPECT_LE(max_abs_diff(zeta(mobius(a)), a), 1e-12);
  }
}

TEST(Transforms, IntegerInputsAreExactAndBitwiseReproducible) {
  auto g = oracle::ground(13, 10);
  Philox4x32 rng(13, 0);
  const SetFunction a = gen::integer_set_function(rng, g, 3);
  const SetFunction b = gen::integer_set_function(rng, g, 3);
  const auto ref = oracle::conv(oracle::copy(a), oracle::copy(b), 10);
  const SetFunction fast = conv_fast(a, b);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(fast.values()[i], ref[i]);
  const SetFunction again = conv_fast(a, b);
  EXPECT_TRUE(std::equal(fast.values().begin(), fast.values().end(), again.values().begin()));
}

TEST(Transforms, CrossoverIsTunable) {
  const unsigned saved = conv_crossover();
  auto g = oracle::ground(14, 6);
  Philox4x32 rng(14, 0);
  const SetFunction a = oracle::random_function(rng, g);
  const SetFunction b = oracle::random_function(rng, g);
  set_conv_crossover(0);
  const SetFunction ranked = conv_fast(a, b);
  set_conv_crossover(30);
  const SetFunction naive = conv_fast(a, b);
  set_conv_crossover(saved);
  EXPECT_EQ(conv_crossover(), saved);
  EXPECT_LE(max_abs_diff(ranked, naive), 1e-12);
}

TEST(Transforms, AlgebraLaws) {
  const unsigned n = 7;
  auto g = oracle::ground(15, n);
  Philox4x32 rng(15, 0);
  const SetFunction a = oracle::random_function(rng, g);
  const SetFunction b = oracle::random_function(rng, g);
  const SetFunction c = oracle::random_function(rng, g);
  const SetFunction one = SetFunction::unit(g);
  EXPECT_LE(max_abs_diff(conv_fast(a, b), conv_fast(b, a)), 1e-12);
  EXPECT_LE(max_abs_diff(conv_fast(conv_fast(a, b), c), conv_fast(a, conv_fast(b, c))), 1e-11);
  EXPECT_LE(max_abs_diff(conv_fast(a, b + c), conv_fast(a, b) + conv_fast(a, c)), 1e-12);
  EXPECT_LE(max_abs_diff(conv_fast(a, one), a), 0.0);
  EXPECT_LE(max_abs_diff(star_fast(a, b), star_fast(b, a)), 1e-12);
  EXPECT_LE(max_abs_diff(star_fast(star_fast(a, b), c), star_fast(a, star_fast(b, c))), 1e-10);
  EXPECT_LE(max_abs_diff(star_fast(a, one), a), 1e-12);
}

TEST(Transforms, ZetaTurnsStarIntoPointwiseProduct) {
  const unsigned n = 6;
  auto g = oracle::ground(16, n);
  Philox4x32 rng(16, 0);
  const SetFunction a = oracle::random_function(rng, g);
  const SetFunction b = oracle::random_function(rng, g);
  const SetFunction lhs = zeta(star_fast(a, b));
  const SetFunction za = zeta(a), zb = zeta(b);
  for (Mask m = 0; m < 64; ++m) EXPECT_NEAR(lhs[m], za[m] * zb[m], 1e-11);
}

TEST(Transforms, GroundMismatchThrows) {
  const SetFunction a = SetFunction::zeros(oracle::ground(1, 3));
  const SetFunction b = SetFunction::zeros(oracle::ground(2, 3));
  EXPECT_THROW(conv_fast(a, b), Error);
  EXPECT_THROW(star_fast(a, b), Error);
}

TEST(TwoType, StarMatchesCoverEnumeration) {
  auto plus = oracle::ground(17, 3);
  auto minus = std::make_shared<const GroundConfiguration>(std::vector<PhasePoint>{{5.1}, {5.2}, {5.3}});
  Philox4x32 rng(17, 0);
  const std::size_t size = 64;
  std::vector<double> v1(size), v2(size);
  for (auto& v : v1) v = gen::uniform(rng, -1, 1);
  for (auto& v : v2) v = gen::uniform(rng, -1, 1);
  const TwoTypeSetFunction g1(plus, minus, v1), g2(plus, minus, v2);
  const auto fast = two_type_star(g1, g2);
  const auto naive = two_type_star_naive(g1, g2);
  // Independent reference: all pairs of index pairs whose unions match.
  for (Mask sp = 0; sp < 8; ++sp) {
    for (Mask sm = 0; sm < 8; ++sm) {
      double acc = 0.0;
      for (Mask p1 = 0; p1 < 8; ++p1)
        for (Mask p2 = 0; p2 < 8; ++p2)
          for (Mask m1 = 0; m1 < 8; ++m1)
            for (Mask m2 = 0; m2 < 8; ++m2)
              if ((p1 | p2) == sp && (m1 | m2) == sm) acc += g1.at(p1, m1) * g2.at(p2, m2);
      EXPECT_NEAR(naive.at(sp, sm), acc, 1e-12);
      EXPECT_NEAR(fast.at(sp, sm), acc, 1e-11);
    }
  }
}

TEST(TwoType, FactorizedStarFactorizes) {
  auto plus = oracle::ground(18, 3);
  auto minus = std::make_shared<const GroundConfiguration>(std::vector<PhasePoint>{{5.1}, {5.2}});
  Philox4x32 rng(18, 0);
  const SetFunction a1 = oracle::random_function(rng, plus), a2 = oracle::random_function(rng, plus);
  const SetFunction b1 = oracle::random_function(rng, minus), b2 = oracle::random_function(rng, minus);
  const auto lhs = two_type_star(TwoTypeSetFunction::factorized(a1, b1), TwoTypeSetFunction::factorized(a2, b2));
  const SetFunction sa = star_fast(a1, a2), sb = star_fast(b1, b2);
  for (Mask p = 0; p < 8; ++p)
    for (Mask m = 0; m < 4; ++m) EXPECT_NEAR(lhs.at(p, m), sa[p] * sb[m], 1e-12);
}

TEST(TwoType, LiftRejectsSharedPoints) {
  auto g = oracle::ground(19, 3);
  const SetFunction f = SetFunction::zeros(g);
  auto plus = std::make_shared<const GroundConfiguration>(std::vector<PhasePoint>{g->point(0)});
  auto minus = std::make_shared<const GroundConfiguration>(std::vector<PhasePoint>{g->point(0), g->point(1)});
  EXPECT_THROW(lift_two_type(f, plus, minus), Error);
}
