#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "starcalc/error.hpp"
#include "starcalc/geometry.hpp"
#include "starcalc/phase_space.hpp"
#include "starcalc/rng.hpp"
#include "starcalc/set_function.hpp"

using namespace starcalc;

namespace {

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

TEST(Ground, RejectsDuplicates) {
  EXPECT_EQ(code_of([] { GroundConfiguration({{0.1}, {0.2}, {0.1}}); }), ErrorCode::DuplicatePoint);
}

TEST(Ground, RejectsMoreThanMaxPoints) {
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 25; ++i) pts.push_back({0.01 * i});
  EXPECT_EQ(code_of([&] { GroundConfiguration g(pts); }), ErrorCode::TooLarge);
  pts.pop_back();
  EXPECT_NO_THROW(GroundConfiguration g(pts));
}

TEST(Ground, SelectFollowsMaskBits) {
  GroundConfiguration g({{0.1}, {0.2}, {0.3}, {0.4}});
  const auto sel = g.select(0b1010);
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[0], PhasePoint{0.2});
  EXPECT_EQ(sel[1], PhasePoint{0.4});
  EXPECT_EQ(g.find({0.3}), 2);
  EXPECT_EQ(g.find({0.5}), -1);
  EXPECT_EQ(g.without(1).points(), (std::vector<PhasePoint>{{0.1}, {0.3}, {0.4}}));
}

TEST(Ground, MakeGroundChecksTheBox) {
  PhaseSpace space(Box({{0.0, 1.0}}), 1.0);
  EXPECT_NO_THROW(make_ground(space, {{0.5}}));
  EXPECT_THROW(make_ground(space, {{1.5}}), Error);
}

TEST(SetFunction, SizeMustMatchGround) {
  auto g = std::make_shared<const GroundConfiguration>(std::vector<PhasePoint>{{0.1}, {0.2}});
  EXPECT_THROW(SetFunction(g, std::vector<double>(3, 0.0)), Error);
  EXPECT_NO_THROW(SetFunction(g, std::vector<double>(4, 0.0)));
}

TEST(SetFunction, ArithmeticIsPointwise) {
  auto g = oracle::ground(1, 5);
  Philox4x32 rng(1, 1);
  const SetFunction a = oracle::random_function(rng, g);
  const SetFunction b = oracle::random_function(rng, g);
  const SetFunction c = 2.0 * a - b + SetFunction::unit(g);
  for (Mask m = 0; m < 32; ++m) EXPECT_DOUBLE_EQ(c[m], 2.0 * a[m] - b[m] + (m == 0 ? 1.0 : 0.0));
  EXPECT_DOUBLE_EQ((-a)[3], -a[3]);
}

TEST(SetFunction, GroundMismatchIsReported) {
  const SetFunction a = SetFunction::zeros(oracle::ground(1, 3));
  const SetFunction b = SetFunction::zeros(oracle::ground(2, 3));
  EXPECT_EQ(code_of([&] { a.require_same_ground(b); }), ErrorCode::GroundMismatch);
  EXPECT_EQ(code_of([&] { auto c = a + b; }), ErrorCode::GroundMismatch);
}

TEST(SetFunction, NormsAndDiffs) {
  auto g = oracle::ground(3, 2);
  SetFunction a(g, {1.0, -4.0, 2.0, 0.5});
  SetFunction b(g, {1.0, -2.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(a.sup_norm(), 4.0);
  EXPECT_DOUBLE_EQ(max_abs_diff(a, b), 2.0);
  EXPECT_DOUBLE_EQ(max_rel_diff(a, b), 1.0);
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  Philox4x32 a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    seen.insert(x);
    EXPECT_FALSE(x == c() && x == d());
  }
  EXPECT_GT(seen.size(), 95u);
}

TEST(Philox, UniformMoments) {
  Philox4x32 rng(7, 3);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(Philox, MixSeedSeparatesSalts) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  EXPECT_EQ(mix_seed(5, 9), mix_seed(5, 9));
}

TEST(Geometry, BoxOperations) {
  Box b({{0.0, 2.0}, {1.0, 2.0}});
  EXPECT_DOUBLE_EQ(b.volume(), 2.0);
  EXPECT_TRUE(b.contains(PhasePoint{1.0, 1.5}));
  EXPECT_FALSE(b.contains(PhasePoint{1.0, 2.5}));
  const auto slabs = b.slabs(4);
  ASSERT_EQ(slabs.size(), 4u);
  EXPECT_DOUBLE_EQ(slabs[1].axis(0).lo, 0.5);
  EXPECT_DOUBLE_EQ(slabs[1].axis(0).hi, 1.0);
  EXPECT_TRUE(b.contains(slabs[3]));
  const Box i = b.intersect(Box({{1.5, 3.0}, {0.0, 1.5}}));
  EXPECT_DOUBLE_EQ(i.volume(), 0.25);
}
