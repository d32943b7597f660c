#include <algorithm>
#include <cmath>

#include "starcalc/calculus.hpp"
#include "starcalc/evolution.hpp"
#include "starcalc/kernel.hpp"
#include "starcalc/lebesgue_poisson.hpp"
#include "starcalc/norms.hpp"
#include "starcalc/posdef.hpp"
#include "starcalc/random_inputs.hpp"
#include "starcalc/transforms.hpp"
#include "starcalc/verify.hpp"
#include "verify_support.hpp"

namespace starcalc {

using detail::fmt;
using detail::guarded;

namespace {

std::vector<Kernel> kernel_zoo(Philox4x32& rng) {
  const Expr f = gen::polynomial(rng, 2, -1.0, 1.0);
  const Expr g = gen::polynomial(rng, 2, -1.0, 1.0);
  const Kernel s = Kernel::singleton(g);
  return {Kernel::lp_exponent(f),
          Kernel::constant_level(-0.7),
          Kernel::unit_star(),
          s,
          Kernel::level_weight({1.0, -2.0, 0.5, 3.0, 0.25}),
          Kernel::extremal_witness(1.5, 0.5),
          Kernel::lp_exponent(f) + s,
          Kernel::lp_exponent(f) * Kernel::lp_exponent(g),
          2.5 * s,
          Kernel::convolution(Kernel::lp_exponent(f), Kernel::level_weight({0.0, 1.0, 2.0})),
          Kernel::exp_star(s + Kernel::level_weight({0.0, 0.0, 0.3})),
          Kernel::custom("first_coordinate", [](std::span<const PhasePoint> pts) {
            return pts.empty() ? 0.0 : pts.front()[0] * static_cast<double>(pts.size());
          })};
}

CheckResult core_permutation(const VerifyOptions& o) {
  return guarded("inv.core.permutation", "kernel values do not depend on point order", [&] {
    Philox4x32 rng(o.seed, 101);
    std::size_t bad = 0, evaluations = 0;
    for (int t = 0; t < 5; ++t) {
      const auto zoo = kernel_zoo(rng);
      std::vector<PhasePoint> pts = gen::ground(rng, 4, 2)->points();
      std::sort(pts.begin(), pts.end(), [](const PhasePoint& a, const PhasePoint& b) { return a.coords < b.coords; });
      for (const auto& k : zoo) {
        const double ref = k(pts);
        auto perm = pts;
        do {
          ++evaluations;
          if (k(perm) != ref) ++bad;
        } while (std::next_permutation(perm.begin(), perm.end(),
                                       [](const PhasePoint& a, const PhasePoint& b) { return a.coords < b.coords; }));
      }
    }
    return std::pair{bad == 0, fmt("%zu evaluations over %zu families, %zu mismatches", evaluations,
                                   kernel_zoo(rng).size(), bad)};
  });
}

CheckResult core_tabulate(const VerifyOptions& o) {
  return guarded("inv.core.tabulate", "tabulation of the unit and of sums", [&] {
    Philox4x32 rng(o.seed, 102);
    bool unit = true, sums = true;
    for (int t = 0; t < 10; ++t) {
      const GroundPtr g = gen::ground(rng, gen::index(rng, 9), 2);
      const SetFunction u = tabulate(Kernel::unit_star(), g);
      unit = unit && u.values()[0] == 1.0 &&
             std::all_of(u.values().begin() + 1, u.values().end(), [](double v) { return v == 0.0; });
      const auto zoo = kernel_zoo(rng);
      const Kernel& a = zoo[gen::index(rng, zoo.size())];
      const Kernel& b = zoo[gen::index(rng, zoo.size())];
      sums = sums && max_abs_diff(tabulate(Kernel::sum({a, b}), g), tabulate(a, g) + tabulate(b, g)) == 0.0;
    }
    return std::pair{unit && sums, fmt("unit tabulation %s; sum combinator %s", unit ? "exact" : "wrong", sums ? "exact" : "wrong")};
  });
}

CheckResult transforms_algebra(const VerifyOptions& o) {
  return guarded("inv.transforms.algebra", "convolution is commutative, associative, and I0 is an ideal", [&] {
    Philox4x32 rng(o.seed, 103);
    double comm = 0.0, assoc = 0.0;
    bool ideal = true;
    for (int t = 0; t < 50; ++t) {
      const GroundPtr g = gen::ground(rng, gen::index(rng, std::min<std::size_t>(o.n, 10) + 1));
      const SetFunction a = gen::set_function(rng, g, -1.0, 1.0);
      const SetFunction b = gen::set_function(rng, g, -1.0, 1.0);
      const SetFunction c = gen::set_function(rng, g, -1.0, 1.0);
      comm = std::max(comm, max_rel_diff(conv_fast(a, b), conv_fast(b, a)));
      assoc = std::max(assoc, max_rel_diff(conv_fast(conv_fast(a, b), c), conv_fast(a, conv_fast(b, c))));
      const SetFunction u1 = gen::set_function(rng, g, -1.0, 1.0, 0.0);
      ideal = ideal && conv_fast(u1, b).empty_value() == 0.0 && conv_fast(a, b).empty_value() == a.empty_value() * b.empty_value();
    }
    const bool ok = comm <= 1e-10 && assoc <= 1e-10 && ideal;
    return std::pair{ok, fmt("commutativity %.3g, associativity %.3g (tol 1e-10); ideal property %s", comm, assoc,
                             ideal ? "exact" : "violated")};
  });
}

CheckResult transforms_cover(const VerifyOptions& o) {
  return guarded("inv.transforms.cover", "cover product dominates convolution; lifting intertwines the products", [&] {
    Philox4x32 rng(o.seed, 104);
    bool dominates = true;
    double lift = 0.0;
    for (int t = 0; t < 30; ++t) {
      const GroundPtr g = gen::ground(rng, gen::index(rng, 9));
      const SetFunction a = gen::set_function(rng, g, 0.0, 1.0);
      const SetFunction b = gen::set_function(rng, g, 0.0, 1.0);
      const SetFunction cover = star_fast(a, b);
      const SetFunction sub = conv_fast(a, b);
      for (std::size_t m = 0; m < a.size(); ++m) dominates = dominates && cover.values()[m] >= sub.values()[m] - 1e-12;
      const std::size_t np = gen::index(rng, g->size() + 1);
      std::vector<PhasePoint> plus(g->points().begin(), g->points().begin() + static_cast<std::ptrdiff_t>(np));
      std::vector<PhasePoint> minus(g->points().begin() + static_cast<std::ptrdiff_t>(np), g->points().end());
      const auto gp = std::make_shared<const GroundConfiguration>(plus);
      const auto gm = std::make_shared<const GroundConfiguration>(minus);
      const GroundPtr whole = std::make_shared<const GroundConfiguration>(g->points());
      const SetFunction a2(whole, std::vector<double>(a.values().begin(), a.values().end()));
      const SetFunction b2(whole, std::vector<double>(b.values().begin(), b.values().end()));
      const TwoTypeSetFunction lhs = two_type_star(lift_two_type(a2, gp, gm), lift_two_type(b2, gp, gm));
      const TwoTypeSetFunction rhs = lift_two_type(star_fast(a2, b2), gp, gm);
      for (std::size_t m = 0; m < lhs.values().size(); ++m) {
        lift = std::max(lift, std::abs(lhs.values()[m] - rhs.values()[m]) / std::max(1.0, std::abs(rhs.values()[m])));
      }
    }
    const bool ok = dominates && lift <= 1e-12;
    return std::pair{ok, fmt("domination %s; lifted products differ by %.3g", dominates ? "holds" : "fails", lift)};
  });
}

CheckResult calculus_identities(const VerifyOptions& o) {
  return guarded("inv.calculus.identities", "exp*/ln* bijection, inverse rules, series and chain rule for ln*", [&] {
    Philox4x32 rng(o.seed, 105);
    double bij = 0.0, ln_inv = 0.0, inv_mul = 0.0, dlog = 0.0;
    bool series_exact = true;
    for (int t = 0; t < 40; ++t) {
      const std::size_t n = gen::index(rng, 13);
      const GroundPtr g = gen::ground(rng, n);
      const SetFunction u = gen::set_function(rng, g, -0.5, 0.5, 0.0);
      const SetFunction k1 = gen::set_function(rng, g, -0.5, 0.5, 1.0);
      const SetFunction k2 = gen::set_function(rng, g, -0.5, 0.5, 1.0);
      bij = std::max({bij, max_rel_diff(ln_star(exp_star(u)), u), max_rel_diff(exp_star(ln_star(k1)), k1)});
      if (n > 10) continue;
      ln_inv = std::max(ln_inv, max_rel_diff(ln_star(inv_star(k1)), -ln_star(k1)));
      inv_mul = std::max(inv_mul, max_rel_diff(inv_star(conv_fast(k1, k2)), conv_fast(inv_star(k1), inv_star(k2))));
      const SetFunction e = exp_star(u);
      const SetFunction s = f_star_series(exp_coefficients(n), u);
      series_exact = series_exact && max_abs_diff(s, e) == 0.0;
      if (n > 0) {
        const std::size_t i = gen::index(rng, n);
        const SetFunction lhs = d_x(ln_star(k1), i);
        const SetFunction rhs = conv_fast(d_x(k1, i), inv_star(restrict_without(k1, i)));
        dlog = std::max(dlog, max_rel_diff(lhs, rhs));
      }
    }
    const bool ok = bij <= 1e-10 && ln_inv <= 1e-10 && inv_mul <= 1e-10 && dlog <= 1e-10 && series_exact;
    return std::pair{ok, fmt("bijection (n<=12) %.3g; ln of inverse %.3g; inverse of product %.3g; derivative of ln* %.3g; "
                             "exponential series %s",
                             bij, ln_inv, inv_mul, dlog, series_exact ? "identical" : "differs")};
  });
}

CheckResult evolution_operators(const VerifyOptions& o) {
  return guarded("inv.evolution.operators", "pre-dual operator, duality and the dual sum rule", [&] {
    Philox4x32 rng(o.seed, 106);
    const PhaseSpace space = detail::unit_interval(1.0);
    const Box& w = space.box();
    const Expr g = gen::polynomial(rng, 1, -0.5, 0.5);
    const Kernel gk = Kernel::lp_exponent(g);
    const std::vector<PhasePoint> eta = gen::ground(rng, 3)->points();
    const double unit = predual_apply(Kernel::unit_star(), gk, eta, space, w).value;
    const bool unit_ok = unit == gk(eta);
    const double c = space.integrate(g, w).value;
    const double mayer = predual_apply(Kernel::constant_level(1.0), gk, {}, space, w).value;
    const double mayer_dev = std::abs(mayer - std::exp(c)) / std::exp(c);
    const Kernel a = Kernel::singleton(gen::polynomial(rng, 1, -1.0, 1.0)) + Kernel::level_weight({0.0, 0.0, 0.5});
    const IdentityReport dual = duality_check(a, gk, Kernel::lp_exponent(gen::polynomial(rng, 1, 0.0, 0.5)), space, w,
                                              o.mc_samples / 4, mix_seed(o.seed, 1060));
    std::vector<ConfigurationPair> pairs;
    for (int t = 0; t < 20; ++t) {
      const auto pts = gen::ground(rng, 6)->points();
      const std::size_t cut = gen::index(rng, 7);
      pairs.emplace_back(std::vector<PhasePoint>(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(cut)),
                         std::vector<PhasePoint>(pts.begin() + static_cast<std::ptrdiff_t>(cut), pts.end()));
    }
    const double number = dual_sum_check(DualOperator::number(), gk, pairs).max_residual;
    const Kernel big = Kernel::lp_exponent(Expr::constant(2.0) + gen::polynomial(rng, 1, 0.0, 0.5));
    const double square = dual_sum_check(DualOperator::square(), big, pairs).max_residual;
    const bool ok = unit_ok && mayer_dev <= 1e-12 && dual.within(3.0) && number <= 1e-12 && square > 1e-3;
    return std::pair{ok, fmt("unit multiplier exact %s; Mayer value rel dev %.3g; duality %.2f sigma; sum rule %.3g, "
                             "squaring control %.3g",
                             unit_ok ? "yes" : "no", mayer_dev, dual.sigma > 0 ? dual.deviation / dual.sigma : 0.0, number,
                             square)};
  });
}

CheckResult norms_monotone(const VerifyOptions& o) {
  return guarded("inv.norms.monotone", "growth norms shrink with larger weights; probes only raise estimates", [&] {
    Philox4x32 rng(o.seed, 107);
    bool spaces = true;
    for (int t = 0; t < 30; ++t) {
      const GroundPtr g = gen::ground(rng, gen::index(rng, 11));
      const SetFunction k = gen::set_function(rng, g, -2.0, 2.0);
      const NormParams p(gen::uniform(rng, 0.5, 2.0), gen::uniform(rng, 0.0, 1.5));
      const NormParams q(p.c + gen::uniform(rng, 0.0, 1.0), p.delta + gen::uniform(rng, 0.0, 1.0));
      spaces = spaces && k_norm_estimate(k, q) <= k_norm_estimate(k, p);
    }
    const PhaseSpace space(Box({Interval{0.0, 1.0}, Interval{0.0, 1.0}}), 1.0);
    bool probes = true;
    for (int t = 0; t < 5; ++t) {
      const Kernel k = Kernel::lp_exponent(gen::polynomial(rng, 2, -1.0, 1.5));
      const NormParams p(1.0, 0.0);
      ProbeOptions few{8, 8, mix_seed(o.seed, t)}, many{8, 64, mix_seed(o.seed, t)};
      probes = probes && k_norm_estimate(k, p, space, few) <= k_norm_estimate(k, p, space, many);
    }
    return std::pair{spaces && probes, fmt("space inclusion %s; probe monotonicity %s", spaces ? "holds" : "fails",
                                           probes ? "holds" : "fails")};
  });
}

CheckResult norms_series(const VerifyOptions& o) {
  return guarded("inv.norms.series", "integral norm finiteness follows the series criterion", [&] {
    Philox4x32 rng(o.seed, 108);
    const PhaseSpace space = detail::unit_interval(1.0);
    std::size_t agree = 0, total = 0;
    for (int t = 0; t < 30; ++t) {
      const double level = gen::uniform(rng, 0.2, 1.8);
      const Expr f = Expr::constant(level);
      const double c = gen::uniform(rng, 0.3, 1.5);
      const double delta = t % 3 == 0 ? 1.0 : gen::uniform(rng, 0.0, 0.99);
      const bool expected = delta < 1.0 || c * level < 1.0;
      const auto verdict = l_norm_finite(Kernel::lp_exponent(f), NormParams(c, delta), space, space.box());
      ++total;
      agree += (verdict && *verdict == expected) ? 1 : 0;
    }
    return std::pair{agree == total, fmt("%zu of %zu verdicts match", agree, total)};
  });
}

CheckResult posdef_symmetry(const VerifyOptions& o) {
  return guarded("inv.posdef.symmetry", "Gram matrices symmetric within error bars; verdict wording", [&] {
    Philox4x32 rng(o.seed, 109);
    const PhaseSpace space = detail::unit_interval(1.0);
    auto basis = default_basis(space.box(), 2);
    basis.push_back(Kernel::lp_exponent(Expr::constant(0.5) * Expr::indicator({Interval{0.25, 0.75}})));
    GramOptions go;
    go.samples = std::max<std::size_t>(o.mc_samples / 5, 1000);
    go.seed = mix_seed(o.seed, 1090);
    const GramReport r = gram_star(Kernel::lp_exponent(gen::polynomial(rng, 1, 0.0, 1.0)), basis, space, space.box(), go);
    double max_se = 0.0;
    for (const auto& row : r.integration_stderr) max_se = std::max(max_se, *std::max_element(row.begin(), row.end()));
    const bool sym = r.max_asymmetry <= 3.0 * std::sqrt(2.0) * max_se + 1e-12;
    const bool wording = r.verdict == (r.psd ? "no violation found" : "violation found");
    return std::pair{sym && wording && r.psd, fmt("asymmetry %.3g vs error bar %.3g; verdict \"%s\"", r.max_asymmetry, max_se,
                                                  r.verdict.c_str())};
  });
}

}  // namespace

std::vector<CheckResult> invariant_checks(const VerifyOptions& o) {
  return {core_permutation(o),   core_tabulate(o),       transforms_algebra(o), transforms_cover(o),
          calculus_identities(o), evolution_operators(o), norms_monotone(o),     norms_series(o),
          posdef_symmetry(o)};
}

}  // namespace starcalc
