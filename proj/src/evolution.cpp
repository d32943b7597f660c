#include "starcalc/evolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "starcalc/error.hpp"
#include "starcalc/norms.hpp"
#include "starcalc/transforms.hpp"

namespace starcalc {

namespace {

bool is_constant_one(const SetFunction& a) {
  return std::all_of(a.values().begin(), a.values().end(), [](double v) { return v == 1.0; });
}

bool is_alternating_sign(const SetFunction& a) {
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a.values()[m] != ((std::popcount(m) & 1) ? -1.0 : 1.0)) return false;
  }
  return true;
}

bool overlaps(std::span<const PhasePoint> a, std::span<const PhasePoint> b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

std::vector<PhasePoint> join(std::span<const PhasePoint> a, std::span<const PhasePoint> b) {
  std::vector<PhasePoint> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double exponent_at(const Expr& g, std::span<const PhasePoint> eta) {
  double p = 1.0;
  for (const auto& x : eta) p *= g(x.coords);
  return p;
}

SetFunction scaled(SetFunction f, double s) { return f *= s; }

}  // namespace

SetFunction mult_operator(const SetFunction& a, const SetFunction& k) {
  a.require_same_ground(k);
  if (is_constant_one(a)) return zeta(k);
  if (is_alternating_sign(a)) return mobius(k);
  return conv_fast(a, k);
}

IntegralEstimate predual_apply(const Kernel& a, const Kernel& g, std::span<const PhasePoint> eta,
                               const PhaseSpace& space, const Box& window, std::size_t n_samples,
                               std::uint64_t seed) {
  space.check_window(window);
  IntegralEstimate r;
  r.exact = true;
  if (a.family() == Kernel::Family::UnitStar) {
    r.value = g(eta);
    return r;
  }
  if (auto form = g.level_form()) {
    double total = 0.0;
    bool closed = true;
    for (const auto& term : *form) {
      auto c = term.weights.constant_value();
      if (!c) {
        closed = false;
        break;
      }
      auto v = integrate_closed(a * Kernel::lp_exponent(term.factor), space, window);
      if (!v) {
        closed = false;
        break;
      }
      total += *c * exponent_at(term.factor, eta) * *v;
    }
    if (closed) {
      r.value = total;
      return r;
    }
  }
  std::vector<PhasePoint> base(eta.begin(), eta.end());
  const Kernel integrand = Kernel::custom("predual", [a, g, base](std::span<const PhasePoint> xi) {
    // Coincident points carry no lambda-mass.
    if (overlaps(base, xi)) return 0.0;
    return g(join(base, xi)) * a(xi);
  });
  return integrate_mc(integrand, space, window, n_samples, seed);
}

IdentityReport duality_check(const Kernel& a, const Kernel& g, const Kernel& k, const PhaseSpace& space,
                             const Box& window, std::size_t n_samples, std::uint64_t seed) {
  return minlos_check(g, k, a, space, window, n_samples, seed);
}

ResolventResult resolvent(const SetFunction& a, const SetFunction& k, double z, const ResolventOptions& opt) {
  a.require_same_ground(k);
  if (z == 0.0 || !std::isfinite(z)) throw Error(ErrorCode::InvalidArgument, "resolvent needs a finite z != 0");
  const bool nilpotent = a.empty_value() == 0.0;
  if (!nilpotent) {
    const double z0 = 2.0 * a.sup_norm() * (1.0 + opt.margin);
    if (std::abs(z) <= z0) {
      throw Error(ErrorCode::DivergentSeries, "|z| must exceed " + std::to_string(z0) + " for this multiplier");
    }
  }
  ResolventResult r{scaled(k, 1.0 / z), 1, 0.0};
  SetFunction term = r.solution;
  const std::size_t n = a.ground_size();
  std::size_t quiet = 0;
  for (std::size_t j = 1;; ++j) {
    if (nilpotent && j > n) break;
    if (j >= opt.max_terms) throw Error(ErrorCode::DivergentSeries, "resolvent series did not settle");
    term = scaled(mult_operator(a, term), 1.0 / z);
    r.solution += term;
    r.terms = j + 1;
    if (!nilpotent) {
      quiet = term.sup_norm() <= 1e-17 * r.solution.sup_norm() ? quiet + 1 : 0;
      if (quiet >= 2) break;
    }
  }
  SetFunction check = scaled(r.solution, z) - mult_operator(a, r.solution);
  r.residual = max_abs_diff(check, k);
  return r;
}

EvolutionResult evolve(const SetFunction& a, const SetFunction& k0, double t, std::size_t max_terms) {
  a.require_same_ground(k0);
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "evolution time must be >= 0");
  EvolutionResult r{t, k0, 1, 0.0};
  if (t == 0.0) return r;
  const bool nilpotent = a.empty_value() == 0.0;
  const std::size_t n = a.ground_size();
  SetFunction term = k0;
  std::size_t quiet = 0;
  for (std::size_t j = 1;; ++j) {
    term = scaled(mult_operator(a, term), t / static_cast<double>(j));
    if (nilpotent && j > n) break;  // a^{*j} vanishes beyond the ground size
    const double size = term.sup_norm();
    if (quiet >= 2) {
      r.tail_bound = size;
      break;
    }
    if (j >= max_terms) throw Error(ErrorCode::DivergentSeries, "evolution series did not settle");
    r.solution += term;
    r.truncation_terms = j + 1;
    quiet = size <= 1e-17 * r.solution.sup_norm() ? quiet + 1 : 0;
  }
  return r;
}

double ode_residual(const SetFunction& a, const SetFunction& k0, double t, double h) {
  if (!(h > 0.0) || t < h) throw Error(ErrorCode::InvalidArgument, "need 0 < h <= t");
  const SetFunction kt = evolve(a, k0, t).solution;
  const SetFunction fwd = evolve(a, k0, t + h).solution;
  const SetFunction bwd = evolve(a, k0, t - h).solution;
  const SetFunction rhs = mult_operator(a, kt);
  const SetFunction diff = scaled(fwd - bwd, 0.5 / h);
  return max_abs_diff(diff, rhs) / std::max(1.0, rhs.sup_norm());
}

SetFunction evolve_singleton(const Expr& sigma, const Kernel& k0, double t, GroundPtr ground) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "evolution time must be >= 0");
  const SetFunction e = tabulate(Kernel::lp_exponent(Expr::constant(t) * sigma), ground);
  return conv_fast(e, tabulate(k0, ground));
}

SetFunction evolve_singleton(const Expr& sigma, const Kernel& k0, double t, const GroundConfiguration& ground) {
  return evolve_singleton(sigma, k0, t, std::make_shared<const GroundConfiguration>(ground));
}

NormGrowthReport norm_growth_time(const Expr& sigma, double c0, double c_prime, double bound, const PhaseSpace& space,
                                  double t_max, double dt, const ProbeOptions& probes) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need dt > 0 and t_max >= 0");
  NormGrowthReport r;
  const NormParams p(c_prime, 0.0);
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const Kernel k = Kernel::lp_exponent(Expr::constant(c0) + Expr::constant(t) * sigma);
    const double norm = k_norm_estimate(k, p, space, probes);
    r.times.push_back(t);
    r.norms.push_back(norm);
    if (!r.exit_time && norm > bound) r.exit_time = t;
  }
  return r;
}

namespace {

// y + sum_{m=1}^{order} h^m B^m y / m!
SetFunction taylor_step(const OperatorHandle& b, const SetFunction& y, double h, unsigned order) {
  SetFunction out = y;
  SetFunction d = y;
  for (unsigned m = 1; m <= order; ++m) {
    d = scaled(b.apply(d), h / static_cast<double>(m));
    out += d;
  }
  return out;
}

}  // namespace

CumulantEvolutionReport cumulant_evolution_check(const OperatorHandle& b, const SetFunction& u0, double t,
                                                 std::size_t steps, unsigned order) {
  if (u0.empty_value() != 0.0) throw Error(ErrorCode::NotInIdeal, "initial cumulant must vanish on the empty set");
  if (steps == 0 || order == 0 || !(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need steps, order >= 1 and t >= 0");
  const double h = t / static_cast<double>(steps);
  SetFunction k = exp_star(u0);
  SetFunction u = u0;
  if (t > 0.0) {
    for (std::size_t s = 0; s < steps; ++s) {
      k = taylor_step(b, k, h, order);
      u = taylor_step(b, u, h, order);
    }
  }
  CumulantEvolutionReport r{0.0, t, steps, order, k, u};
  r.deviation = max_abs_diff(ln_star(k), u);
  return r;
}

DualOperator DualOperator::number() {
  return {"number", [](const Kernel& g, std::span<const PhasePoint> eta) {
            return static_cast<double>(eta.size()) * g(eta);
          }};
}

DualOperator DualOperator::square() {
  return {"square", [](const Kernel& g, std::span<const PhasePoint> eta) {
            const double v = g(eta);
            return v * v;
          }};
}

DualSumReport dual_sum_check(const DualOperator& dual, const Kernel& g, std::span<const ConfigurationPair> pairs) {
  DualSumReport r;
  r.op = dual.name;
  for (const auto& [eta, xi] : pairs) {
    if (overlaps(eta, xi)) throw Error(ErrorCode::OverlappingConfigurations, "sampled configurations share a point");
    auto shifted = [&g](const std::vector<PhasePoint>& extra) {
      return Kernel::custom("shift", [g, extra](std::span<const PhasePoint> pts) { return g(join(pts, extra)); });
    };
    const double lhs = dual.apply(g, join(eta, xi));
    const double rhs = dual.apply(shifted(xi), eta) + dual.apply(shifted(eta), xi);
    r.residuals.push_back(std::abs(lhs - rhs));
    r.max_residual = std::max(r.max_residual, r.residuals.back());
  }
  return r;
}

}  // namespace starcalc
