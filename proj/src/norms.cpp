#include "starcalc/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "starcalc/error.hpp"

namespace starcalc {

namespace {

constexpr std::size_t kDirectMaxLevel = 18;
constexpr double kRatioTol = 1e-12;

double log_binom(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double binom(std::size_t n, std::size_t k) {
  double b = 1.0;
  for (std::size_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(b);
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double log_sum_exp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Sum S_n of the extremal convolution at level n, divided by the target weight
// T^n (n!)^d. Direct below the overflow threshold, log-domain above.
double convolution_ratio(std::size_t n, double c1, double d1, double c2, double d2, double t, double d) {
  if (n <= kDirectMaxLevel) {
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      s += binom(n, k) * std::pow(c1, static_cast<double>(k)) * std::pow(factorial(k), d1) *
           std::pow(c2, static_cast<double>(n - k)) * std::pow(factorial(n - k), d2);
    }
    return s / growth_weight(t, d, n);
  }
  return std::exp(log_level_convolution(n, c1, d1, c2, d2) - log_growth_weight(t, d, n));
}

double composition_sum(std::size_t n, unsigned p, double delta) {
  if (n <= kDirectMaxLevel) {
    // T_j(m): compositions of m into j parts, weighted by multinomial^{1-delta}.
    std::vector<double> t(n + 1, 1.0);
    for (unsigned j = 2; j <= p; ++j) {
      std::vector<double> next(n + 1, 0.0);
      for (std::size_t m = 0; m <= n; ++m) {
        for (std::size_t i = 0; i <= m; ++i) next[m] += std::pow(binom(m, i), 1.0 - delta) * t[m - i];
      }
      t.swap(next);
    }
    return t[n];
  }
  return std::exp(log_power_composition_sum(n, p, delta));
}

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::HypothesisViolated, what);
}

YoungReport finish(YoungReport r) {
  r.max_ratio = 0.0;
  for (double x : r.lhs_per_level) r.max_ratio = std::max(r.max_ratio, x);
  r.satisfied = r.max_ratio <= r.rhs_bound * (1.0 + kRatioTol);
  return r;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

NormParams::NormParams(double c_, double delta_) : c(c_), delta(delta_) {
  if (!(c > 0.0) || !(delta >= 0.0) || !std::isfinite(c) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "norm parameters need C > 0 and delta >= 0");
  }
}

double k_norm_estimate(const SetFunction& k, const NormParams& p, std::size_t max_level) {
  double best = 0.0;
  for (std::size_t m = 0; m < k.size(); ++m) {
    const auto level = static_cast<std::size_t>(std::popcount(m));
    if (level > max_level) continue;
    best = std::max(best, std::abs(k.values()[m]) / growth_weight(p.c, p.delta, level));
  }
  return best;
}

double k_norm_estimate(const Kernel& k, const NormParams& p, const PhaseSpace& space, const ProbeOptions& opt) {
  double best = std::abs(k.empty_value());
  std::vector<PhasePoint> pts;
  for (std::size_t n = 1; n <= opt.max_level; ++n) {
    Philox4x32 rng(opt.seed, n);
    const double w = growth_weight(p.c, p.delta, n);
    for (std::size_t i = 0; i < opt.probes; ++i) {
      pts.clear();
      while (pts.size() < n) {
        PhasePoint x = space.sample_point(space.box(), rng);
        if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(std::move(x));
      }
      best = std::max(best, std::abs(k(pts)) / w);
    }
  }
  return best;
}

namespace {

struct SingleTerm {
  LevelWeights weights;  // absolute values, with the norm's factorial power folded in
  double x = 0.0;        // z C int |g| dm
};

std::optional<SingleTerm> single_term(const Kernel& g, const NormParams& p, const PhaseSpace& space,
                                      const Box& window) {
  auto form = g.level_form();
  if (!form || form->size() != 1) return std::nullopt;
  const LevelTerm& t = (*form)[0];
  const Expr integrand = t.factor.bound(window).lo >= 0.0 ? t.factor : abs(t.factor);
  SingleTerm s;
  s.x = space.activity() * p.c * space.integrate(integrand, window).value;
  s.weights = t.weights;
  for (double& h : s.weights.head) h = std::abs(h) * growth_weight(1.0, p.delta, &h - s.weights.head.data());
  s.weights.tail_scale = std::abs(s.weights.tail_scale);
  if (s.weights.tail_scale != 0.0) s.weights.tail_delta += p.delta;
  return s;
}

bool series_finite(const SingleTerm& s) {
  if (s.weights.finite_support() || s.x == 0.0) return true;
  const double d = s.weights.tail_delta;
  return d < 1.0 || (d == 1.0 && s.x < 1.0);
}

}  // namespace

std::optional<bool> l_norm_finite(const Kernel& g, const NormParams& p, const PhaseSpace& space, const Box& window) {
  auto s = single_term(g, p, space, window);
  if (!s) return std::nullopt;
  return series_finite(*s);
}

LNormReport l_norm(const Kernel& g, const NormParams& p, const PhaseSpace& space, const Box& window,
                   std::size_t max_level, std::size_t samples_per_level, std::uint64_t seed) {
  space.check_window(window);
  LNormReport r;
  if (auto s = single_term(g, p, space, window)) {
    r.finite = series_finite(*s);
    if (!*r.finite) throw Error(ErrorCode::GrowthViolation, "level series of the dual norm diverges");
    double term = 1.0;  // x^n / n!
    for (std::size_t n = 0; n <= max_level + 1; ++n) {
      if (n > 0) term *= s->x / static_cast<double>(n);
      const double v = s->weights(n) * term;
      if (n <= max_level) {
        r.level_terms.push_back(v);
      } else {
        r.tail = v;
      }
    }
    r.estimate.value = level_series(s->weights, s->x);
    r.estimate.exact = true;
    return r;
  }
  // Level n: z^n / n! * C^n (n!)^delta * m(window)^n * E|G(x_1..x_n)|, points iid by m.
  const double mass = space.mass(window);
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroMassWindow, "window has no intensity mass");
  double total = std::abs(g.empty_value());
  double var = 0.0;
  r.level_terms.push_back(total);
  std::size_t samples = 0;
  for (std::size_t n = 1; n <= max_level + 1; ++n) {
    auto draw = [&](Philox4x32& rng) {
      thread_local std::vector<PhasePoint> pts;
      pts.clear();
      while (pts.size() < n) {
        PhasePoint x = space.sample_point(window, rng);
        if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(std::move(x));
      }
      return std::abs(g(pts));
    };
    const RunningStats st = mc_run(draw, samples_per_level, mix_seed(seed, n));
    const double nd = static_cast<double>(n);
    const double scale =
        std::exp(nd * std::log(space.activity() * p.c * mass) + (p.delta - 1.0) * std::lgamma(nd + 1.0));
    if (n <= max_level) {
      r.level_terms.push_back(scale * st.mean);
      total += scale * st.mean;
      var += std::pow(scale * st.std_error(), 2);
      samples += st.count;
    } else {
      r.tail = scale * st.mean;
    }
  }
  r.estimate.value = total;
  r.estimate.std_error = std::sqrt(var);
  r.estimate.samples = samples;
  r.estimate.seed = seed;
  return r;
}

double log_level_convolution(std::size_t n, double c1, double d1, double c2, double d2) {
  std::vector<double> terms;
  for (std::size_t k = 0; k <= n; ++k) {
    terms.push_back(log_binom(n, k) + log_growth_weight(c1, d1, k) + log_growth_weight(c2, d2, n - k));
  }
  return log_sum_exp(terms);
}

double log_power_composition_sum(std::size_t n, unsigned p, double delta) {
  std::vector<double> t(n + 1, 0.0);  // log T_1(m) = 0
  for (unsigned j = 2; j <= p; ++j) {
    std::vector<double> next(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
      std::vector<double> terms;
      for (std::size_t i = 0; i <= m; ++i) terms.push_back((1.0 - delta) * log_binom(m, i) + t[m - i]);
      next[m] = log_sum_exp(terms);
    }
    t.swap(next);
  }
  return t[n];
}

const char* to_string(YoungVariant v) noexcept {
  switch (v) {
    case YoungVariant::Y1: return "Y1";
    case YoungVariant::Y2: return "Y2";
    case YoungVariant::Y3: return "Y3";
    case YoungVariant::Y4: return "Y4";
    case YoungVariant::Y5: return "Y5";
    case YoungVariant::Cor1: return "cor1";
  }
  return "?";
}

YoungVariant young_variant_from_string(const std::string& s) {
  if (s == "1" || s == "Y1") return YoungVariant::Y1;
  if (s == "2" || s == "Y2") return YoungVariant::Y2;
  if (s == "3" || s == "Y3") return YoungVariant::Y3;
  if (s == "4" || s == "Y4") return YoungVariant::Y4;
  if (s == "5" || s == "Y5") return YoungVariant::Y5;
  if (s == "cor1") return YoungVariant::Cor1;
  throw Error(ErrorCode::InvalidArgument, "unknown inequality variant \"" + s + "\"");
}

YoungReport young_check(YoungVariant variant, const YoungParams& p) {
  check(p.c1 > 0.0 && p.c2 > 0.0 && p.delta1 >= 0.0 && p.delta2 >= 0.0, "weights need C > 0 and delta >= 0");
  YoungReport r;
  r.variant = variant;
  const double d = std::max(p.delta1, p.delta2);
  switch (variant) {
    case YoungVariant::Y1: {
      const double c = p.c1 + p.c2;
      for (std::size_t n = 0; n <= p.n_max; ++n) {
        r.lhs_per_level.push_back(convolution_ratio(n, p.c1, p.delta1, p.c2, p.delta2, c, d));
      }
      r.rhs_bound = 1.0;
      r.description = "target (C1+C2, max delta) = (" + num(c) + ", " + num(d) + ")";
      break;
    }
    case YoungVariant::Y2: {
      check(d >= 1.0, "this estimate needs max(delta1, delta2) >= 1");
      check(p.c1 != p.c2, "this estimate needs C1 != C2");
      const double cbar = std::max(p.c1, p.c2);
      for (std::size_t n = 0; n <= p.n_max; ++n) {
        r.lhs_per_level.push_back(convolution_ratio(n, p.c1, p.delta1, p.c2, p.delta2, cbar, d));
      }
      r.rhs_bound = cbar / std::abs(p.c1 - p.c2);
      r.description = "target (max C, max delta) = (" + num(cbar) + ", " + num(d) + ")";
      break;
    }
    case YoungVariant::Y3: {
      check(d >= 1.0, "this estimate needs max(delta1, delta2) >= 1");
      check(p.c1 == p.c2, "this estimate needs C1 == C2");
      check(p.c_target > p.c1, "this estimate needs C' > C1");
      for (std::size_t n = 0; n <= p.n_max; ++n) {
        r.lhs_per_level.push_back(convolution_ratio(n, p.c1, p.delta1, p.c2, p.delta2, p.c_target, d));
      }
      r.rhs_bound = p.c_target / (std::exp(1.0) * p.c1 * std::log(p.c_target / p.c1));
      r.description = "target (C', max delta) = (" + num(p.c_target) + ", " + num(d) + ")";
      break;
    }
    case YoungVariant::Y4: {
      check(p.c1 > 1.0, "this estimate needs C1 > 1");
      check(p.delta1 >= 1.0, "this estimate needs delta1 >= 1");
      // Second input: the constant 1, of unit sup norm.
      for (std::size_t n = 0; n <= p.n_max; ++n) {
        r.lhs_per_level.push_back(convolution_ratio(n, p.c1, p.delta1, 1.0, 0.0, p.c1, p.delta1));
      }
      r.rhs_bound = p.c1 / (p.c1 - 1.0);
      r.description = "target (C1, delta1) = (" + num(p.c1) + ", " + num(p.delta1) + "), bounded second input";
      break;
    }
    case YoungVariant::Y5: {
      check(p.c_target >= 2.0, "this estimate needs C >= 2");
      for (std::size_t n = 0; n <= p.n_max; ++n) {
        r.lhs_per_level.push_back(convolution_ratio(n, 1.0, 0.0, 1.0, 0.0, p.c_target, 0.0));
      }
      r.rhs_bound = 1.0;
      r.description = "target (C, 0) = (" + num(p.c_target) + ", 0), bounded inputs";
      break;
    }
    case YoungVariant::Cor1:
      throw Error(ErrorCode::InvalidArgument, "use power_norm_check for the power estimate");
  }
  return finish(std::move(r));
}

YoungReport power_norm_check(const PowerParams& p) {
  check(p.n_power >= 1, "power must be at least 1");
  YoungReport r;
  r.variant = YoungVariant::Cor1;
  const auto pw = static_cast<double>(p.n_power);
  if (p.bounded) {
    check(p.c_prime >= 2.0, "bounded case needs C >= 2");
    check(p.n_power >= 2, "bounded case is stated for powers n >= 2");
    // k = 1 gives k^{*n}(eta) = n^{|eta|}.
    for (std::size_t m = 0; m <= p.n_max; ++m) {
      r.lhs_per_level.push_back(std::pow(pw / p.c_prime, static_cast<double>(m)));
    }
    r.rhs_bound = std::pow(p.c_prime / (p.c_prime - 1.0), pw - 2.0);
    r.description = "bounded witness, target (" + num(p.c_prime) + ", 0), power " + std::to_string(p.n_power);
    return finish(std::move(r));
  }
  check(p.c > 0.0 && p.delta >= 0.0, "weights need C > 0 and delta >= 0");
  if (p.delta < 1.0) {
    for (std::size_t m = 0; m <= p.n_max; ++m) {
      r.lhs_per_level.push_back(composition_sum(m, p.n_power, p.delta) / std::pow(pw, static_cast<double>(m)));
    }
    r.rhs_bound = 1.0;
    r.description = "target (n C, delta) = (" + num(pw * p.c) + ", " + num(p.delta) + ")";
    return finish(std::move(r));
  }
  check(p.n_power >= 2, "factorial case is stated for powers n >= 2");
  check(p.c_prime > p.c, "factorial case needs C' > C");
  for (std::size_t m = 0; m <= p.n_max; ++m) {
    const double md = static_cast<double>(m);
    if (m <= kDirectMaxLevel) {
      r.lhs_per_level.push_back(std::pow(p.c / p.c_prime, md) * composition_sum(m, p.n_power, p.delta));
    } else {
      r.lhs_per_level.push_back(
          std::exp(md * std::log(p.c / p.c_prime) + log_power_composition_sum(m, p.n_power, p.delta)));
    }
  }
  const double ratio = p.c_prime / p.c;
  r.rhs_bound = std::pow(p.c_prime / (p.c_prime - p.c), pw - 2.0) * ratio / (std::exp(1.0) * std::log(ratio));
  r.description = "target (C', delta) = (" + num(p.c_prime) + ", " + num(p.delta) + ")";
  return finish(std::move(r));
}

}  // namespace starcalc
