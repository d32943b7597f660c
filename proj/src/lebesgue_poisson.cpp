#include "starcalc/lebesgue_poisson.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "starcalc/error.hpp"

namespace starcalc {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr std::size_t kMaxLevels = 4000;

bool overlaps(const std::vector<PhasePoint>& a, const std::vector<PhasePoint>& b) {
  for (const auto& p : a) {
    for (const auto& q : b) {
      if (p == q) return true;
    }
  }
  return false;
}

IntegralEstimate exact_estimate(double v) {
  IntegralEstimate e;
  e.value = v;
  e.exact = true;
  return e;
}

IntegralEstimate scaled_estimate(const RunningStats& s, double norm, std::uint64_t seed) {
  IntegralEstimate e;
  e.value = norm * s.mean;
  e.std_error = norm * s.std_error();
  e.samples = s.count;
  e.seed = seed;
  e.normalization = norm;
  return e;
}

// Pure exponent e(g): a single level term with weight identically 1.
std::optional<Expr> pure_exponent(const Kernel& k) {
  auto f = k.level_form();
  if (!f || f->size() != 1) return std::nullopt;
  auto c = (*f)[0].weights.constant_value();
  if (!c || *c != 1.0) return std::nullopt;
  return (*f)[0].factor;
}

class ClosedIntegrator {
 public:
  ClosedIntegrator(const PhaseSpace& space, const Box& window) : space_(space), window_(window) {}

  // Integral of k * e(h) against lambda_z over the window.
  std::optional<double> run(const Kernel& k, const std::optional<Expr>& h) const {
    using F = Kernel::Family;
    switch (k.family()) {
      case F::Sum: {
        double s = 0.0;
        for (const auto& c : k.children()) {
          auto v = run(c, h);
          if (!v) return std::nullopt;
          s += *v;
        }
        return s;
      }
      case F::Scale: {
        auto v = run(k.children()[0], h);
        if (!v) return std::nullopt;
        return k.params()[0] * *v;
      }
      case F::Convolution: {
        // e(h) is multiplicative, so it distributes over both factors.
        auto a = run(k.children()[0], h);
        if (!a) return std::nullopt;
        auto b = run(k.children()[1], h);
        if (!b) return std::nullopt;
        return *a * *b;
      }
      case F::ExpStar:
        return exp_star_levels(k.children()[0], h);
      case F::Product: {
        const auto& ch = k.children();
        for (std::size_t i = 0; i < ch.size(); ++i) {
          auto g = pure_exponent(ch[i]);
          if (!g) continue;
          std::vector<Kernel> rest;
          for (std::size_t j = 0; j < ch.size(); ++j) {
            if (j != i) rest.push_back(ch[j]);
          }
          const Expr h2 = h ? *h * *g : *g;
          if (rest.empty()) return run(Kernel::lp_exponent(h2), std::nullopt);
          if (rest.size() == 1) return run(rest[0], h2);
          return run(Kernel::product(std::move(rest)), h2);
        }
        break;
      }
      default:
        break;
    }
    auto form = k.level_form();
    if (!form) return std::nullopt;
    double s = 0.0;
    for (const auto& t : *form) s += level_series(t.weights, level_argument(t.factor, h));
    return s;
  }

 private:
  double level_argument(const Expr& g, const std::optional<Expr>& h) const {
    const Expr e = h ? *h * g : g;
    return space_.activity() * space_.integrate(e, window_).value;
  }

  // exp* u integrated level by level: with b_k the level-k integral of u
  // (including z^k / k!), the level sums c_n of exp* u obey
  // (n+1) c_{n+1} = sum_k (k+1) b_{k+1} c_{n-k}.
  std::optional<double> exp_star_levels(const Kernel& u, const std::optional<Expr>& h) const {
    if (u.empty_value() != 0.0) throw Error(ErrorCode::NotInIdeal, "cumulant must vanish at the empty configuration");
    auto form = u.level_form();
    if (!form) return std::nullopt;
    std::vector<double> xs;
    std::size_t limit = 1;
    bool unbounded = false;
    for (const auto& t : *form) {
      xs.push_back(level_argument(t.factor, h));
      if (t.weights.finite_support()) {
        limit = std::max(limit, t.weights.support_end());
      } else {
        if (t.weights.tail_delta >= 1.0 && xs.back() != 0.0) {
          throw Error(ErrorCode::DivergentSeries, "level series of the cumulant diverges");
        }
        unbounded = true;
      }
    }
    std::vector<double> b(1, 0.0);
    int small = 0;
    for (std::size_t k = 1; k < kMaxLevels; ++k) {
      if (!unbounded && k >= limit) break;
      const double lg = std::lgamma(static_cast<double>(k) + 1.0);
      double bk = 0.0;
      for (std::size_t j = 0; j < form->size(); ++j) {
        const double wk = (*form)[j].weights(k);
        if (wk == 0.0 || xs[j] == 0.0) continue;
        double term = std::exp(std::log(std::abs(wk)) + static_cast<double>(k) * std::log(std::abs(xs[j])) - lg);
        if (wk < 0.0) term = -term;
        if (xs[j] < 0.0 && k % 2 == 1) term = -term;
        bk += term;
      }
      b.push_back(bk);
      if (unbounded && k >= limit && std::abs(bk) < 1e-20) {
        if (++small >= 3) break;
      } else {
        small = 0;
      }
    }
    double total = 1.0;
    std::vector<double> c{1.0};
    small = 0;
    for (std::size_t n = 0; n + 1 < kMaxLevels; ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= n && k + 1 < b.size(); ++k) {
        acc += static_cast<double>(k + 1) * b[k + 1] * c[n - k];
      }
      const double cn = acc / static_cast<double>(n + 1);
      c.push_back(cn);
      total += cn;
      if (std::abs(cn) <= 1e-18 * std::max(1.0, std::abs(total)) && n + 1 >= b.size()) {
        if (++small >= 3) break;
      } else {
        small = 0;
      }
    }
    return total;
  }

  const PhaseSpace& space_;
  const Box& window_;
};

}  // namespace

void RunningStats::push(double x) noexcept {
  ++count;
  const double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
}

void RunningStats::merge(const RunningStats& o) noexcept {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(o.count);
  const double n = na + nb;
  const double d = o.mean - mean;
  mean += d * nb / n;
  m2 += o.m2 + d * d * na * nb / n;
  count += o.count;
}

double RunningStats::std_error() const noexcept {
  return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

unsigned mc_threads() {
  if (const char* env = std::getenv("STARCALC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunningStats mc_run(const std::function<double(Philox4x32&)>& draw, std::size_t n, std::uint64_t seed) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<RunningStats> partial(blocks);
  auto run_block = [&](std::size_t b) {
    Philox4x32 rng(seed, b);
    const std::size_t count = std::min(kBlock, n - b * kBlock);
    RunningStats s;
    for (std::size_t i = 0; i < count; ++i) s.push(draw(rng));
    partial[b] = s;
  };
  const unsigned threads = std::min<std::size_t>(mc_threads(), std::max<std::size_t>(blocks, 1));
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
          try {
            run_block(b);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  RunningStats total;
  for (const auto& s : partial) total.merge(s);
  return total;
}

LPSampler::LPSampler(const PhaseSpace& space, const Box& window) : space_(&space), window_(window) {
  space.check_window(window);
  mass_ = space.mass(window);
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) {
    throw Error(ErrorCode::ZeroMassWindow, "intensity measure of the window must be positive and finite");
  }
  intensity_ = space.activity() * mass_;
  normalization_ = std::exp(intensity_);
}

void LPSampler::draw(Philox4x32& rng, std::vector<PhasePoint>& out) const {
  out.clear();
  std::poisson_distribution<long> count(intensity_);
  const long n = count(rng);
  for (long i = 0; i < n; ++i) {
    PhasePoint p = space_->sample_point(window_, rng);
    // A repeat has probability zero; redraw so the configuration stays a set.
    while (std::find(out.begin(), out.end(), p) != out.end()) p = space_->sample_point(window_, rng);
    out.push_back(std::move(p));
  }
}

std::vector<PhasePoint> LPSampler::draw(Philox4x32& rng) const {
  std::vector<PhasePoint> out;
  draw(rng, out);
  return out;
}

LPSample sample_lp(const PhaseSpace& space, const Box& window, std::uint64_t seed, std::uint64_t stream) {
  LPSampler sampler(space, window);
  Philox4x32 rng(seed, stream);
  return {sampler.draw(rng), window, seed, stream};
}

IntegralEstimate integrate_mc(const Kernel& f, const PhaseSpace& space, const Box& window, std::size_t n_samples,
                              std::uint64_t seed) {
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least one sample");
  LPSampler sampler(space, window);
  auto draw = [&](Philox4x32& rng) {
    thread_local std::vector<PhasePoint> eta;
    sampler.draw(rng, eta);
    return f(eta);
  };
  return scaled_estimate(mc_run(draw, n_samples, seed), sampler.normalization(), seed);
}

IntegralEstimate integrate_exponent(const Expr& f, const PhaseSpace& space, const Box& window) {
  const QuadratureResult q = space.integrate(f, window);
  return exact_estimate(std::exp(space.activity() * q.value));
}

double level_series(const LevelWeights& w, double x) {
  if (w.head.empty() && w.tail_delta == 0.0) return w.tail_scale * std::exp(x);
  double s = 0.0;
  double term = 1.0;  // x^n / n!
  for (std::size_t n = 0; n < w.head.size(); ++n) {
    if (n > 0) term *= x / static_cast<double>(n);
    s += w.head[n] * term;
  }
  if (w.finite_support() || x == 0.0) return s;
  const double delta = w.tail_delta;
  if (delta > 1.0 || (delta == 1.0 && std::abs(x) >= 1.0)) {
    throw Error(ErrorCode::DivergentSeries, "level series diverges: weights grow at least factorially");
  }
  // Tail terms tail_scale (n!)^{delta-1} x^n, in the log domain.
  double tail = 0.0;
  const double lx = std::log(std::abs(x));
  int small = 0;
  for (std::size_t n = w.head.size(); n < 100000; ++n) {
    const double nd = static_cast<double>(n);
    const double mag = (delta - 1.0) * std::lgamma(nd + 1.0) + nd * lx;
    double t = std::exp(mag);
    if (x < 0.0 && n % 2 == 1) t = -t;
    tail += t;
    if (std::abs(t) <= 1e-18 * std::max(1.0, std::abs(tail)) && nd > std::abs(x)) {
      if (++small >= 3) break;
    } else {
      small = 0;
    }
  }
  return s + w.tail_scale * tail;
}

std::optional<double> integrate_closed(const Kernel& k, const PhaseSpace& space, const Box& window) {
  space.check_window(window);
  return ClosedIntegrator(space, window).run(k, std::nullopt);
}

IntegralEstimate integrate_kernel(const Kernel& k, const PhaseSpace& space, const Box& window, std::size_t n_samples,
                                  std::uint64_t seed) {
  if (auto v = integrate_closed(k, space, window)) return exact_estimate(*v);
  return integrate_mc(k, space, window, n_samples, seed);
}

bool IdentityReport::within(double n_sigma, double exact_tol) const noexcept {
  if (closed_lhs && closed_rhs && closed_residual() > exact_tol) return false;
  if (lhs.samples == 0 && rhs.samples == 0) return true;
  return deviation <= n_sigma * sigma;
}

double IdentityReport::closed_residual() const noexcept {
  if (!closed_lhs || !closed_rhs) return 0.0;
  return std::abs(*closed_lhs - *closed_rhs) / std::max(1.0, std::abs(*closed_rhs));
}

namespace {

struct PairIdentityInputs {
  std::function<double(const std::vector<PhasePoint>&)> single;
  std::function<double(const std::vector<PhasePoint>&, const std::vector<PhasePoint>&, const std::vector<PhasePoint>&)>
      pair;  // (eta, xi, eta u xi)
};

IdentityReport run_pair_identity(const PairIdentityInputs& in, const PhaseSpace& space, const Box& window,
                                 std::size_t n_samples, std::uint64_t seed) {
  LPSampler sampler(space, window);
  IdentityReport r;
  auto single = [&](Philox4x32& rng) {
    thread_local std::vector<PhasePoint> eta;
    sampler.draw(rng, eta);
    return in.single(eta);
  };
  std::atomic<std::size_t> overlaps_seen{0};
  auto pair = [&](Philox4x32& rng) {
    thread_local std::vector<PhasePoint> eta, xi, both;
    sampler.draw(rng, eta);
    sampler.draw(rng, xi);
    if (overlaps(eta, xi)) overlaps_seen.fetch_add(1);
    both = eta;
    both.insert(both.end(), xi.begin(), xi.end());
    return in.pair(eta, xi, both);
  };
  const std::uint64_t seed_l = mix_seed(seed, 1);
  const std::uint64_t seed_r = mix_seed(seed, 2);
  r.lhs = scaled_estimate(mc_run(single, n_samples, seed_l), sampler.normalization(), seed_l);
  r.rhs = scaled_estimate(mc_run(pair, n_samples, seed_r), sampler.normalization() * sampler.normalization(), seed_r);
  r.overlap_violations = overlaps_seen.load();
  r.deviation = std::abs(r.lhs.value - r.rhs.value);
  r.sigma = std::hypot(r.lhs.std_error, r.rhs.std_error);
  return r;
}

}  // namespace

IdentityReport minlos_check(const Kernel& h, const Kernel& g1, const Kernel& g2, const PhaseSpace& space,
                            const Box& window, std::size_t n_samples, std::uint64_t seed) {
  const Kernel conv = Kernel::convolution(g1, g2);
  PairIdentityInputs in;
  in.single = [&](const std::vector<PhasePoint>& eta) { return h(eta) * conv(eta); };
  in.pair = [&](const std::vector<PhasePoint>& eta, const std::vector<PhasePoint>& xi,
                const std::vector<PhasePoint>& both) { return h(both) * g1(eta) * g2(xi); };
  IdentityReport r = run_pair_identity(in, space, window, n_samples, seed);
  r.closed_lhs = integrate_closed(h * conv, space, window);
  if (pure_exponent(h)) {
    auto a = integrate_closed(h * g1, space, window);
    auto b = integrate_closed(h * g2, space, window);
    if (a && b) r.closed_rhs = *a * *b;
  }
  return r;
}

MeasureConvolutionReport measure_convolution_check(const Kernel& k1, const Kernel& k2, const Kernel& g,
                                                   const PhaseSpace& space, const Box& window, std::size_t n_samples,
                                                   std::uint64_t seed) {
  if (k1.empty_value() < 0.0 || k2.empty_value() < 0.0) {
    throw Error(ErrorCode::NegativeDensity, "correlation densities must be nonnegative");
  }
  const Kernel conv = Kernel::convolution(k1, k2);
  std::atomic<std::size_t> negatives{0};
  PairIdentityInputs in;
  in.single = [&](const std::vector<PhasePoint>& eta) { return g(eta) * conv(eta); };
  in.pair = [&](const std::vector<PhasePoint>& eta, const std::vector<PhasePoint>& xi,
                const std::vector<PhasePoint>& both) {
    const double a = k1(eta);
    const double b = k2(xi);
    if (a < 0.0 || b < 0.0) negatives.fetch_add(1);
    return g(both) * a * b;
  };
  MeasureConvolutionReport r;
  r.identity = run_pair_identity(in, space, window, n_samples, seed);
  if (negatives.load() > 0) {
    throw Error(ErrorCode::NegativeDensity, "a correlation density took a negative value on a sampled configuration");
  }
  r.identity.closed_lhs = integrate_closed(g * conv, space, window);
  if (pure_exponent(g)) {
    auto a = integrate_closed(g * k1, space, window);
    auto b = integrate_closed(g * k2, space, window);
    if (a && b) r.identity.closed_rhs = *a * *b;
  }
  r.window_mass = integrate_kernel(conv, space, window, n_samples, mix_seed(seed, 3));
  r.window_mass_finite = std::isfinite(r.window_mass.value) && std::isfinite(r.window_mass.std_error);
  return r;
}

IntegralEstimate bogolyubov(const Kernel& k, const Expr& f, const PhaseSpace& space, const Box& window,
                            const BogolyubovOptions& opt) {
  if (opt.growth.delta >= 1.0) {
    throw Error(ErrorCode::GrowthViolation, "generating functional needs a declared growth exponent delta < 1");
  }
  const Kernel integrand = Kernel::lp_exponent(f) * k;
  if (opt.method != Method::MonteCarlo) {
    if (auto v = integrate_closed(integrand, space, window)) return exact_estimate(*v);
    if (opt.method == Method::ClosedForm) {
      throw Error(ErrorCode::InvalidArgument, "no closed form for this kernel: " + k.describe());
    }
  }
  return integrate_mc(integrand, space, window, opt.samples, opt.seed);
}

PositivityReport bogolyubov_positivity_check(const Kernel& u, const Expr& f, const PhaseSpace& space,
                                             const Box& window, const BogolyubovOptions& opt) {
  if (u.empty_value() != 0.0) throw Error(ErrorCode::NotInIdeal, "cumulant must vanish at the empty configuration");
  PositivityReport r;
  r.functional = bogolyubov(Kernel::exp_star(u), f, space, window, opt);
  r.cumulant_value = bogolyubov(u, f, space, window, opt).value;
  r.exp_cumulant = std::exp(r.cumulant_value);
  r.relative_deviation = std::abs(r.functional.value - r.exp_cumulant) / std::abs(r.exp_cumulant);
  r.positive = r.functional.value > 0.0;
  return r;
}

}  // namespace starcalc
