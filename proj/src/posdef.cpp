#include "starcalc/posdef.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "starcalc/error.hpp"
#include "starcalc/rng.hpp"

namespace starcalc {

namespace {

bool finite_levels(const LevelExponentSum& f) {
  return std::all_of(f.begin(), f.end(), [](const LevelTerm& t) { return t.weights.finite_support(); });
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

struct Quad {
  double value = 0.0;
  bool monte_carlo = false;
  double error = 0.0;
};

Quad quad(const PhaseSpace& space, const Expr& f, const Box& window) {
  const auto r = space.integrate(f, window);
  return {r.value, r.monte_carlo, r.error};
}

// Sum over the three disjoint parts A = xi1 \ xi2, B = xi1 n xi2, C = xi2 \ xi1 of
// the covered configuration.
std::optional<IntegralEstimate> closed_pairing(const Kernel& g1, const Kernel& g2, const Kernel& k,
                                               const PhaseSpace& space, const Box& window) {
  auto f1 = g1.level_form();
  auto f2 = g2.level_form();
  auto fk = k.level_form();
  if (!f1 || !f2 || !fk || !finite_levels(*f1) || !finite_levels(*f2)) return std::nullopt;
  const double z = space.activity();
  IntegralEstimate r;
  r.exact = true;
  double err = 0.0;
  for (const auto& t1 : *f1) {
    for (const auto& t2 : *f2) {
      for (const auto& tk : *fk) {
        const Quad left = quad(space, t1.factor * tk.factor, window);
        const Quad both = quad(space, t1.factor * t2.factor * tk.factor, window);
        const Quad right = quad(space, t2.factor * tk.factor, window);
        if (left.monte_carlo || both.monte_carlo || right.monte_carlo) r.exact = false;
        const std::size_t s1 = t1.weights.support_end();
        const std::size_t s2 = t2.weights.support_end();
        for (std::size_t a = 0; a < s1; ++a) {
          for (std::size_t b = 0; a + b < s1; ++b) {
            for (std::size_t c = 0; b + c < s2; ++c) {
              const double v = t1.weights(a + b) * t2.weights(b + c);
              if (v == 0.0) continue;
              const auto n = static_cast<double>(a + b + c);
              const double term = v * tk.weights(a + b + c) * std::pow(z, n) / (factorial(a) * factorial(b) * factorial(c)) *
                                  std::pow(left.value, static_cast<double>(a)) *
                                  std::pow(both.value, static_cast<double>(b)) *
                                  std::pow(right.value, static_cast<double>(c));
              r.value += term;
            }
          }
        }
        err += left.error + both.error + right.error;
      }
    }
  }
  if (!r.exact) r.std_error = err;
  return r;
}

// (G1 * G2) at the full configuration, by enumerating covering pairs.
double cover_product(const Kernel& g1, const Kernel& g2, std::span<const PhasePoint> pts) {
  const std::size_t n = pts.size();
  if (n > GroundConfiguration::kMaxPoints) throw Error(ErrorCode::TooLarge, "configuration too large to enumerate");
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> v1(full + 1), v2(full + 1);
  std::vector<PhasePoint> sub;
  for (std::size_t m = 0; m <= full; ++m) {
    sub.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (m >> i & 1) sub.push_back(pts[i]);
    }
    v1[m] = g1(sub);
    v2[m] = g2(sub);
  }
  double s = 0.0;
  for (std::size_t s1 = 0; s1 <= full; ++s1) {
    if (v1[s1] == 0.0) continue;
    const std::size_t need = full ^ s1;
    // S2 = need | part, part ranging over subsets of s1.
    std::size_t part = s1;
    double inner = 0.0;
    while (true) {
      inner += v2[need | part];
      if (part == 0) break;
      part = (part - 1) & s1;
    }
    s += v1[s1] * inner;
  }
  return s;
}

Matrix square(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

void finish(GramReport& r, std::size_t size, double exact_tol) {
  double max_se = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      max_se = std::max(max_se, r.integration_stderr[i][j]);
      r.max_asymmetry = std::max(r.max_asymmetry, std::abs(r.matrix[i][j] - r.matrix[j][i]));
    }
  }
  Eigen::MatrixXd m(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) m(i, j) = 0.5 * (r.matrix[i][j] + r.matrix[j][i]);
  }
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) r.matrix[i][j] = m(i, j);
  }
  r.eigenvalues.clear();
  if (size > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r.eigenvalues.push_back(es.eigenvalues()(i));
  }
  r.min_eig = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front();
  r.tol = r.exact ? exact_tol : std::max(exact_tol, 3.0 * max_se * static_cast<double>(size));
  r.psd = r.min_eig >= -r.tol;
  r.verdict = r.psd ? "no violation found" : "violation found";
}

Kernel level_indicator(std::size_t n) {
  std::vector<double> w(n + 1, 0.0);
  w[n] = 1.0;
  return Kernel::level_weight(std::move(w));
}

}  // namespace

IntegralEstimate star_pairing(const Kernel& g1, const Kernel& g2, const Kernel& k, const PhaseSpace& space,
                              const Box& window, std::size_t samples, std::uint64_t seed) {
  space.check_window(window);
  if (auto r = closed_pairing(g1, g2, k, space, window)) return *r;
  const Kernel integrand = Kernel::custom("cover_pairing", [g1, g2, k](std::span<const PhasePoint> pts) {
    const double kv = k(pts);
    return kv == 0.0 ? 0.0 : cover_product(g1, g2, pts) * kv;
  });
  return integrate_mc(integrand, space, window, samples, seed);
}

GramReport gram_star(const Kernel& k, const std::vector<Kernel>& basis, const PhaseSpace& space, const Box& window,
                     const GramOptions& opt) {
  const std::size_t b = basis.size();
  GramReport r;
  r.matrix = square(b);
  r.integration_stderr = square(b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const auto e = star_pairing(basis[i], basis[j], k, space, window, opt.samples, mix_seed(opt.seed, i * b + j));
      r.matrix[i][j] = e.value;
      r.integration_stderr[i][j] = e.std_error;
      r.exact = r.exact && e.exact;
    }
  }
  finish(r, b, opt.exact_tol);
  return r;
}

TwoTypeKernel TwoTypeKernel::factorized(Kernel a, Kernel b) {
  TwoTypeKernel t;
  t.terms.emplace_back(std::move(a), std::move(b));
  return t;
}

TwoTypeKernel TwoTypeKernel::lift(const Kernel& g) {
  auto form = g.level_form();
  if (!form || !finite_levels(*form)) {
    throw Error(ErrorCode::InvalidArgument, "only level-exponent sums with finite level support can be lifted");
  }
  TwoTypeKernel t;
  for (const auto& term : *form) {
    const Kernel e = Kernel::lp_exponent(term.factor);
    for (std::size_t n = 0; n < term.weights.support_end(); ++n) {
      const double v = term.weights(n);
      if (v == 0.0) continue;
      for (std::size_t p = 0; p <= n; ++p) {
        t.terms.emplace_back(level_indicator(p) * e, v * (level_indicator(n - p) * e));
      }
    }
  }
  return t;
}

double TwoTypeKernel::operator()(std::span<const PhasePoint> plus, std::span<const PhasePoint> minus) const {
  double s = 0.0;
  for (const auto& [a, b] : terms) s += a(plus) * b(minus);
  return s;
}

GramReport gram_two_type(const Kernel& k1, const Kernel& k2, const std::vector<TwoTypeKernel>& basis,
                         const PhaseSpace& space, const Box& window, const GramOptions& opt) {
  const std::size_t b = basis.size();
  GramReport r;
  r.matrix = square(b);
  r.integration_stderr = square(b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const std::uint64_t entry_seed = mix_seed(opt.seed, i * b + j);
      double value = 0.0;
      double var = 0.0;
      std::uint64_t salt = 0;
      // The two-type cover product acts on each type separately.
      for (const auto& [a, bm] : basis[i].terms) {
        for (const auto& [c, d] : basis[j].terms) {
          const auto x = star_pairing(a, c, k1, space, window, opt.samples, mix_seed(entry_seed, 2 * salt));
          const auto y = star_pairing(bm, d, k2, space, window, opt.samples, mix_seed(entry_seed, 2 * salt + 1));
          ++salt;
          value += x.value * y.value;
          var += std::pow(x.value * y.std_error, 2) + std::pow(y.value * x.std_error, 2);
          r.exact = r.exact && x.exact && y.exact;
        }
      }
      r.matrix[i][j] = value;
      r.integration_stderr[i][j] = std::sqrt(var);
    }
  }
  finish(r, b, opt.exact_tol);
  return r;
}

CritPosdefReport critposdef_check(const Kernel& k1, const Kernel& k2, const std::vector<Kernel>& basis,
                                  const PhaseSpace& space, const Box& window, const GramOptions& opt) {
  std::vector<TwoTypeKernel> lifted;
  for (const auto& g : basis) lifted.push_back(TwoTypeKernel::lift(g));
  CritPosdefReport r;
  r.two_type = gram_two_type(k1, k2, lifted, space, window, opt);
  GramOptions one_opt = opt;
  one_opt.seed = mix_seed(opt.seed, 0x5eed);
  r.one_type = gram_star(Kernel::convolution(k1, k2), basis, space, window, one_opt);
  r.entries_match = true;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double x = r.two_type.matrix[i][j];
      const double y = r.one_type.matrix[i][j];
      const double dev = std::abs(x - y);
      const double sigma = std::hypot(r.two_type.integration_stderr[i][j], r.one_type.integration_stderr[i][j]);
      r.max_entry_deviation = std::max(r.max_entry_deviation, dev);
      if (sigma > 0.0) r.max_entry_sigma = std::max(r.max_entry_sigma, dev / sigma);
      if (dev > 3.0 * sigma + 1e-10 * std::max(1.0, std::abs(y))) r.entries_match = false;
    }
  }
  r.implication_holds = !(r.two_type.psd && !r.one_type.psd);
  return r;
}

std::vector<Kernel> default_basis(const Box& window, std::size_t cells) {
  if (cells == 0) throw Error(ErrorCode::InvalidArgument, "need at least one cell");
  std::vector<Kernel> basis{Kernel::unit_star()};
  const Interval ax = window.axes()[0];
  const double width = (ax.hi - ax.lo) / static_cast<double>(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double lo = ax.lo + width * static_cast<double>(c);
    const double hi = c + 1 == cells ? ax.hi : lo + width;
    basis.push_back(Kernel::singleton(Expr::indicator({Interval{lo, hi}})));
  }
  return basis;
}

std::optional<NegativeControl> negative_control_search(const std::vector<Kernel>& basis, const PhaseSpace& space,
                                                       const Box& window, std::uint64_t seed, std::size_t max_tries,
                                                       const GramOptions& opt) {
  Philox4x32 rng(seed, 0);
  for (std::size_t t = 1; t <= max_tries; ++t) {
    std::vector<double> w{1.0};
    for (int i = 0; i < 3; ++i) w.push_back(4.0 * rng.uniform() - 2.0);
    Kernel k = Kernel::level_weight(w);
    GramReport rep = gram_star(k, basis, space, window, opt);
    if (rep.min_eig < -10.0 * rep.tol) return NegativeControl{std::move(k), std::move(rep), t};
  }
  return std::nullopt;
}

}  // namespace starcalc
