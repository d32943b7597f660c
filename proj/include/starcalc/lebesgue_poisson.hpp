#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "starcalc/kernel.hpp"
#include "starcalc/phase_space.hpp"
#include "starcalc/rng.hpp"

namespace starcalc {

/// Streaming mean and variance (Welford); merge() combines two partial
/// results (Chan et al.), so block results can be reduced in a fixed order.
struct RunningStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) noexcept;
  void merge(const RunningStats& o) noexcept;
  double variance() const noexcept { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const noexcept;
};

/// Threads used by Monte Carlo loops: STARCALC_THREADS if set, else the hardware concurrency.
unsigned mc_threads();

/// Mean of `draw` over n samples. Samples are grouped in fixed-size blocks;
/// block b uses the stream Philox4x32(seed, b), and blocks are merged in
/// index order, so the result does not depend on the thread count.
RunningStats mc_run(const std::function<double(Philox4x32&)>& draw, std::size_t n, std::uint64_t seed);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;   // zero iff exact
  std::size_t samples = 0;
  bool exact = false;
  std::uint64_t seed = 0;
  /// e^{z m(window)} applied to sample means (1 for closed forms).
  double normalization = 1.0;
};

struct LPSample {
  std::vector<PhasePoint> points;
  Box window;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Draws configurations from the normalized measure e^{-z m(window)} lambda_z
/// restricted to the window: N ~ Poisson(z m(window)), then N points with
/// density proportional to m.
class LPSampler {
 public:
  /// Throws ZeroMassWindow.
  LPSampler(const PhaseSpace& space, const Box& window);

  void draw(Philox4x32& rng, std::vector<PhasePoint>& out) const;
  std::vector<PhasePoint> draw(Philox4x32& rng) const;

  double mass() const noexcept { return mass_; }
  /// z * m(window).
  double intensity() const noexcept { return intensity_; }
  /// e^{z m(window)}: total lambda_z mass of configurations in the window.
  double normalization() const noexcept { return normalization_; }
  const Box& window() const noexcept { return window_; }

 private:
  const PhaseSpace* space_;
  Box window_;
  double mass_;
  double intensity_;
  double normalization_;
};

LPSample sample_lp(const PhaseSpace& space, const Box& window, std::uint64_t seed, std::uint64_t stream = 0);

/// e^{z m(window)} * mean F(eta).
IntegralEstimate integrate_mc(const Kernel& f, const PhaseSpace& space, const Box& window, std::size_t n_samples,
                              std::uint64_t seed);

/// exp(z * integral of f over the window). Throws QuadratureFailure.
IntegralEstimate integrate_exponent(const Expr& f, const PhaseSpace& space, const Box& window);

/// sum_n w(n) x^n / n!. Throws DivergentSeries when the weights grow too fast.
double level_series(const LevelWeights& w, double x);

/// Closed-form integral of k against lambda_z over the window when k is a
/// level-exponent sum, a convolution or exp* of such kernels, or a product
/// with an exponent factor. Returns nullopt otherwise.
std::optional<double> integrate_closed(const Kernel& k, const PhaseSpace& space, const Box& window);

/// Closed form if available, else Monte Carlo.
IntegralEstimate integrate_kernel(const Kernel& k, const PhaseSpace& space, const Box& window, std::size_t n_samples,
                                  std::uint64_t seed);

/// Two estimates compared by their combined standard error.
struct IdentityReport {
  IntegralEstimate lhs;
  IntegralEstimate rhs;
  double deviation = 0.0;   // |lhs - rhs|
  double sigma = 0.0;       // sqrt(lhs.se^2 + rhs.se^2)
  std::optional<double> closed_lhs;
  std::optional<double> closed_rhs;
  std::size_t overlap_violations = 0;  // sampled pairs that were not disjoint

  bool within(double n_sigma, double exact_tol = 1e-12) const noexcept;
  double closed_residual() const noexcept;
};

/// int H (G1*G2) dlambda against int int H(eta u xi) G1(eta) G2(xi) dlambda dlambda.
IdentityReport minlos_check(const Kernel& h, const Kernel& g1, const Kernel& g2, const PhaseSpace& space,
                            const Box& window, std::size_t n_samples, std::uint64_t seed);

struct MeasureConvolutionReport {
  IdentityReport identity;
  /// (rho1 * rho2) of all configurations inside the window.
  IntegralEstimate window_mass;
  bool window_mass_finite = false;
};

/// k1, k2 act as densities and must be nonnegative (NegativeDensity).
MeasureConvolutionReport measure_convolution_check(const Kernel& k1, const Kernel& k2, const Kernel& g,
                                                   const PhaseSpace& space, const Box& window, std::size_t n_samples,
                                                   std::uint64_t seed);

enum class Method { Auto, ClosedForm, MonteCarlo };

struct GrowthDeclaration {
  double c = 1.0;
  double delta = 0.0;
};

struct BogolyubovOptions {
  Method method = Method::Auto;
  GrowthDeclaration growth{};
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

/// B_k(f) = int e(f) k dlambda. Throws GrowthViolation if delta >= 1.
IntegralEstimate bogolyubov(const Kernel& k, const Expr& f, const PhaseSpace& space, const Box& window,
                            const BogolyubovOptions& opt = {});

struct PositivityReport {
  IntegralEstimate functional;  // B_{exp* u}(f)
  double cumulant_value = 0.0;  // B_u(f)
  double exp_cumulant = 0.0;    // exp(B_u(f))
  double relative_deviation = 0.0;
  bool positive = false;
};

/// Compares B_{exp* u}(f) with exp(B_u(f)). Throws NotInIdeal if u(empty) != 0.
PositivityReport bogolyubov_positivity_check(const Kernel& u, const Expr& f, const PhaseSpace& space,
                                             const Box& window, const BogolyubovOptions& opt = {});

}  // namespace starcalc
