#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "starcalc/calculus.hpp"
#include "starcalc/kernel.hpp"
#include "starcalc/lebesgue_poisson.hpp"
#include "starcalc/norms.hpp"
#include "starcalc/phase_space.hpp"
#include "starcalc/set_function.hpp"

namespace starcalc {

/// (Ak)(eta) = (a*k)(eta). The multipliers 1 and (-1)^{|eta|} are routed to
/// the zeta and Mobius transforms. Throws GroundMismatch.
SetFunction mult_operator(const SetFunction& a, const SetFunction& k);

/// (A'G)(eta) = int G(eta u xi) a(xi) dlambda(xi) over configurations xi in
/// the window. Exact when a is the unit or G is a sum of constant-weight
/// exponents and the a-integrals close; Monte Carlo otherwise.
IntegralEstimate predual_apply(const Kernel& a, const Kernel& g, std::span<const PhasePoint> eta,
                               const PhaseSpace& space, const Box& window, std::size_t n_samples = 100000,
                               std::uint64_t seed = 3);

/// <<A'G, k>> against <<G, Ak>>.
IdentityReport duality_check(const Kernel& a, const Kernel& g, const Kernel& k, const PhaseSpace& space,
                             const Box& window, std::size_t n_samples, std::uint64_t seed);

struct ResolventOptions {
  std::size_t max_terms = 200;
  /// Relative margin above the sufficient bound 2 ||a||_sup on |z|.
  double margin = 0.1;
};

struct ResolventResult {
  SetFunction solution;
  std::size_t terms = 0;
  double residual = 0.0;  // ||(z - A) R k - k||_sup
};

/// sum_n z^{-(n+1)} a^{*n} * k. Throws InvalidArgument for z = 0 and
/// DivergentSeries when a(empty) != 0 and |z| is below the bound or the
/// series has not settled after max_terms.
ResolventResult resolvent(const SetFunction& a, const SetFunction& k, double z, const ResolventOptions& opt = {});

struct EvolutionResult {
  double time = 0.0;
  SetFunction solution;
  std::size_t truncation_terms = 0;
  double tail_bound = 0.0;  // sup norm of the first omitted term
};

/// k_t = exp*(t a) * k0. Exact when a(empty) = 0. Throws InvalidArgument for
/// t < 0 and DivergentSeries.
EvolutionResult evolve(const SetFunction& a, const SetFunction& k0, double t, std::size_t max_terms = 400);

/// Centered difference (k_{t+h} - k_{t-h}) / 2h against A k_t, divided by max(1, ||A k_t||).
double ode_residual(const SetFunction& a, const SetFunction& k0, double t, double h);

/// e(t sigma) * k0 tabulated on the ground.
SetFunction evolve_singleton(const Expr& sigma, const Kernel& k0, double t, GroundPtr ground);
SetFunction evolve_singleton(const Expr& sigma, const Kernel& k0, double t, const GroundConfiguration& ground);

struct NormGrowthReport {
  std::vector<double> times;
  std::vector<double> norms;
  std::optional<double> exit_time;  // first time the norm exceeds the bound
};

/// Probed K_{C',0} norm of e(c0 + t sigma) on a time grid.
NormGrowthReport norm_growth_time(const Expr& sigma, double c0, double c_prime, double bound, const PhaseSpace& space,
                                  double t_max, double dt, const ProbeOptions& probes = {});

struct CumulantEvolutionReport {
  double deviation = 0.0;  // ||ln*(k_t) - u_t||_sup
  double time = 0.0;
  std::size_t steps = 0;
  unsigned order = 0;
  SetFunction k_t;
  SetFunction u_t;
};

/// Integrates dk/dt = Bk from exp*(u0) and du/dt = Bu from u0 with the same
/// explicit Taylor scheme of the given order (order 2 is the midpoint rule).
/// Throws NotInIdeal unless u0(empty) = 0.
CumulantEvolutionReport cumulant_evolution_check(const OperatorHandle& b, const SetFunction& u0, double t,
                                                 std::size_t steps, unsigned order = 8);

/// An operator on kernels, evaluated at a configuration.
struct DualOperator {
  std::string name;
  std::function<double(const Kernel&, std::span<const PhasePoint>)> apply;

  /// |eta| G(eta).
  static DualOperator number();
  /// G(eta)^2; violates the sum rule.
  static DualOperator square();
};

using ConfigurationPair = std::pair<std::vector<PhasePoint>, std::vector<PhasePoint>>;

struct DualSumReport {
  std::string op;
  std::vector<double> residuals;
  double max_residual = 0.0;
};

/// (B'G)(eta u xi) - (B'G(. u xi))(eta) - (B'G(. u eta))(xi) per pair.
/// Throws OverlappingConfigurations.
DualSumReport dual_sum_check(const DualOperator& dual, const Kernel& g, std::span<const ConfigurationPair> pairs);

}  // namespace starcalc
