#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starcalc/kernel.hpp"
#include "starcalc/lebesgue_poisson.hpp"
#include "starcalc/phase_space.hpp"
#include "starcalc/set_function.hpp"

namespace starcalc {

/// Weight parameters of the growth spaces: level n carries C^n (n!)^delta.
struct NormParams {
  double c = 1.0;
  double delta = 0.0;

  NormParams() = default;
  /// Throws InvalidArgument unless C > 0 and delta >= 0.
  NormParams(double c, double delta);
};

/// max over masks with |S| <= max_level of |k[S]| / (C^{|S|} (|S|!)^delta).
double k_norm_estimate(const SetFunction& k, const NormParams& p, std::size_t max_level = 24);

struct ProbeOptions {
  std::size_t max_level = 12;
  std::size_t probes = 64;   // random configurations per level
  std::uint64_t seed = 7;
};

/// Lower bound of the sup norm from probe configurations. Probes for level n
/// come from the stream (seed, n) in a fixed order, so raising `probes` only
/// adds configurations and never lowers the estimate.
double k_norm_estimate(const Kernel& k, const NormParams& p, const PhaseSpace& space, const ProbeOptions& opt = {});

struct LNormReport {
  IntegralEstimate estimate;            // truncated level sum
  std::vector<double> level_terms;      // contribution of each level
  double tail = 0.0;                    // first omitted level term
  std::optional<bool> finite;           // series verdict when decidable
};

/// int |G| C^{|eta|} (|eta|!)^delta dlambda_z over configurations in the window.
/// Exact for single level-exponent terms; Monte Carlo per level otherwise.
/// Throws GrowthViolation when the level series is known to diverge.
LNormReport l_norm(const Kernel& g, const NormParams& p, const PhaseSpace& space, const Box& window,
                   std::size_t max_level = 30, std::size_t samples_per_level = 20000, std::uint64_t seed = 11);

/// Series verdict for a single level-exponent term, nullopt if undecidable.
std::optional<bool> l_norm_finite(const Kernel& g, const NormParams& p, const PhaseSpace& space, const Box& window);

enum class YoungVariant { Y1, Y2, Y3, Y4, Y5, Cor1 };

const char* to_string(YoungVariant v) noexcept;
YoungVariant young_variant_from_string(const std::string& s);

struct YoungParams {
  double c1 = 1.0;
  double delta1 = 0.0;
  double c2 = 1.0;
  double delta2 = 0.0;
  /// Target weight for Y3 (C' > C1) and Y5 (C >= 2).
  double c_target = 2.0;
  std::size_t n_max = 30;
};

struct YoungReport {
  YoungVariant variant = YoungVariant::Y1;
  std::vector<double> lhs_per_level;  // normalized sup ratio at each cardinality
  double rhs_bound = 0.0;
  double max_ratio = 0.0;
  bool satisfied = false;
  std::string description;
};

/// Per-level ratios for the extremal inputs k_i = C_i^n (n!)^{delta_i}
/// (or the constant 1 for bounded inputs), against the variant's bound.
/// Throws HypothesisViolated.
YoungReport young_check(YoungVariant variant, const YoungParams& p);

enum class PowerCase { Subfactorial, Factorial, Bounded };

struct PowerParams {
  double c = 1.0;
  double delta = 0.0;
  unsigned n_power = 2;
  double c_prime = 2.0;  // target weight in the factorial and bounded cases
  std::size_t n_max = 30;
  bool bounded = false;  // witness k = 1 measured in the sup norm
};

/// Norm of the n-th *-power of the extremal witness against the bound of the
/// power estimate. Throws HypothesisViolated.
YoungReport power_norm_check(const PowerParams& p);

/// log of sum_k binom(n,k) C1^k (k!)^{d1} C2^{n-k} ((n-k)!)^{d2}.
double log_level_convolution(std::size_t n, double c1, double d1, double c2, double d2);

/// log of sum over compositions n = n_1 + ... + n_p of multinomial^{1-delta}.
double log_power_composition_sum(std::size_t n, unsigned p, double delta);

}  // namespace starcalc
