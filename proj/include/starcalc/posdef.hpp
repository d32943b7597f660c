#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starcalc/kernel.hpp"
#include "starcalc/lebesgue_poisson.hpp"
#include "starcalc/phase_space.hpp"

namespace starcalc {

using Matrix = std::vector<std::vector<double>>;

struct GramOptions {
  std::size_t samples = 20000;  // per Monte Carlo entry
  std::uint64_t seed = 5;
  /// Eigenvalue tolerance for exact entries.
  double exact_tol = 1e-8;
};

struct GramReport {
  Matrix matrix;                  // symmetrized
  Matrix integration_stderr;      // zero for exact entries
  std::vector<double> eigenvalues;  // ascending
  double min_eig = 0.0;
  double tol = 0.0;
  double max_asymmetry = 0.0;     // before symmetrization
  bool exact = true;
  bool psd = false;
  /// A finite basis can only refute positive definiteness.
  std::string verdict;
};

/// int (G1 * G2)(eta) k(eta) dlambda with the cover product. Closed form when
/// all three kernels are level-exponent sums and G1, G2 have finite level
/// support; Monte Carlo with cover enumeration otherwise.
IntegralEstimate star_pairing(const Kernel& g1, const Kernel& g2, const Kernel& k, const PhaseSpace& space,
                              const Box& window, std::size_t samples, std::uint64_t seed);

/// M[i][j] = int (G_i * G_j) k dlambda, with the cover product.
GramReport gram_star(const Kernel& k, const std::vector<Kernel>& basis, const PhaseSpace& space, const Box& window,
                     const GramOptions& opt = {});

/// sum_t A_t(eta+) B_t(eta-).
struct TwoTypeKernel {
  std::vector<std::pair<Kernel, Kernel>> terms;

  static TwoTypeKernel factorized(Kernel a, Kernel b);
  /// G(eta+ u eta-) for G a level-exponent sum with finite level support.
  /// Throws InvalidArgument otherwise.
  static TwoTypeKernel lift(const Kernel& g);
  double operator()(std::span<const PhasePoint> plus, std::span<const PhasePoint> minus) const;
};

/// M[i][j] = int int (G_i x G_j)(eta+, eta-) k1(eta+) k2(eta-) dlambda dlambda,
/// with the two-type cover product.
GramReport gram_two_type(const Kernel& k1, const Kernel& k2, const std::vector<TwoTypeKernel>& basis,
                         const PhaseSpace& space, const Box& window, const GramOptions& opt = {});

struct CritPosdefReport {
  GramReport two_type;  // k1 x k2 against the lifted basis
  GramReport one_type;  // k1 * k2 against the basis
  double max_entry_deviation = 0.0;
  double max_entry_sigma = 0.0;  // deviation in combined standard errors
  bool entries_match = false;
  bool implication_holds = false;  // not (two-type psd and one-type not psd)
};

CritPosdefReport critposdef_check(const Kernel& k1, const Kernel& k2, const std::vector<Kernel>& basis,
                                  const PhaseSpace& space, const Box& window, const GramOptions& opt = {});

/// The unit plus singleton indicators of `cells` equal slabs of the window along axis 0.
std::vector<Kernel> default_basis(const Box& window, std::size_t cells = 4);

struct NegativeControl {
  Kernel kernel;
  GramReport report;
  std::size_t tries = 0;
};

/// Random level-weight kernels with k(empty) = 1 until one has
/// min_eig < -10 tol against the basis.
std::optional<NegativeControl> negative_control_search(const std::vector<Kernel>& basis, const PhaseSpace& space,
                                                       const Box& window, std::uint64_t seed,
                                                       std::size_t max_tries = 200, const GramOptions& opt = {});

}  // namespace starcalc
