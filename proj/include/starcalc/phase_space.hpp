#pragma once

#include <cstdint>
#include <vector>

#include "starcalc/expr.hpp"
#include "starcalc/geometry.hpp"
#include "starcalc/rng.hpp"

namespace starcalc {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;      // estimated absolute error
  bool monte_carlo = false; // true above three dimensions
};

/// Box phase space X with intensity measure m = density * Lebesgue and
/// activity z. Together these define the Lebesgue-Poisson measure.
class PhaseSpace {
 public:
  /// Deterministic quadrature is used up to this dimension.
  static constexpr std::size_t kMaxQuadratureDim = 3;

  PhaseSpace(Box box, double activity, Expr density = Expr::constant(1.0));

  std::size_t dim() const noexcept { return box_.dim(); }
  const Box& box() const noexcept { return box_; }
  const Expr& density() const noexcept { return density_; }
  double activity() const noexcept { return activity_; }
  bool uniform_density() const noexcept { return density_.constant_value().has_value(); }

  PhaseSpace with_activity(double z) const;

  /// Throws unless `window` is a sub-box of the phase space.
  void check_window(const Box& window) const;
  bool contains(const PhasePoint& p) const noexcept { return box_.contains(p); }

  /// m(window).
  double mass(const Box& window) const;
  double mass() const { return mass(box_); }

  /// Integral of f with respect to m over `window`.
  QuadratureResult integrate(const Expr& f, const Box& window) const;

  /// Draws one point with density proportional to m on `window`
  /// (rejection against an interval bound of the density).
  PhasePoint sample_point(const Box& window, Philox4x32& rng) const;

 private:
  Box box_;
  double activity_;
  Expr density_;
};

}  // namespace starcalc
