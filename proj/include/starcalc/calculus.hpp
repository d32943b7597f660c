#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "starcalc/set_function.hpp"

namespace starcalc {

/// u^{*n}; u^{*0} is the unit 1*.
SetFunction star_power(const SetFunction& u, unsigned n);

/// sum_n a_n u^{*n} for u(empty) = 0. Terms beyond the ground size vanish
/// and are skipped; missing coefficients count as zero. Throws NotInIdeal.
SetFunction f_star_series(std::span<const double> coeffs, const SetFunction& u);

/// Throws NotInIdeal unless u(empty) = 0.
SetFunction exp_star(const SetFunction& u);
/// Throws NotNormalized unless k(empty) = 1.
SetFunction ln_star(const SetFunction& k);
/// The *-inverse of k with k(empty) = 1. Throws NotNormalized.
SetFunction inv_star(const SetFunction& k);

/// Coefficients 1/n! for n = 0..order.
std::vector<double> exp_coefficients(std::size_t order);

/// Series evaluation on a bare 2^n array (u[0] must be 0).
std::vector<double> series_values(std::span<const double> coeffs, std::span<const double> u, unsigned n);

/// (D_x G)(eta) = G(eta u {x}) for x the i-th ground point; the result lives
/// on the ground with point i removed. Throws IndexOutOfRange.
SetFunction d_x(const SetFunction& g, std::size_t i);
/// G restricted to subsets avoiding point i, on the ground with i removed.
SetFunction restrict_without(const SetFunction& g, std::size_t i);

/// (Nk)(eta) = |eta| k(eta).
SetFunction number_op(const SetFunction& k);

/// A linear operator on set functions, together with the map that carries
/// an untouched operand onto the ground of the operator's output.
struct OperatorHandle {
  std::string name;
  std::function<SetFunction(const SetFunction&)> apply;
  std::function<SetFunction(const SetFunction&)> restrict;

  static OperatorHandle point_derivative(std::size_t i);
  static OperatorHandle number();
  /// Pointwise squaring; fails the Leibniz rule.
  static OperatorHandle square();
  /// `restrict` defaults to the identity.
  static OperatorHandle custom(std::string name, std::function<SetFunction(const SetFunction&)> apply,
                               std::function<SetFunction(const SetFunction&)> restrict = {});
};

struct DerivationReport {
  std::string op;
  double leibniz_residual = 0.0;  // max |B(k1*k2) - (Bk1)*k2 - k1*(Bk2)|
  double unit_residual = 0.0;     // max |B 1*|
  bool holds(double tol) const noexcept { return leibniz_residual <= tol && unit_residual <= tol; }
};

DerivationReport check_derivation(const OperatorHandle& b, const SetFunction& k1, const SetFunction& k2);

}  // namespace starcalc
