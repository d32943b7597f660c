#pragma once

#include <span>
#include <vector>

#include "starcalc/set_function.hpp"

namespace starcalc {

/// Array-level engines. Every span holds 2^n values indexed by mask.
namespace raw {

void conv_naive(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n);
void conv_ranked(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n);
/// Dispatches to conv_naive below the crossover.
void conv(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n);

void star_naive(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n);
void star_fast(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n);

void zeta_inplace(std::span<double> v, unsigned n);
void mobius_inplace(std::span<double> v, unsigned n);

}  // namespace raw

/// conv_fast falls back to the O(3^n) loop for n below this value.
unsigned conv_crossover() noexcept;
void set_conv_crossover(unsigned n) noexcept;

SetFunction conv_naive(const SetFunction& k1, const SetFunction& k2);
SetFunction conv_fast(const SetFunction& k1, const SetFunction& k2);

SetFunction star_naive(const SetFunction& g1, const SetFunction& g2);
SetFunction star_fast(const SetFunction& g1, const SetFunction& g2);

SetFunction zeta(const SetFunction& k);
SetFunction mobius(const SetFunction& k);

/// Function of a pair (plus-configuration, minus-configuration). Values are
/// row-major with the plus-mask as the major index.
class TwoTypeSetFunction {
 public:
  TwoTypeSetFunction(GroundPtr plus, GroundPtr minus, std::vector<double> values);

  /// Outer product a(plus) * b(minus).
  static TwoTypeSetFunction factorized(const SetFunction& a, const SetFunction& b);
  static TwoTypeSetFunction unit(GroundPtr plus, GroundPtr minus);

  const GroundConfiguration& plus() const noexcept { return *plus_; }
  const GroundConfiguration& minus() const noexcept { return *minus_; }
  const GroundPtr& plus_ptr() const noexcept { return plus_; }
  const GroundPtr& minus_ptr() const noexcept { return minus_; }

  std::size_t index(Mask s_plus, Mask s_minus) const noexcept {
    return (static_cast<std::size_t>(s_plus) << minus_->size()) | s_minus;
  }
  double at(Mask s_plus, Mask s_minus) const { return values_.at(index(s_plus, s_minus)); }
  std::span<const double> values() const noexcept { return values_; }

  bool same_grounds(const TwoTypeSetFunction& o) const noexcept;

 private:
  GroundPtr plus_;
  GroundPtr minus_;
  std::vector<double> values_;
};

TwoTypeSetFunction two_type_star(const TwoTypeSetFunction& g1, const TwoTypeSetFunction& g2);
/// Direct enumeration of cover pairs in both coordinates.
TwoTypeSetFunction two_type_star_naive(const TwoTypeSetFunction& g1, const TwoTypeSetFunction& g2);

/// (S+, S-) -> G(S+ u S-), where plus and minus partition the ground of G.
TwoTypeSetFunction lift_two_type(const SetFunction& g, GroundPtr plus, GroundPtr minus);

}  // namespace starcalc
