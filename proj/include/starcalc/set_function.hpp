#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "starcalc/geometry.hpp"

namespace starcalc {

class PhaseSpace;

/// Bit i set <=> point i of the ground configuration is selected.
using Mask = std::uint32_t;

/// A finite list of distinct phase points; every set function is tabulated
/// on the subset lattice of one of these.
class GroundConfiguration {
 public:
  static constexpr std::size_t kMaxPoints = 24;

  GroundConfiguration() = default;
  /// Throws DuplicatePoint or TooLarge.
  explicit GroundConfiguration(std::vector<PhasePoint> points);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t subset_count() const noexcept { return std::size_t{1} << points_.size(); }
  const std::vector<PhasePoint>& points() const noexcept { return points_; }
  const PhasePoint& point(std::size_t i) const { return points_.at(i); }

  /// Points selected by `mask`, in ground order.
  std::vector<PhasePoint> select(Mask mask) const;
  void select_into(Mask mask, std::vector<PhasePoint>& out) const;

  /// The ground with point i removed (bit i contracted).
  GroundConfiguration without(std::size_t i) const;

  /// Index of `p` in this ground, or -1.
  int find(const PhasePoint& p) const noexcept;

  friend bool operator==(const GroundConfiguration&, const GroundConfiguration&) = default;

 private:
  std::vector<PhasePoint> points_;
};

/// Builds a ground configuration, additionally requiring every point to lie
/// inside the phase-space box.
GroundConfiguration make_ground(const PhaseSpace& space, std::vector<PhasePoint> points);

using GroundPtr = std::shared_ptr<const GroundConfiguration>;

/// 2^n real values indexed by subsets (masks) of a ground configuration.
class SetFunction {
 public:
  SetFunction(GroundPtr ground, std::vector<double> values);
  SetFunction(GroundConfiguration ground, std::vector<double> values);

  static SetFunction zeros(GroundPtr ground);
  static SetFunction constant(GroundPtr ground, double c);
  /// 1*: value 1 at the empty mask, 0 elsewhere.
  static SetFunction unit(GroundPtr ground);

  const GroundConfiguration& ground() const noexcept { return *ground_; }
  const GroundPtr& ground_ptr() const noexcept { return ground_; }
  std::size_t ground_size() const noexcept { return ground_->size(); }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](Mask m) const { return values_[m]; }
  double at(Mask m) const { return values_.at(m); }
  double empty_value() const noexcept { return values_[0]; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_ground(const SetFunction& other) const noexcept;
  /// Throws GroundMismatch.
  void require_same_ground(const SetFunction& other) const;

  /// Largest absolute value.
  double sup_norm() const noexcept;

  SetFunction& operator+=(const SetFunction& o);
  SetFunction& operator-=(const SetFunction& o);
  SetFunction& operator*=(double s);

  friend SetFunction operator+(SetFunction a, const SetFunction& b) { return a += b; }
  friend SetFunction operator-(SetFunction a, const SetFunction& b) { return a -= b; }
  friend SetFunction operator*(double s, SetFunction a) { return a *= s; }
  friend SetFunction operator*(SetFunction a, double s) { return a *= s; }
  friend SetFunction operator-(SetFunction a) { return a *= -1.0; }

 private:
  void validate() const;

  GroundPtr ground_;
  std::vector<double> values_;
};

/// max_S |a[S] - b[S]|.
double max_abs_diff(const SetFunction& a, const SetFunction& b);
/// max_S |a[S] - b[S]| / max(1, |b[S]|).
double max_rel_diff(const SetFunction& a, const SetFunction& b);

}  // namespace starcalc
