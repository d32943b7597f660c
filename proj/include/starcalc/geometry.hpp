#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace starcalc {

/// A point of the phase space. Coordinates are dimensionless model units.
struct PhasePoint {
  std::vector<double> coords;

  PhasePoint() = default;
  PhasePoint(std::initializer_list<double> c) : coords(c) {}
  explicit PhasePoint(std::vector<double> c) : coords(std::move(c)) {}

  std::size_t dim() const noexcept { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }

  // Exact coordinate equality; configurations are sets, not multisets.
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Axis-aligned box, one closed interval per axis.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> axes);

  std::size_t dim() const noexcept { return axes_.size(); }
  const Interval& axis(std::size_t i) const { return axes_[i]; }
  std::span<const Interval> axes() const noexcept { return axes_; }

  double volume() const noexcept;
  bool contains(std::span<const double> x) const noexcept;
  bool contains(const PhasePoint& p) const noexcept { return contains(p.coords); }
  bool contains(const Box& inner) const noexcept;

  /// Empty (zero-volume) intersections are reported as std::nullopt by callers;
  /// here a degenerate box is returned with lo == hi on some axis.
  Box intersect(const Box& other) const;

  /// Splits axis 0 into `cells` slabs of equal width.
  std::vector<Box> slabs(std::size_t cells) const;

  friend bool operator==(const Box& a, const Box& b) noexcept;

 private:
  std::vector<Interval> axes_;
};

}  // namespace starcalc
