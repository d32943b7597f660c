#include "starcalc/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "starcalc/error.hpp"

namespace starcalc {

Box::Box(std::vector<Interval> axes) : axes_(std::move(axes)) {
  for (const auto& a : axes_) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.lo < a.hi)) {
      throw Error(ErrorCode::InvalidArgument, "box axes need finite bounds with a < b");
    }
  }
}

double Box::volume() const noexcept {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.width();
  return v;
}

bool Box::contains(std::span<const double> x) const noexcept {
  if (x.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!axes_[i].contains(x[i])) return false;
  }
  return true;
}

bool Box::contains(const Box& inner) const noexcept {
  if (inner.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (inner.axes_[i].lo < axes_[i].lo || inner.axes_[i].hi > axes_[i].hi) return false;
  }
  return true;
}

Box Box::intersect(const Box& other) const {
  if (other.dim() != dim()) throw Error(ErrorCode::InvalidArgument, "box dimension mismatch");
  Box out;
  out.axes_.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const double lo = std::max(axes_[i].lo, other.axes_[i].lo);
    const double hi = std::max(lo, std::min(axes_[i].hi, other.axes_[i].hi));
    out.axes_.push_back({lo, hi});
  }
  return out;
}

std::vector<Box> Box::slabs(std::size_t cells) const {
  if (cells == 0 || dim() == 0) throw Error(ErrorCode::InvalidArgument, "slab count must be positive");
  std::vector<Box> out;
  const auto& a0 = axes_[0];
  const double step = a0.width() / static_cast<double>(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    auto axes = axes_;
    axes[0].lo = a0.lo + step * static_cast<double>(c);
    axes[0].hi = (c + 1 == cells) ? a0.hi : a0.lo + step * static_cast<double>(c + 1);
    out.emplace_back(std::move(axes));
  }
  return out;
}

bool operator==(const Box& a, const Box& b) noexcept {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.axes_[i].lo != b.axes_[i].lo || a.axes_[i].hi != b.axes_[i].hi) return false;
  }
  return true;
}

}  // namespace starcalc
