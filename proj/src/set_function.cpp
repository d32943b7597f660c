#include "starcalc/set_function.hpp"

#include <algorithm>
#include <cmath>

#include "starcalc/error.hpp"
#include "starcalc/phase_space.hpp"

namespace starcalc {

GroundConfiguration::GroundConfiguration(std::vector<PhasePoint> points) : points_(std::move(points)) {
  if (points_.size() > kMaxPoints) {
    throw Error(ErrorCode::TooLarge, "ground configuration has " + std::to_string(points_.size()) +
                                         " points, the limit is " + std::to_string(kMaxPoints));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].dim() != points_[0].dim()) throw Error(ErrorCode::InvalidArgument, "points of mixed dimension");
    for (double c : points_[i].coords) {
      if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "point coordinates must be finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (points_[i] == points_[j]) {
        throw Error(ErrorCode::DuplicatePoint, "points " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
      }
    }
  }
}

std::vector<PhasePoint> GroundConfiguration::select(Mask mask) const {
  std::vector<PhasePoint> out;
  select_into(mask, out);
  return out;
}

void GroundConfiguration::select_into(Mask mask, std::vector<PhasePoint>& out) const {
  out.clear();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (mask >> i & 1u) out.push_back(points_[i]);
  }
}

GroundConfiguration GroundConfiguration::without(std::size_t i) const {
  if (i >= points_.size()) throw Error(ErrorCode::IndexOutOfRange, "point index out of range");
  auto pts = points_;
  pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
  return GroundConfiguration(std::move(pts));
}

int GroundConfiguration::find(const PhasePoint& p) const noexcept {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == p) return static_cast<int>(i);
  }
  return -1;
}

GroundConfiguration make_ground(const PhaseSpace& space, std::vector<PhasePoint> points) {
  for (const auto& p : points) {
    if (!space.contains(p)) throw Error(ErrorCode::InvalidArgument, "ground point lies outside the phase-space box");
  }
  return GroundConfiguration(std::move(points));
}

SetFunction::SetFunction(GroundPtr ground, std::vector<double> values)
    : ground_(std::move(ground)), values_(std::move(values)) {
  if (!ground_) throw Error(ErrorCode::InvalidArgument, "set function needs a ground configuration");
  validate();
}

SetFunction::SetFunction(GroundConfiguration ground, std::vector<double> values)
    : SetFunction(std::make_shared<const GroundConfiguration>(std::move(ground)), std::move(values)) {}

void SetFunction::validate() const {
  if (values_.size() != ground_->subset_count()) {
    throw Error(ErrorCode::InvalidArgument, "set function needs exactly 2^n values (n = " +
                                                std::to_string(ground_->size()) + "), got " +
                                                std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "set function values must be finite");
  }
}

SetFunction SetFunction::zeros(GroundPtr ground) {
  const std::size_t n = ground->subset_count();
  return SetFunction(std::move(ground), std::vector<double>(n, 0.0));
}

SetFunction SetFunction::constant(GroundPtr ground, double c) {
  const std::size_t n = ground->subset_count();
  return SetFunction(std::move(ground), std::vector<double>(n, c));
}

SetFunction SetFunction::unit(GroundPtr ground) {
  std::vector<double> v(ground->subset_count(), 0.0);
  v[0] = 1.0;
  return SetFunction(std::move(ground), std::move(v));
}

bool SetFunction::same_ground(const SetFunction& other) const noexcept {
  return ground_ == other.ground_ || *ground_ == *other.ground_;
}

void SetFunction::require_same_ground(const SetFunction& other) const {
  if (!same_ground(other)) throw Error(ErrorCode::GroundMismatch, "set functions live on different ground configurations");
}

double SetFunction::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SetFunction& SetFunction::operator+=(const SetFunction& o) {
  require_same_ground(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  validate();
  return *this;
}

SetFunction& SetFunction::operator-=(const SetFunction& o) {
  require_same_ground(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  validate();
  return *this;
}

SetFunction& SetFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  validate();
  return *this;
}

double max_abs_diff(const SetFunction& a, const SetFunction& b) {
  a.require_same_ground(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double max_rel_diff(const SetFunction& a, const SetFunction& b) {
  a.require_same_ground(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a.values()[i] - b.values()[i]) / std::max(1.0, std::abs(b.values()[i]));
    m = std::max(m, d);
  }
  return m;
}

}  // namespace starcalc
