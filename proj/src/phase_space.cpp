#include "starcalc/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "starcalc/error.hpp"

namespace starcalc {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr std::uint64_t kQuadMcSeed = 0x5eedC0FFEEull;
constexpr std::size_t kQuadMcSamples = std::size_t{1} << 20;

struct AxisPieces {
  std::vector<std::vector<double>> cuts;  // per axis, sorted, including window ends
};

AxisPieces pieces_for(const Expr& f, const Expr& density, const Box& window) {
  AxisPieces p;
  for (std::size_t a = 0; a < window.dim(); ++a) {
    std::vector<double> bp;
    f.collect_breakpoints(a, bp);
    density.collect_breakpoints(a, bp);
    const auto& iv = window.axis(a);
    std::vector<double> cuts = {iv.lo, iv.hi};
    for (double b : bp) {
      if (b > iv.lo && b < iv.hi) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    p.cuts.push_back(std::move(cuts));
  }
  return p;
}

class NestedQuadrature {
 public:
  NestedQuadrature(std::function<double(std::span<const double>)> f, AxisPieces pieces)
      : f_(std::move(f)), pieces_(std::move(pieces)), x_(pieces_.cuts.size()) {}

  double run(double& error, double& l1) { return axis(0, error, l1); }

 private:
  double axis(std::size_t a, double& error, double& l1) {
    using boost::math::quadrature::gauss_kronrod;
    if (a == x_.size()) {
      const double v = f_(x_);
      l1 = std::abs(v);
      return v;
    }
    double total = 0.0;
    const auto& cuts = pieces_.cuts[a];
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double piece_err = 0.0, piece_l1 = 0.0, inner_err_acc = 0.0;
      auto g = [&](double t) {
        x_[a] = t;
        double inner_err = 0.0, inner_l1 = 0.0;
        const double v = axis(a + 1, inner_err, inner_l1);
        inner_err_acc = std::max(inner_err_acc, inner_err);
        return v;
      };
      total += gauss_kronrod<double, 15>::integrate(g, cuts[i], cuts[i + 1], 15, 1e-13, &piece_err, &piece_l1);
      error += piece_err + inner_err_acc * (cuts[i + 1] - cuts[i]);
      l1 += piece_l1;
    }
    return total;
  }

  std::function<double(std::span<const double>)> f_;
  AxisPieces pieces_;
  std::vector<double> x_;
};

}  // namespace

PhaseSpace::PhaseSpace(Box box, double activity, Expr density)
    : box_(std::move(box)), activity_(activity), density_(std::move(density)) {
  if (box_.dim() == 0) throw Error(ErrorCode::InvalidArgument, "phase space needs at least one axis");
  if (!(activity_ > 0.0) || !std::isfinite(activity_)) {
    throw Error(ErrorCode::InvalidArgument, "activity z must be positive and finite");
  }
  if (density_.arity() > dim()) throw Error(ErrorCode::InvalidArgument, "density refers to axes beyond the phase space");
  const Interval range = density_.bound(box_);
  if (range.lo < 0.0) {
    // The enclosure is conservative; look for an actual negative value on a grid.
    const std::size_t per_axis = dim() <= 3 ? 17 : 5;
    std::vector<std::size_t> idx(dim(), 0);
    std::vector<double> x(dim());
    for (;;) {
      for (std::size_t a = 0; a < dim(); ++a) {
        const auto& iv = box_.axis(a);
        x[a] = iv.lo + iv.width() * static_cast<double>(idx[a]) / static_cast<double>(per_axis - 1);
      }
      if (density_(x) < 0.0) throw Error(ErrorCode::NegativeDensity, "intensity density is negative somewhere on the box");
      std::size_t a = 0;
      while (a < dim() && ++idx[a] == per_axis) idx[a++] = 0;
      if (a == dim()) break;
    }
  }
}

PhaseSpace PhaseSpace::with_activity(double z) const { return PhaseSpace(box_, z, density_); }

void PhaseSpace::check_window(const Box& window) const {
  if (!box_.contains(window)) throw Error(ErrorCode::InvalidArgument, "window must be a sub-box of the phase space");
}

double PhaseSpace::mass(const Box& window) const {
  check_window(window);
  if (auto c = density_.constant_value()) return *c * window.volume();
  return integrate(Expr::constant(1.0), window).value;
}

QuadratureResult PhaseSpace::integrate(const Expr& f, const Box& window) const {
  check_window(window);
  if (f.arity() > dim()) throw Error(ErrorCode::InvalidArgument, "integrand refers to axes beyond the phase space");
  auto fc = f.constant_value();
  auto dc = density_.constant_value();
  if (fc && dc) return {*fc * *dc * window.volume(), 0.0, false};

  std::function<double(std::span<const double>)> integrand;
  if (dc) {
    integrand = [&f, d = *dc](std::span<const double> x) { return d * f(x); };
  } else {
    integrand = [&f, this](std::span<const double> x) { return f(x) * density_(x); };
  }

  if (dim() > kMaxQuadratureDim) {
    Philox4x32 rng(kQuadMcSeed);
    std::vector<double> x(dim());
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < kQuadMcSamples; ++i) {
      for (std::size_t a = 0; a < dim(); ++a) {
        x[a] = window.axis(a).lo + window.axis(a).width() * rng.uniform();
      }
      const double v = integrand(x);
      const double delta = v - mean;
      mean += delta / static_cast<double>(i + 1);
      m2 += delta * (v - mean);
    }
    const double n = static_cast<double>(kQuadMcSamples);
    const double vol = window.volume();
    return {vol * mean, vol * std::sqrt(m2 / (n - 1) / n), true};
  }

  NestedQuadrature q(integrand, pieces_for(f, density_, window));
  double error = 0.0, l1 = 0.0;
  const double value = q.run(error, l1);
  if (!std::isfinite(value) || error > kQuadTol * std::max(1.0, l1)) {
    throw Error(ErrorCode::QuadratureFailure, "adaptive quadrature did not reach the requested accuracy");
  }
  return {value, error, false};
}

PhasePoint PhaseSpace::sample_point(const Box& window, Philox4x32& rng) const {
  std::vector<double> x(dim());
  auto draw = [&] {
    for (std::size_t a = 0; a < dim(); ++a) x[a] = window.axis(a).lo + window.axis(a).width() * rng.uniform();
  };
  if (uniform_density()) {
    draw();
    return PhasePoint(x);
  }
  const double cap = density_.bound(window).hi;
  if (!std::isfinite(cap) || !(cap > 0.0)) {
    throw Error(ErrorCode::ZeroMassWindow, "density has no finite positive upper bound on the window");
  }
  constexpr std::size_t kMaxAttempts = 10'000'000;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    draw();
    if (rng.uniform() * cap < density_(x)) return PhasePoint(x);
  }
  throw Error(ErrorCode::IntegrationBudgetExceeded, "rejection sampling of the intensity density did not accept");
}

}  // namespace starcalc
