#include "starcalc/calculus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "starcalc/error.hpp"
#include "starcalc/transforms.hpp"

namespace starcalc {

namespace {

SetFunction on_ground(const SetFunction& proto, std::vector<double> v) {
  return SetFunction(proto.ground_ptr(), std::move(v));
}

void require_ideal(const SetFunction& u) {
  if (u.empty_value() != 0.0) throw Error(ErrorCode::NotInIdeal, "argument must vanish at the empty configuration");
}

void require_normalized(const SetFunction& k) {
  if (k.empty_value() != 1.0) throw Error(ErrorCode::NotNormalized, "argument must equal 1 at the empty configuration");
}

// Inserts a zero bit at position i.
inline Mask expand(Mask m, std::size_t i) noexcept {
  const Mask low = m & ((Mask{1} << i) - 1);
  const Mask high = (m >> i) << (i + 1);
  return high | low;
}

SetFunction contract(const SetFunction& g, std::size_t i, bool with_point) {
  if (i >= g.ground_size()) throw Error(ErrorCode::IndexOutOfRange, "point index out of range");
  auto ground = std::make_shared<const GroundConfiguration>(g.ground().without(i));
  std::vector<double> v(ground->subset_count());
  const Mask bit = with_point ? Mask{1} << i : 0;
  for (std::size_t m = 0; m < v.size(); ++m) v[m] = g[expand(static_cast<Mask>(m), i) | bit];
  return SetFunction(std::move(ground), std::move(v));
}

}  // namespace

SetFunction star_power(const SetFunction& u, unsigned n) {
  SetFunction result = SetFunction::unit(u.ground_ptr());
  if (n == 0) return result;
  if (u.empty_value() == 0.0 && n > u.ground_size()) return SetFunction::zeros(u.ground_ptr());
  SetFunction base = u;
  bool first = true;
  while (n > 0) {
    if (n & 1u) {
      result = first ? base : conv_fast(result, base);
      first = false;
    }
    n >>= 1;
    if (n > 0) base = conv_fast(base, base);
  }
  return result;
}

std::vector<double> series_values(std::span<const double> coeffs, std::span<const double> u, unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> acc(size, 0.0);
  if (coeffs.empty()) return acc;
  const std::size_t top = std::min<std::size_t>(coeffs.size() - 1, n);
  // Horner: acc = a_top; acc = u * acc + a_j for j = top-1 .. 0.
  acc[0] = coeffs[top];
  std::vector<double> tmp(size);
  for (std::size_t j = top; j-- > 0;) {
    raw::conv(u, acc, tmp, n);
    tmp[0] += coeffs[j];
    acc.swap(tmp);
  }
  return acc;
}

SetFunction f_star_series(std::span<const double> coeffs, const SetFunction& u) {
  require_ideal(u);
  return on_ground(u, series_values(coeffs, u.values(), static_cast<unsigned>(u.ground_size())));
}

std::vector<double> exp_coefficients(std::size_t order) {
  std::vector<double> c(order + 1);
  double f = 1.0;
  for (std::size_t j = 0; j <= order; ++j) {
    if (j > 0) f *= static_cast<double>(j);
    c[j] = 1.0 / f;
  }
  return c;
}

SetFunction exp_star(const SetFunction& u) {
  require_ideal(u);
  return f_star_series(exp_coefficients(u.ground_size()), u);
}

SetFunction ln_star(const SetFunction& k) {
  require_normalized(k);
  const std::size_t n = k.ground_size();
  std::vector<double> c(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) c[j] = (j % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(j);
  std::vector<double> bar(k.values().begin(), k.values().end());
  bar[0] = 0.0;
  return on_ground(k, series_values(c, bar, static_cast<unsigned>(n)));
}

SetFunction inv_star(const SetFunction& k) {
  require_normalized(k);
  const std::size_t n = k.ground_size();
  std::vector<double> c(n + 1);
  for (std::size_t j = 0; j <= n; ++j) c[j] = j % 2 == 0 ? 1.0 : -1.0;
  std::vector<double> bar(k.values().begin(), k.values().end());
  bar[0] = 0.0;
  return on_ground(k, series_values(c, bar, static_cast<unsigned>(n)));
}

SetFunction d_x(const SetFunction& g, std::size_t i) { return contract(g, i, true); }

SetFunction restrict_without(const SetFunction& g, std::size_t i) { return contract(g, i, false); }

SetFunction number_op(const SetFunction& k) {
  std::vector<double> v(k.values().begin(), k.values().end());
  for (std::size_t m = 0; m < v.size(); ++m) v[m] *= static_cast<double>(std::popcount(m));
  return on_ground(k, std::move(v));
}

OperatorHandle OperatorHandle::point_derivative(std::size_t i) {
  return {"d_x(" + std::to_string(i) + ")", [i](const SetFunction& g) { return d_x(g, i); },
          [i](const SetFunction& g) { return restrict_without(g, i); }};
}

OperatorHandle OperatorHandle::number() {
  return {"number", [](const SetFunction& g) { return number_op(g); }, [](const SetFunction& g) { return g; }};
}

OperatorHandle OperatorHandle::square() {
  return {"square",
          [](const SetFunction& g) {
            std::vector<double> v(g.values().begin(), g.values().end());
            for (double& x : v) x *= x;
            return SetFunction(g.ground_ptr(), std::move(v));
          },
          [](const SetFunction& g) { return g; }};
}

OperatorHandle OperatorHandle::custom(std::string name, std::function<SetFunction(const SetFunction&)> apply,
                                      std::function<SetFunction(const SetFunction&)> restrict) {
  if (!restrict) restrict = [](const SetFunction& g) { return g; };
  return {std::move(name), std::move(apply), std::move(restrict)};
}

DerivationReport check_derivation(const OperatorHandle& b, const SetFunction& k1, const SetFunction& k2) {
  k1.require_same_ground(k2);
  const SetFunction lhs = b.apply(conv_fast(k1, k2));
  const SetFunction rhs = conv_fast(b.apply(k1), b.restrict(k2)) + conv_fast(b.restrict(k1), b.apply(k2));
  DerivationReport r;
  r.op = b.name;
  r.leibniz_residual = max_abs_diff(lhs, rhs);
  r.unit_residual = b.apply(SetFunction::unit(k1.ground_ptr())).sup_norm();
  return r;
}

}  // namespace starcalc
