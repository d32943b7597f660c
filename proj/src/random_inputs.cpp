#include "starcalc/random_inputs.hpp"

#include <algorithm>

namespace starcalc::gen {

double uniform(Philox4x32& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

std::size_t index(Philox4x32& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

GroundPtr ground(Philox4x32& rng, std::size_t n, std::size_t dim) {
  std::vector<PhasePoint> pts;
  while (pts.size() < n) {
    std::vector<double> c(dim);
    for (auto& x : c) x = rng.uniform();
    PhasePoint p(std::move(c));
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(std::move(p));
  }
  return std::make_shared<const GroundConfiguration>(std::move(pts));
}

SetFunction set_function(Philox4x32& rng, const GroundPtr& g, double lo, double hi, std::optional<double> empty) {
  std::vector<double> v(g->subset_count());
  for (auto& x : v) x = uniform(rng, lo, hi);
  if (empty) v[0] = *empty;
  return SetFunction(g, std::move(v));
}

SetFunction integer_set_function(Philox4x32& rng, const GroundPtr& g, int range) {
  std::vector<double> v(g->subset_count());
  for (auto& x : v) x = static_cast<double>(static_cast<int>(index(rng, 2 * range + 1)) - range);
  return SetFunction(g, std::move(v));
}

Expr polynomial(Philox4x32& rng, std::size_t dim, double lo, double hi) {
  const Expr x0 = Expr::coord(0);
  Expr e = Expr::constant(uniform(rng, lo, hi)) + Expr::constant(uniform(rng, lo, hi)) * x0 +
           Expr::constant(uniform(rng, lo, hi)) * pow(x0, 2);
  if (dim > 1) e = e + Expr::constant(uniform(rng, lo, hi)) * Expr::coord(1);
  return e;
}

}  // namespace starcalc::gen
