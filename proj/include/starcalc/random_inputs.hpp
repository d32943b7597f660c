#pragma once

#include <cstdint>
#include <optional>

#include "starcalc/expr.hpp"
#include "starcalc/rng.hpp"
#include "starcalc/set_function.hpp"

namespace starcalc {

/// Random inputs for property checks. Every generator consumes only the
/// given stream, so a (seed, stream) pair fixes the whole input.
namespace gen {

double uniform(Philox4x32& rng, double lo, double hi);
std::size_t index(Philox4x32& rng, std::size_t n);  // uniform in [0, n)

/// n distinct points uniform in [0,1]^dim.
GroundPtr ground(Philox4x32& rng, std::size_t n, std::size_t dim = 1);

/// Values uniform in [lo, hi]; the empty set gets `empty` when given.
SetFunction set_function(Philox4x32& rng, const GroundPtr& g, double lo, double hi,
                         std::optional<double> empty = std::nullopt);

/// Integer values in [-range, range], exactly representable.
SetFunction integer_set_function(Philox4x32& rng, const GroundPtr& g, int range);

/// c0 + c1 x0 + c2 x0^2 (+ c3 x1 in two dimensions) with c_i in [lo, hi].
Expr polynomial(Philox4x32& rng, std::size_t dim, double lo, double hi);

}  // namespace gen

}  // namespace starcalc
