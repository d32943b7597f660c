#include "starcalc/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <bit>

#include "starcalc/error.hpp"

namespace starcalc {

namespace {

std::atomic<unsigned> g_crossover{8};

inline unsigned popcount(std::size_t m) noexcept { return static_cast<unsigned>(std::popcount(m)); }

void require_sizes(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  if (a.size() != size || b.size() != size || out.size() != size) {
    throw Error(ErrorCode::InvalidArgument, "array length does not match 2^n");
  }
}

// Ranked zeta transform in mask-major triangular storage: entry (T, k) for
// k <= |T| lives at off[T] + k.
std::vector<double> ranked_zeta(std::span<const double> a, const std::vector<std::size_t>& off, unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> r(off[size], 0.0);
  for (std::size_t t = 0; t < size; ++t) r[off[t] + popcount(t)] = a[t];
  for (unsigned i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t t = 0; t < size; ++t) {
      if (!(t & bit)) continue;
      const std::size_t u = t ^ bit;
      const unsigned ku = popcount(u);
      double* dst = &r[off[t]];
      const double* src = &r[off[u]];
      for (unsigned k = 0; k <= ku; ++k) dst[k] += src[k];
    }
  }
  return r;
}

SetFunction make_like(const SetFunction& proto, std::vector<double> values) {
  return SetFunction(proto.ground_ptr(), std::move(values));
}

}  // namespace

namespace raw {

void conv_naive(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n) {
  require_sizes(a, b, out, n);
  const std::size_t size = std::size_t{1} << n;
  for (std::size_t s = 0; s < size; ++s) {
    double acc = 0.0;
    for (std::size_t sub = s;; sub = (sub - 1) & s) {
      acc += a[sub] * b[s ^ sub];
      if (sub == 0) break;
    }
    out[s] = acc;
  }
}

void conv_ranked(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n) {
  require_sizes(a, b, out, n);
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::size_t> off(size + 1, 0);
  for (std::size_t t = 0; t < size; ++t) off[t + 1] = off[t] + popcount(t) + 1;

  const std::vector<double> fa = ranked_zeta(a, off, n);
  const std::vector<double> fb = ranked_zeta(b, off, n);

  std::vector<unsigned char> pc(size);
  for (std::size_t t = 0; t < size; ++t) pc[t] = static_cast<unsigned char>(popcount(t));
  std::vector<double> level(size);
  for (unsigned k = 0; k <= n; ++k) {
    for (std::size_t t = 0; t < size; ++t) {
      const unsigned c = pc[t];
      if (c > k || 2 * c < k) {
        level[t] = 0.0;
        continue;
      }
      // j ranges over ranks with j <= c and k - j <= c.
      const unsigned lo = k > c ? k - c : 0;
      const double* pa = &fa[off[t]];
      const double* pb = &fb[off[t]];
      double acc = 0.0;
      for (unsigned j = lo; j <= c; ++j) acc += pa[j] * pb[k - j];
      level[t] = acc;
    }
    mobius_inplace(level, n);
    for (std::size_t s = 0; s < size; ++s) {
      if (pc[s] == k) out[s] = level[s];
    }
  }
}

void conv(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n) {
  if (n < conv_crossover()) {
    conv_naive(a, b, out, n);
  } else {
    conv_ranked(a, b, out, n);
  }
}

void star_naive(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n) {
  require_sizes(a, b, out, n);
  const std::size_t size = std::size_t{1} << n;
  for (std::size_t s = 0; s < size; ++s) {
    double acc = 0.0;
    // First part x1 ranges over subsets of s; the second is (s \ x1) plus any subset of x1.
    for (std::size_t x1 = s;; x1 = (x1 - 1) & s) {
      const std::size_t rest = s ^ x1;
      for (std::size_t extra = x1;; extra = (extra - 1) & x1) {
        acc += a[x1] * b[rest | extra];
        if (extra == 0) break;
      }
      if (x1 == 0) break;
    }
    out[s] = acc;
  }
}

void star_fast(std::span<const double> a, std::span<const double> b, std::span<double> out, unsigned n) {
  require_sizes(a, b, out, n);
  std::vector<double> za(a.begin(), a.end());
  std::vector<double> zb(b.begin(), b.end());
  zeta_inplace(za, n);
  zeta_inplace(zb, n);
  for (std::size_t i = 0; i < za.size(); ++i) za[i] *= zb[i];
  mobius_inplace(za, n);
  std::copy(za.begin(), za.end(), out.begin());
}

void zeta_inplace(std::span<double> v, unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  for (unsigned i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t base = 0; base < size; base += 2 * bit) {
      double* hi = v.data() + base + bit;
      const double* lo = v.data() + base;
      for (std::size_t j = 0; j < bit; ++j) hi[j] += lo[j];
    }
  }
}

void mobius_inplace(std::span<double> v, unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  for (unsigned i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t base = 0; base < size; base += 2 * bit) {
      double* hi = v.data() + base + bit;
      const double* lo = v.data() + base;
      for (std::size_t j = 0; j < bit; ++j) hi[j] -= lo[j];
    }
  }
}

}  // namespace raw

unsigned conv_crossover() noexcept { return g_crossover.load(std::memory_order_relaxed); }
void set_conv_crossover(unsigned n) noexcept { g_crossover.store(n, std::memory_order_relaxed); }

SetFunction conv_naive(const SetFunction& k1, const SetFunction& k2) {
  k1.require_same_ground(k2);
  std::vector<double> out(k1.size());
  raw::conv_naive(k1.values(), k2.values(), out, static_cast<unsigned>(k1.ground_size()));
  return make_like(k1, std::move(out));
}

SetFunction conv_fast(const SetFunction& k1, const SetFunction& k2) {
  k1.require_same_ground(k2);
  std::vector<double> out(k1.size());
  raw::conv(k1.values(), k2.values(), out, static_cast<unsigned>(k1.ground_size()));
  return make_like(k1, std::move(out));
}

SetFunction star_naive(const SetFunction& g1, const SetFunction& g2) {
  g1.require_same_ground(g2);
  std::vector<double> out(g1.size());
  raw::star_naive(g1.values(), g2.values(), out, static_cast<unsigned>(g1.ground_size()));
  return make_like(g1, std::move(out));
}

SetFunction star_fast(const SetFunction& g1, const SetFunction& g2) {
  g1.require_same_ground(g2);
  std::vector<double> out(g1.size());
  raw::star_fast(g1.values(), g2.values(), out, static_cast<unsigned>(g1.ground_size()));
  return make_like(g1, std::move(out));
}

SetFunction zeta(const SetFunction& k) {
  std::vector<double> v(k.values().begin(), k.values().end());
  raw::zeta_inplace(v, static_cast<unsigned>(k.ground_size()));
  return make_like(k, std::move(v));
}

SetFunction mobius(const SetFunction& k) {
  std::vector<double> v(k.values().begin(), k.values().end());
  raw::mobius_inplace(v, static_cast<unsigned>(k.ground_size()));
  return make_like(k, std::move(v));
}

TwoTypeSetFunction::TwoTypeSetFunction(GroundPtr plus, GroundPtr minus, std::vector<double> values)
    : plus_(std::move(plus)), minus_(std::move(minus)), values_(std::move(values)) {
  if (!plus_ || !minus_) throw Error(ErrorCode::InvalidArgument, "two-type function needs both ground configurations");
  for (const auto& p : plus_->points()) {
    if (minus_->find(p) >= 0) throw Error(ErrorCode::OverlappingGrounds, "plus and minus grounds share a point");
  }
  if (plus_->size() + minus_->size() > GroundConfiguration::kMaxPoints) {
    throw Error(ErrorCode::TooLarge, "combined two-type ground exceeds the mask width");
  }
  if (values_.size() != plus_->subset_count() * minus_->subset_count()) {
    throw Error(ErrorCode::InvalidArgument, "two-type function needs exactly 2^(n+ + n-) values");
  }
}

TwoTypeSetFunction TwoTypeSetFunction::factorized(const SetFunction& a, const SetFunction& b) {
  std::vector<double> v(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) v[i * b.size() + j] = a.values()[i] * b.values()[j];
  }
  return TwoTypeSetFunction(a.ground_ptr(), b.ground_ptr(), std::move(v));
}

TwoTypeSetFunction TwoTypeSetFunction::unit(GroundPtr plus, GroundPtr minus) {
  std::vector<double> v(plus->subset_count() * minus->subset_count(), 0.0);
  v[0] = 1.0;
  return TwoTypeSetFunction(std::move(plus), std::move(minus), std::move(v));
}

bool TwoTypeSetFunction::same_grounds(const TwoTypeSetFunction& o) const noexcept {
  return (plus_ == o.plus_ || *plus_ == *o.plus_) && (minus_ == o.minus_ || *minus_ == *o.minus_);
}

TwoTypeSetFunction two_type_star(const TwoTypeSetFunction& g1, const TwoTypeSetFunction& g2) {
  if (!g1.same_grounds(g2)) throw Error(ErrorCode::GroundMismatch, "two-type functions live on different grounds");
  // The product of the two subset lattices is the subset lattice of the
  // concatenated mask (S+ << n-) | S-, so the cover product applies as is.
  const auto n = static_cast<unsigned>(g1.plus().size() + g1.minus().size());
  std::vector<double> out(g1.values().size());
  raw::star_fast(g1.values(), g2.values(), out, n);
  return TwoTypeSetFunction(g1.plus_ptr(), g1.minus_ptr(), std::move(out));
}

TwoTypeSetFunction two_type_star_naive(const TwoTypeSetFunction& g1, const TwoTypeSetFunction& g2) {
  if (!g1.same_grounds(g2)) throw Error(ErrorCode::GroundMismatch, "two-type functions live on different grounds");
  const Mask full_p = static_cast<Mask>(g1.plus().subset_count() - 1);
  const Mask full_m = static_cast<Mask>(g1.minus().subset_count() - 1);
  std::vector<double> out(g1.values().size(), 0.0);
  // Covers of a set s: pairs (x1, x2) with x1 u x2 = s, listed as x1 and the extra overlap.
  auto covers = [](Mask s, auto&& body) {
    for (Mask x1 = s;; x1 = (x1 - 1) & s) {
      for (Mask extra = x1;; extra = (extra - 1) & x1) {
        body(x1, (s ^ x1) | extra);
        if (extra == 0) break;
      }
      if (x1 == 0) break;
    }
  };
  for (Mask sp = 0; sp <= full_p; ++sp) {
    for (Mask sm = 0; sm <= full_m; ++sm) {
      double acc = 0.0;
      covers(sp, [&](Mask p1, Mask p2) {
        covers(sm, [&](Mask m1, Mask m2) { acc += g1.at(p1, m1) * g2.at(p2, m2); });
      });
      out[g1.index(sp, sm)] = acc;
    }
  }
  return TwoTypeSetFunction(g1.plus_ptr(), g1.minus_ptr(), std::move(out));
}

TwoTypeSetFunction lift_two_type(const SetFunction& g, GroundPtr plus, GroundPtr minus) {
  for (const auto& p : plus->points()) {
    if (minus->find(p) >= 0) throw Error(ErrorCode::OverlappingGrounds, "plus and minus grounds share a point");
  }
  const auto& ground = g.ground();
  if (plus->size() + minus->size() != ground.size()) {
    throw Error(ErrorCode::GroundMismatch, "plus and minus grounds must partition the ground of the lifted function");
  }
  auto bits_of = [&](const GroundConfiguration& part) {
    std::vector<Mask> bits;
    for (const auto& p : part.points()) {
      const int idx = ground.find(p);
      if (idx < 0) throw Error(ErrorCode::GroundMismatch, "sub-configuration point is not in the ground");
      bits.push_back(Mask{1} << idx);
    }
    return bits;
  };
  const auto pbits = bits_of(*plus);
  const auto mbits = bits_of(*minus);
  auto union_mask = [](const std::vector<Mask>& bits, Mask s) {
    Mask m = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (s >> i & 1u) m |= bits[i];
    }
    return m;
  };
  std::vector<double> v(plus->subset_count() * minus->subset_count());
  const std::size_t nm = minus->subset_count();
  for (std::size_t sp = 0; sp < plus->subset_count(); ++sp) {
    const Mask up = union_mask(pbits, static_cast<Mask>(sp));
    for (std::size_t sm = 0; sm < nm; ++sm) v[sp * nm + sm] = g[up | union_mask(mbits, static_cast<Mask>(sm))];
  }
  return TwoTypeSetFunction(std::move(plus), std::move(minus), std::move(v));
}

}  // namespace starcalc
