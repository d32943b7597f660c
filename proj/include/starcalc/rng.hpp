#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace starcalc {

/// Philox4x32-10 counter-based generator. A (seed, stream) pair names an
/// independent sequence, so parallel workers derive their streams from one
/// master seed and merged results do not depend on the thread count.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  static constexpr const char* kName = "philox4x32-10";

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
};

/// SplitMix64 finalizer; used to derive child seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

}  // namespace starcalc
