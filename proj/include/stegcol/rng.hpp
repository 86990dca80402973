#pragma once

#include <cstdint>
#include <initializer_list>

namespace stegcol {

/// SplitMix64 finalizer. Used both as the stream generator and as the
/// avalanche function that turns key tuples into independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Folds a tuple of integers into a single 64-bit key. Order matters.
std::uint64_t mix_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) noexcept;

/// Small deterministic random stream (SplitMix64 sequence).
///
/// Streams are cheap to create; code that must be independent of evaluation
/// order creates one stream per (purpose, index...) key via mix_key.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) noexcept : state_(key) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Standard normal draw (Box-Muller, one value per call).
  double normal() noexcept;

  bool coin() noexcept { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace stegcol
