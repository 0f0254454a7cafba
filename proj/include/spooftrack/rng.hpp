#pragma once

#include <cstdint>

namespace stb {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a key tuple into a single 64-bit stream key.
[[nodiscard]] constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag,
                                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ tag);
  k = mix64(k ^ a);
  return mix64(k ^ b);
}

/// Counter-based random stream keyed by (seed, tag, t, index).
///
/// Every draw is a pure function of the key and a draw counter, so streams
/// for different keys never interact and replay is bit-exact on any platform.
/// Distributions are implemented here rather than taken from <random>, whose
/// distribution algorithms are implementation-defined.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t tag, std::uint64_t t, std::uint64_t index)
      : key_(derive_key(seed, tag, t, index)) {}
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one variate per call).
  double normal();
  /// Knuth multiplication method; mean must lie in [0, 700].
  int poisson(double mean);
  bool bernoulli(double p) { return uniform() < p; }

  [[nodiscard]] std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream tags used across the pipeline.
namespace stream {
inline constexpr std::uint64_t kClutterIndex = 1ULL << 40;
inline constexpr std::uint64_t kSpoof = 0x5350'4f4fULL;
inline constexpr std::uint64_t kBirth = 0x4249'5254ULL;
inline constexpr std::uint64_t kRunSeed = 0x5255'4e53ULL;
}  // namespace stream

}  // namespace stb
