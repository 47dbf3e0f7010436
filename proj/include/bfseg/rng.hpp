#pragma once

#include <cstdint>

namespace bfseg {

/// Counter-based generator: draw c of a stream with key K is the SplitMix64
/// finalizer applied to K + (c + 1) * 0x9E3779B97F4A7C15. Streams derive from a
/// parent key with split(), so sub-generators never overlap and results are
/// identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * kGamma);
  }

  CounterRng split(std::uint64_t stream) const noexcept {
    CounterRng child(0);
    child.key_ = mix(key_ ^ mix(stream + kGamma));
    return child;
  }

  std::uint64_t next() noexcept { return at(counter_++); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller; consumes two draws.
  double normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bfseg
