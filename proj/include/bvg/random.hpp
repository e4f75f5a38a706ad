#pragma once

#include <cstdint>

namespace bvg {

// Seeded 64-bit stream (SplitMix64). Substreams are derived from
// (seed, counter), so parallel workers can own independent streams whose
// output does not depend on thread scheduling. The generator is fully
// specified here, which keeps sampled sequences bit-identical across
// platforms and reruns.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(mix(seed + kGamma)) {}

  RandomStream(std::uint64_t seed, std::uint64_t counter)
      : state_(mix(mix(seed + kGamma) + (counter + 1) * kGamma)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on the open interval (0, 1). Endpoints are excluded so the
  // value is safe to push through inverse CDFs with poles at 0 or 1.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return r % n;
  }

  RandomStream substream(std::uint64_t counter) const {
    RandomStream s(0);
    s.state_ = mix(state_0_marker(counter));
    return s;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_0_marker(std::uint64_t counter) const {
    return state_ + (counter + 1) * kGamma;
  }

  std::uint64_t state_;
};

}  // namespace bvg
