#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace shortck {

// SplitMix64 (Steele, Lea, Flood). Streams are keyed by (seed, stream id) so
// every sample index owns an independent, stateless-to-reconstruct sequence.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  SplitMix64(std::uint64_t seed, std::uint64_t stream) : state_(mix(seed ^ mix(stream + kGamma))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in the closed unit disc, by rejection from the square.
  std::complex<double> unit_disc() {
    for (;;) {
      const double x = 2.0 * uniform() - 1.0;
      const double y = 2.0 * uniform() - 1.0;
      if (x * x + y * y <= 1.0) return {x, y};
    }
  }

  // Uniform phase on the unit circle.
  std::complex<double> unit_circle() {
    const double th = 2.0 * M_PI * uniform();
    return {std::cos(th), std::sin(th)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace shortck
