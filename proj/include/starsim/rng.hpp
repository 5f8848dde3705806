// SPDX-License-Identifier: Apache-2.0
//
// Deterministic, splittable random streams for the Monte Carlo engine.
//
// A Stream is a 64-bit Weyl sequence pushed through the splitmix64 finalizer.
// The initial state is a hash of (seed, stream id), so any (sweep point,
// trial block) pair can be mapped to its own statistically independent
// stream no matter which worker thread consumes it. Draw sequences are
// bit-reproducible across platforms and worker counts; Gaussians use
// Box-Muller (no rejection), so every draw consumes a fixed number of
// words from the stream.

#pragma once

#include <complex>
#include <cstdint>

namespace starsim::rng {

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double();

  /// Uniform on [a, b).
  double uniform(double a, double b);

  /// Uniform angle on [0, 2*pi).
  double angle();

  /// Fair coin.
  bool coin();

  /// Circularly symmetric complex Gaussian, E|z|^2 = 1 (consumes 2 words).
  std::complex<double> complex_gaussian();

 private:
  std::uint64_t state_;
};

/// Stable stream id for a (sweep point, trial block) pair.
constexpr std::uint64_t stream_id(std::uint32_t point, std::uint32_t block) {
  return (static_cast<std::uint64_t>(point) << 32) | block;
}

}  // namespace starsim::rng
