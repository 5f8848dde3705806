// SPDX-License-Identifier: Apache-2.0

#include "starsim/rng.hpp"

#include <cmath>

namespace starsim::rng {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t id)
    : state_(mix(mix(seed + kGamma) ^ mix(id * kGamma + 1))) {}

std::uint64_t Stream::next_u64() {
  state_ += kGamma;
  return mix(state_);
}

double Stream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform(double a, double b) { return a + (b - a) * next_double(); }

double Stream::angle() { return uniform(0.0, 2.0 * 3.14159265358979323846); }

bool Stream::coin() { return (next_u64() & 1ull) != 0; }

std::complex<double> Stream::complex_gaussian() {
  // |z|^2 ~ Exp(1), phase uniform: z = sqrt(-ln u1) e^{j 2 pi u2}.
  const double u1 = 1.0 - next_double();  // (0, 1], keeps the log finite
  const double u2 = next_double();
  const double r = std::sqrt(-std::log(u1));
  const double th = 2.0 * 3.14159265358979323846 * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace starsim::rng
