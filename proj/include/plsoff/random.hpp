#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace plsoff {

/// SplitMix64 (Steele, Lea, Flood 2014). Counter-based: the state advances by a
/// fixed odd increment and every output is a bijective mix of the state, so
/// streams are cheap to derive and bit-identical on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of an independent substream identified by (seed, a, b).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
  std::uint64_t z = SplitMix64::mix(seed + 0x9E3779B97F4A7C15ULL);
  z = SplitMix64::mix(z ^ (a * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
  z = SplitMix64::mix(z ^ (b * 0x8CB92BA72F3D8DD7ULL + 0x2545F4914F6CDD1DULL));
  return z;
}

// Distribution transforms. Written out instead of using <random> distributions,
// whose output sequences differ between standard library implementations.

template <class Urbg>
double uniform01(Urbg& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

template <class Urbg>
double uniform(Urbg& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

/// Uniform index in [0, n) by multiply-shift.
template <class Urbg>
std::uint64_t uniform_index(Urbg& g, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(g()) * n) >> 64);
}

/// Standard normal via Box-Muller; consumes two draws, returns one variate.
template <class Urbg>
double standard_normal(Urbg& g) {
  const double u1 = 1.0 - uniform01(g);  // (0, 1]
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <class Urbg>
double exponential(Urbg& g, double mean) {
  return -mean * std::log1p(-uniform01(g));
}

}  // namespace plsoff
