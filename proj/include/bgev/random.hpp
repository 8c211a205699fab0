#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bgev {

/// splitmix64 finalizer; used to derive independent stream seeds from
/// (seed, index) pairs so that serial and parallel runs draw identical numbers.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Seeded 64-bit Mersenne twister with a portable open-interval uniform.
///
/// std::uniform_real_distribution is implementation-defined, so the mapping
/// to (0, 1) is done by hand: 53 random bits, offset by half an ulp.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  [[nodiscard]] double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; only used for synthetic test/demo series
  [[nodiscard]] double normal() {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bgev
