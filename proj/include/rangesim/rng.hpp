#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace rangesim {

// Seeded generator with a platform-independent output sequence.
//
// std::mt19937_64 is fully specified by the standard, but the standard
// distributions are not, so uniform() and below() are derived here from the
// raw 64-bit output. Every call to either counts as exactly one draw; the
// counter lets callers audit draw budgets.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for a named stage. Streams for different names never
  // share state, so adding a stage does not perturb existing ones.
  static Rng substream(std::uint64_t seed, std::string_view name) {
    return Rng(splitmix64(seed ^ fnv1a(name)));
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform index in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    auto index = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return index < n ? index : n - 1;
  }

  // u < p; p = 0 never holds and p = 1 always holds.
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t draws() const noexcept { return draws_; }

  static constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
      hash ^= c;
      hash *= 0x100000001B3ULL;
    }
    return hash;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace rangesim
