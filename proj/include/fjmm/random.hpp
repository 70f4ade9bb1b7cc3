#pragma once

#include <cstdint>
#include <random>

namespace fjmm {

/// Seeded generator with a platform-independent mapping to doubles and
/// bounded integers (std distributions differ between standard libraries).
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64; u=(x>>11)*2^-53; ints by rejection";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound). bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  int below(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fjmm
