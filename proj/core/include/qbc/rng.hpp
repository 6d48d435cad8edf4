// SPDX-License-Identifier: MIT

#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace qbc {

// Deterministic random source, threaded explicitly through every sampling
// operation. Draws are hand-rolled on top of std::mt19937_64 because the
// standard <random> distributions are implementation-defined and the test
// suite freezes exact outcomes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  int next_bit() { return static_cast<int>(gen_() >> 63); }

  // Uniform integer in [0, bound), rejection-sampled over the covering
  // power of two.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const int w = std::bit_width(bound - 1);
    const std::uint64_t mask = (w >= 64) ? ~0ull : ((std::uint64_t{1} << w) - 1);
    for (;;) {
      const std::uint64_t v = gen_() & mask;
      if (v < bound) return v;
    }
  }

  // Uniform width-bit string, 0 <= width <= 63.
  std::uint64_t bits(int width) {
    return width <= 0 ? 0 : (gen_() >> (64 - width));
  }

 private:
  std::mt19937_64 gen_;
};

// Per-trial seed derivation: base + index pushed through one splitmix64 step
// so that neighbouring trials do not share generator prefixes. A single trial
// can be replayed from (base, index) alone.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + index + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace qbc
