#pragma once

#include <cstdint>
#include <random>

namespace cuckoo_prf {

inline constexpr std::uint64_t kMixC1 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kMixC2 = 0xD1B54A32D192ED03ull;

// The 64-bit finalizer used by the mix64 PRG, the lazily sampled random
// functions and per-trial seed derivation. Bit-exact; changing it changes
// every recorded experiment.
constexpr std::uint64_t mix64(std::uint64_t v) {
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

// Seed for (trial, stream) of an experiment with master seed `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  return mix64(mix64(mix64(seed ^ kMixC1) ^ trial) ^ (stream * kMixC2 + 1));
}

// Randomness source for sampling keys. Only raw 64-bit words of the
// underlying engine are used (the engine's output sequence is fixed by the
// standard, distribution objects are not), so sampling is reproducible
// across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() {
    ++words_;
    return engine_();
  }

  // Uniform value of `bits` bits (0 ≤ bits ≤ 64).
  std::uint64_t bits(unsigned bits) {
    if (bits == 0)
      return 0;
    const std::uint64_t w = next_u64();
    return bits >= 64 ? w : (w >> (64 - bits));
  }

  // Uniform integer in [0, bound), bound ≥ 1, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1)
      return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t w;
    do {
      w = next_u64();
    } while (w >= limit);
    return w % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Number of 64-bit words consumed so far.
  std::uint64_t words_consumed() const { return words_; }

private:
  std::mt19937_64 engine_;
  std::uint64_t words_ = 0;
};

} // namespace cuckoo_prf
