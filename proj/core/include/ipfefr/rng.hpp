#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>

namespace ipfefr {

// Deterministic randomness source for the whole library. Every randomized
// operation takes an Rng&; a fixed seed reproduces every artifact bit for bit
// (the pinned wire vectors depend on this). The core generator is
// std::mt19937_64, whose output sequence — including std::seed_seq expansion —
// is pinned by the C++ standard, so streams are portable across platforms.
class Rng {
 public:
  explicit Rng(const std::array<uint8_t, 32>& seed);
  explicit Rng(uint64_t seed);

  // Accepts 1..64 hex digits naming the 32-byte seed; shorter strings are
  // zero-extended on the right. Errc::usage on malformed input.
  static Rng from_hex(std::string_view hex);

  uint64_t next_u64();

  // Uniform in [0, bound), bound >= 1. Unbiased (rejection sampling).
  uint64_t below(uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double unit();

  // Standard normal deviate (Box-Muller; one spare cached).
  double normal();

  // Independent child stream with a caller-chosen tag. Used to give
  // sub-computations stable stream identities.
  Rng fork(uint64_t tag);

  // Fill a byte buffer (used for key material).
  void fill_bytes(uint8_t* out, size_t len);

 private:
  std::mt19937_64 gen_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ipfefr
