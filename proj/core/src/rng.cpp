#include "ipfefr/rng.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "ipfefr/errors.hpp"

namespace ipfefr {

namespace {

std::mt19937_64 make_from_words(const std::array<uint8_t, 32>& seed) {
  // seed_seq consumes 32-bit words; split the 32 bytes little-endian.
  std::array<uint32_t, 8> words{};
  for (size_t i = 0; i < 8; ++i) {
    uint32_t w = 0;
    for (size_t j = 0; j < 4; ++j) {
      w |= static_cast<uint32_t>(seed[i * 4 + j]) << (8 * j);
    }
    words[i] = w;
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(const std::array<uint8_t, 32>& seed) : gen_(make_from_words(seed)) {}

Rng::Rng(uint64_t seed) : gen_(seed) {}

Rng Rng::from_hex(std::string_view hex) {
  require(!hex.empty() && hex.size() <= 64, Errc::usage,
          "seed must be 1..64 hex digits");
  std::array<uint8_t, 32> seed{};
  for (size_t i = 0; i < hex.size(); ++i) {
    char c = hex[i];
    uint8_t nib;
    if (c >= '0' && c <= '9') nib = static_cast<uint8_t>(c - '0');
    else if (c >= 'a' && c <= 'f') nib = static_cast<uint8_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') nib = static_cast<uint8_t>(c - 'A' + 10);
    else fail(Errc::usage, "seed contains a non-hex character");
    // Nibble i lands in byte i/2, high nibble first within the byte.
    if (i % 2 == 0) seed[i / 2] = static_cast<uint8_t>(nib << 4);
    else seed[i / 2] |= nib;
  }
  return Rng(seed);
}

uint64_t Rng::next_u64() { return gen_(); }

uint64_t Rng::below(uint64_t bound) {
  require(bound >= 1, Errc::bound_exceeded, "below(0)");
  if (bound == 1) return 0;
  // Accept draws >= 2^64 mod bound; the remainder is then exactly uniform.
  uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u1 = 1.0 - unit();  // (0, 1]
  double u2 = unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

Rng Rng::fork(uint64_t tag) {
  uint64_t base = next_u64();
  // splitmix-style finalizer decorrelates (base, tag) pairs.
  uint64_t z = base + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return Rng(z);
}

void Rng::fill_bytes(uint8_t* out, size_t len) {
  size_t i = 0;
  while (i < len) {
    uint64_t w = next_u64();
    for (int j = 0; j < 8 && i < len; ++j, ++i) {
      out[i] = static_cast<uint8_t>(w >> (8 * j));
    }
  }
}

}  // namespace ipfefr
