#pragma once

#include <bit>
#include <cstdint>

#include "ipfefr/errors.hpp"

namespace ipfefr {

using u128 = unsigned __int128;
using i128 = __int128;

// Scalar arithmetic modulo m for m up to 2^64 - 1. Inputs are expected reduced
// (< m); intermediates widen to 128 bits so no operation can overflow.

inline uint64_t mod_reduce(uint64_t a, uint64_t m) { return a % m; }

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t m) {
  uint64_t s = a + b;
  // `s < a` detects wraparound past 2^64; in both that case and s >= m a single
  // subtraction of m lands in [0, m) because a, b < m implies a + b < 2m.
  if (s < a || s >= m) s -= m;
  return s;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t m) {
  return a >= b ? a - b : m - b + a;
}

inline uint64_t neg_mod(uint64_t a, uint64_t m) { return a == 0 ? 0 : m - a; }

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

inline uint64_t pow_mod(uint64_t base, uint64_t e, uint64_t m) {
  if (m == 1) return 0;
  uint64_t acc = 1;
  uint64_t b = base % m;
  while (e > 0) {
    if (e & 1) acc = mul_mod(acc, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return acc;
}

// Modular inverse via the extended Euclidean algorithm. Errc::no_solution when
// gcd(a, m) != 1.
inline uint64_t inv_mod(uint64_t a, uint64_t m) {
  require(m > 1, Errc::no_solution, "inverse modulo 0 or 1");
  a %= m;
  i128 t = 0, new_t = 1;
  i128 r = static_cast<i128>(m), new_r = static_cast<i128>(a);
  while (new_r != 0) {
    i128 quot = r / new_r;
    i128 tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  require(r == 1, Errc::no_solution, "element not invertible");
  if (t < 0) t += static_cast<i128>(m);
  return static_cast<uint64_t>(t);
}

// Centered representative of a mod m in (-m/2, m/2].
inline int64_t center_mod(uint64_t a, uint64_t m) {
  if (a > m / 2) {
    uint64_t d = m - a;
    return -static_cast<int64_t>(d);
  }
  return static_cast<int64_t>(a);
}

inline uint64_t from_signed(int64_t v, uint64_t m) {
  if (v >= 0) return static_cast<uint64_t>(v) % m;
  uint64_t mag = static_cast<uint64_t>(-(v + 1)) + 1;  // avoids INT64_MIN UB
  uint64_t r = mag % m;
  return r == 0 ? 0 : m - r;
}

// Deterministic Miller-Rabin; the base set below decides primality correctly
// for all 64-bit integers.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                      29ull, 31ull, 37ull}) {
    if (n == sp) return true;
    if (n % sp == 0) return false;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline uint64_t next_prime(uint64_t n) {
  if (n <= 2) return 2;
  if ((n & 1) == 0) ++n;
  while (!is_prime_u64(n)) {
    require(n <= UINT64_MAX - 2, Errc::bound_exceeded, "next_prime overflow");
    n += 2;
  }
  return n;
}

// Number of bits needed to represent values in [0, p): ceil(log2 p).
inline uint32_t bits_for_modulus(uint64_t p) {
  require(p >= 2, Errc::params_invalid, "modulus must be >= 2");
  return static_cast<uint32_t>(std::bit_width(p - 1));
}

}  // namespace ipfefr
