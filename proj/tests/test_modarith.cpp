#include <doctest.h>

#include <cstdint>

#include "ipfefr/modarith.hpp"
#include "ipfefr/rng.hpp"

using namespace ipfefr;

namespace {
// Independent reference for modular product via 128-bit widening.
uint64_t mul_oracle(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<u128>(a) * b) % m);
}
}  // namespace

TEST_SUITE("modarith") {

TEST_CASE("add/sub/neg handle wraparound at the top of the u64 range") {
  const uint64_t m = 18446744073709551557ull;  // largest prime below 2^64
  CHECK(add_mod(m - 1, m - 2, m) == m - 3);    // a + b overflows u64
  CHECK(add_mod(0, 0, m) == 0);
  CHECK(add_mod(m - 1, 1, m) == 0);
  CHECK(sub_mod(0, 1, m) == m - 1);
  CHECK(sub_mod(5, 5, m) == 0);
  CHECK(neg_mod(0, m) == 0);
  CHECK(neg_mod(1, m) == m - 1);

  Rng rng(uint64_t{101});
  for (int i = 0; i < 2000; ++i) {
    uint64_t a = rng.below(m), b = rng.below(m);
    uint64_t s = add_mod(a, b, m);
    CHECK(s < m);
    CHECK(sub_mod(s, b, m) == a);
  }
}

TEST_CASE("mul_mod matches the 128-bit oracle across moduli sizes") {
  Rng rng(uint64_t{7});
  const uint64_t mods[] = {2, 97, 4294967311ull, 18446744073709551557ull};
  for (uint64_t m : mods) {
    for (int i = 0; i < 500; ++i) {
      uint64_t a = rng.below(m), b = rng.below(m);
      CHECK(mul_mod(a, b, m) == mul_oracle(a, b, m));
    }
  }
}

TEST_CASE("pow_mod agrees with iterated multiplication") {
  CHECK(pow_mod(2, 10, 1000) == 24);
  CHECK(pow_mod(5, 0, 7) == 1);
  CHECK(pow_mod(0, 5, 7) == 0);
  Rng rng(uint64_t{11});
  const uint64_t m = 1000003;
  for (int i = 0; i < 200; ++i) {
    uint64_t a = rng.below(m);
    uint64_t e = rng.below(50);
    uint64_t want = 1;
    for (uint64_t j = 0; j < e; ++j) want = mul_oracle(want, a, m);
    CHECK(pow_mod(a, e, m) == want);
  }
}

TEST_CASE("inv_mod produces true inverses and rejects non-units") {
  const uint64_t p = 1000003;
  Rng rng(uint64_t{13});
  for (int i = 0; i < 300; ++i) {
    uint64_t a = 1 + rng.below(p - 1);
    CHECK(mul_mod(a, inv_mod(a, p), p) == 1);
  }
  CHECK(inv_mod(1, 2) == 1);
  CHECK_THROWS_AS(inv_mod(0, p), Error);
  CHECK_THROWS_AS(inv_mod(6, 9), Error);  // gcd 3
  try {
    inv_mod(6, 9);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_solution);
  }
}

TEST_CASE("center_mod maps to the interval (-m/2, m/2]") {
  CHECK(center_mod(0, 7) == 0);
  CHECK(center_mod(3, 7) == 3);
  CHECK(center_mod(4, 7) == -3);
  CHECK(center_mod(6, 7) == -1);
  CHECK(center_mod(4, 8) == 4);  // even modulus: upper endpoint included
  CHECK(center_mod(5, 8) == -3);
  for (uint64_t m : {3ull, 8ull, 1000003ull}) {
    for (uint64_t v = 0; v < 20 && v < m; ++v) {
      int64_t c = center_mod(v, m);
      CHECK(2 * c > -static_cast<int64_t>(m));  // c in (-m/2, m/2]
      CHECK(2 * c <= static_cast<int64_t>(m));
      CHECK(from_signed(c, m) == v);
    }
  }
}

TEST_CASE("from_signed reduces negatives, including INT64_MIN") {
  CHECK(from_signed(-1, 7) == 6);
  CHECK(from_signed(0, 7) == 0);
  CHECK(from_signed(13, 7) == 6);
  const uint64_t p = 1000003;
  i128 r = static_cast<i128>(INT64_MIN) % static_cast<i128>(p);
  if (r < 0) r += p;
  CHECK(from_signed(INT64_MIN, p) == static_cast<uint64_t>(r));
  CHECK(from_signed(INT64_MAX, p) ==
        static_cast<uint64_t>(static_cast<i128>(INT64_MAX) % static_cast<i128>(p)));
}

TEST_CASE("primality testing is exact on known primes, composites, pseudoprimes") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK(is_prime_u64(5));
  CHECK(is_prime_u64(7));
  CHECK(is_prime_u64(2305843009213693951ull));  // 2^61 - 1
  CHECK(is_prime_u64(4294967311ull));           // first prime above 2^32
  CHECK(is_prime_u64(18446744073709551557ull));
  CHECK_FALSE(is_prime_u64(0));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(4));
  CHECK_FALSE(is_prime_u64(561));         // Carmichael
  CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to 2,3,5,7
  CHECK_FALSE(is_prime_u64(3825123056546413051ull));  // spsp to 2..23
}

TEST_CASE("next_prime returns the smallest prime at or above the input") {
  CHECK(next_prime(0) == 2);
  CHECK(next_prime(2) == 2);
  CHECK(next_prime(3) == 3);
  CHECK(next_prime(4) == 5);
  CHECK(next_prime(10) == 11);
  CHECK(next_prime(4294967296ull) == 4294967311ull);
  uint64_t p = next_prime(577327936);
  CHECK(is_prime_u64(p));
  for (uint64_t v = 577327936; v < p; ++v) CHECK_FALSE(is_prime_u64(v));
}

TEST_CASE("bits_for_modulus is ceil(log2 p)") {
  CHECK(bits_for_modulus(2) == 1);
  CHECK(bits_for_modulus(3) == 2);
  CHECK(bits_for_modulus(4) == 2);
  CHECK(bits_for_modulus(5) == 3);
  CHECK(bits_for_modulus(256) == 8);
  CHECK(bits_for_modulus(257) == 9);
  CHECK(bits_for_modulus(1ull << 32) == 32);
  CHECK(bits_for_modulus((1ull << 32) + 1) == 33);
}

}  // TEST_SUITE
