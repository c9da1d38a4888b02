#include <doctest.h>

#include <cstdint>
#include <vector>

#include "ipfefr/gadgets.hpp"
#include "ipfefr/modarith.hpp"
#include "ipfefr/rng.hpp"

using namespace ipfefr;

namespace {

// Literal argmin over every candidate — no shortcuts at all.
uint64_t decode_brute(uint64_t value, uint64_t modulus, uint64_t step,
                      uint64_t range) {
  uint64_t best = 0, best_dist = UINT64_MAX;
  for (uint64_t mu = 0; mu < range; ++mu) {
    uint64_t point = mul_mod(mu, step, modulus);
    uint64_t d = point >= value ? point - value : value - point;
    uint64_t dist = d <= modulus - d ? d : modulus - d;
    if (dist < best_dist) {
      best_dist = dist;
      best = mu;
    }
  }
  return best;
}

// O(1) candidate-set decode: round(value/step) and its neighbors, plus the
// wrap candidates at the two ends of the range.
uint64_t decode_smart(uint64_t value, uint64_t modulus, uint64_t step,
                      uint64_t range) {
  uint64_t guess = (value + step / 2) / step;
  uint64_t cands[6] = {guess > 0 ? guess - 1 : 0, guess, guess + 1, 0,
                       range - 1, range / 2};
  uint64_t best = UINT64_MAX, best_dist = UINT64_MAX;
  for (uint64_t mu : cands) {
    if (mu >= range) continue;
    uint64_t point = mul_mod(mu, step, modulus);
    uint64_t d = point >= value ? point - value : value - point;
    uint64_t dist = d <= modulus - d ? d : modulus - d;
    if (dist < best_dist || (dist == best_dist && mu < best)) {
      best_dist = dist;
      best = mu;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("gadgets") {

TEST_CASE("bit decomposition round-trips and stays binary") {
  for (uint64_t p : {5ull, 17ull, 257ull, 1000003ull}) {
    uint32_t h = bits_for_modulus(p);
    Rng rng(p);
    for (int t = 0; t < 500; ++t) {
      uint64_t v = rng.below(p);
      std::vector<uint64_t> bits = bit_decompose(v, h);
      CHECK(bits.size() == h);
      for (uint64_t b : bits) CHECK(b <= 1);
      CHECK(bit_compose(bits) == v);
    }
    CHECK(bit_compose(bit_decompose(0, h)) == 0);
    CHECK(bit_compose(bit_decompose(p - 1, h)) == p - 1);
  }
}

TEST_CASE("vector decomposition layout is coordinate-major, LSB first") {
  ModVector v(8, 2);
  v[0] = 5;  // 101
  v[1] = 2;  // 010
  ModVector bits = bit_decompose_vec(v);
  REQUIRE(bits.size() == 6);
  CHECK(bits[0] == 1);
  CHECK(bits[1] == 0);
  CHECK(bits[2] == 1);
  CHECK(bits[3] == 0);
  CHECK(bits[4] == 1);
  CHECK(bits[5] == 0);
}

TEST_CASE("power expansion pairs exactly with decomposition") {
  Rng rng(uint64_t{600});
  for (uint64_t p : {97ull, 1000003ull}) {
    for (int t = 0; t < 20; ++t) {
      ModVector v = random_vector(rng, p, 4);
      ModMatrix m = random_matrix(rng, p, 4, 3);
      ModVector lhs = vec_mat(bit_decompose_vec(v), power_expand_mat(m));
      ModVector rhs = vec_mat(v, m);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("decode recovers exact multiples and survives noise below step/2") {
  const uint64_t modulus = 1000003, range = 32;
  const uint64_t step = modulus / range;
  for (uint64_t mu : {uint64_t{0}, uint64_t{1}, range / 2, range - 1}) {
    CHECK(decode_round(mul_mod(mu, step, modulus), modulus, step, range) == mu);
    uint64_t noisy_up = add_mod(mul_mod(mu, step, modulus), step / 2 - 1, modulus);
    uint64_t noisy_dn = sub_mod(mul_mod(mu, step, modulus), step / 2 - 1, modulus);
    CHECK(decode_round(noisy_up, modulus, step, range) == mu);
    CHECK(decode_round(noisy_dn, modulus, step, range) == mu);
  }
}

TEST_CASE("decode ties resolve to the lowest candidate") {
  // modulus 10, step 2, range 5: value 1 is equidistant from 0*2 and 1*2.
  CHECK(decode_round(1, 10, 2, 5) == 0);
  CHECK(decode_round(3, 10, 2, 5) == 1);
  // Wrap tie: value 9 is equidistant from 8 (mu=4) and 0 (mu=0).
  CHECK(decode_round(9, 10, 2, 5) == 0);
}

TEST_CASE("decode equals the literal argmin on random instances") {
  Rng rng(uint64_t{601});
  for (int t = 0; t < 2000; ++t) {
    uint64_t modulus = 2 + rng.below(10000);
    uint64_t range = 1 + rng.below(std::min<uint64_t>(modulus, 40));
    uint64_t step_max = modulus / range;
    uint64_t step = 1 + rng.below(step_max);
    uint64_t value = rng.below(modulus);
    CHECK(decode_round(value, modulus, step, range) ==
          decode_brute(value, modulus, step, range));
  }
}

TEST_CASE("decode equals the O(1) oracle at cryptographic sizes") {
  Rng rng(uint64_t{602});
  const uint64_t modulus = 577357597;  // micro-scale prime
  for (int t = 0; t < 10000; ++t) {
    uint64_t range = 2 + rng.below(64);
    uint64_t step = modulus / range;  // decode layers always use this shape
    uint64_t value = rng.below(modulus);
    CHECK(decode_round(value, modulus, step, range) ==
          decode_smart(value, modulus, step, range));
  }
}

TEST_CASE("pack_width covers the shifted range") {
  CHECK(pack_width(1) == 2);    // values 0..2
  CHECK(pack_width(2) == 3);    // values 0..4
  CHECK(pack_width(7) == 4);    // values 0..14
  CHECK(pack_width(8) == 5);
  CHECK(pack_width(24206) == 16);
}

TEST_CASE("signed packing round-trips, including the bound endpoints") {
  Rng rng(uint64_t{603});
  for (uint64_t bound : {1ull, 7ull, 255ull, 24206ull}) {
    for (size_t len : {1u, 3u, 8u, 240u}) {
      SignedVector v(len);
      for (size_t i = 0; i < len; ++i)
        v[i] = static_cast<int64_t>(rng.below(2 * bound + 1)) -
               static_cast<int64_t>(bound);
      if (len >= 2) {
        v[0] = static_cast<int64_t>(bound);
        v[1] = -static_cast<int64_t>(bound);
      }
      std::vector<uint8_t> packed = pack_signed(v, bound);
      CHECK(packed.size() == (len * pack_width(bound) + 7) / 8);
      SignedVector back = unpack_signed(packed, len, bound);
      CHECK(back == v);
    }
  }
}

TEST_CASE("packing rejects out-of-range values and wrong buffer sizes") {
  SignedVector v(2);
  v[0] = 8;
  CHECK_THROWS_AS(pack_signed(v, 7), Error);
  v[0] = -8;
  CHECK_THROWS_AS(pack_signed(v, 7), Error);
  v[0] = 7;
  std::vector<uint8_t> ok = pack_signed(v, 7);
  ok.pop_back();
  CHECK_THROWS_AS(unpack_signed(ok, 2, 7), Error);
}

}  // TEST_SUITE
