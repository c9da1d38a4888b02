#include <doctest.h>

#include <cstdint>

#include "ipfefr/base_ipfe.hpp"
#include "ipfefr/modarith.hpp"
#include "ipfefr/modmatrix.hpp"
#include "ipfefr/rng.hpp"
#include "test_util.hpp"

using namespace ipfefr;

namespace {

SignedVector random_bounded(Rng& rng, size_t len, uint64_t bound) {
  SignedVector v(len);
  for (size_t i = 0; i < len; ++i)
    v[i] = static_cast<int64_t>(rng.below(bound));
  return v;
}

int64_t inner(const SignedVector& a, const SignedVector& b) {
  int64_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

TEST_SUITE("base_ipfe") {

TEST_CASE("baseline derivation produces its frozen parameter point") {
  BaseParams prm = base_derive(16, 2, 4, 4);
  CHECK(prm.n == 16);
  CHECK(prm.l1 == 2);
  CHECK(prm.k_range == 32);
  CHECK(prm.m == 960);            // 2 * 16 * 30
  CHECK(prm.p == 566255747);      // smallest admissible 30-bit prime
  CHECK(prm.m == 2 * prm.n * bits_for_modulus(prm.p));
  CHECK(is_prime_u64(prm.p));
  CHECK(prm.sigma_z == 2.0);
  CHECK(prm.sigma_e == 2.0);

  BaseParams other = base_derive(8, 3, 2, 8);
  CHECK(other.p == 307915969);
  CHECK(other.m == 464);
  CHECK(other.k_range == 48);

  CHECK(error_code_of([] { base_derive(1, 2, 4, 4); }) == Errc::params_invalid);
  CHECK(error_code_of([] { base_derive(16, 2, 1, 4); }) == Errc::params_invalid);
}

TEST_CASE("public key commits to the master secret") {
  BaseParams prm = base_derive(16, 2, 4, 4);
  Rng rng(uint64_t{800});
  BaseKeyPair kp = base_setup(rng, prm);
  REQUIRE(kp.msk.z.rows == prm.m);
  REQUIRE(kp.msk.z.cols == prm.l1);
  CHECK(kp.mpk.u == mat_mul(kp.mpk.a, to_mod(kp.msk.z, prm.p)));

  SignedVector x = random_bounded(rng, prm.l1, prm.x_bound);
  CHECK(base_keygen(kp.msk, x) == signed_mat_vec(kp.msk.z, x));
}

TEST_CASE("decryption is exact over 300 random in-bound pairs") {
  BaseParams prm = base_derive(16, 2, 4, 4);
  Rng rng(uint64_t{801});
  BaseKeyPair kp = base_setup(rng, prm);
  for (int t = 0; t < 300; ++t) {
    SignedVector x = random_bounded(rng, prm.l1, prm.x_bound);
    SignedVector y = random_bounded(rng, prm.l1, prm.y_bound);
    SignedVector fx = base_keygen(kp.msk, x);
    BaseCiphertext ct = base_enc(rng, kp.mpk, y);
    uint64_t mu = base_dec(kp.mpk, fx, x, ct);
    CHECK(mu == static_cast<uint64_t>(inner(x, y)));
  }
}

TEST_CASE("decryption is exact at the extreme corners of the plaintext box") {
  BaseParams prm = base_derive(16, 2, 4, 4);
  Rng rng(uint64_t{802});
  BaseKeyPair kp = base_setup(rng, prm);

  SignedVector x_max(prm.l1), y_max(prm.l1), zero(prm.l1);
  for (size_t i = 0; i < prm.l1; ++i) {
    x_max[i] = static_cast<int64_t>(prm.x_bound) - 1;
    y_max[i] = static_cast<int64_t>(prm.y_bound) - 1;
  }
  // Worst-case magnitude: K - 1 must decode exactly, repeatedly.
  SignedVector f_max = base_keygen(kp.msk, x_max);
  for (int t = 0; t < 50; ++t) {
    BaseCiphertext ct = base_enc(rng, kp.mpk, y_max);
    CHECK(base_dec(kp.mpk, f_max, x_max, ct) ==
          static_cast<uint64_t>(inner(x_max, y_max)));
  }
  // Zero vectors on either side decode to zero.
  SignedVector f_zero = base_keygen(kp.msk, zero);
  BaseCiphertext ct_zero = base_enc(rng, kp.mpk, zero);
  CHECK(base_dec(kp.mpk, f_zero, zero, ct_zero) == 0);
  BaseCiphertext ct_max = base_enc(rng, kp.mpk, y_max);
  CHECK(base_dec(kp.mpk, f_zero, zero, ct_max) == 0);
}

TEST_CASE("out-of-bound vectors are rejected") {
  BaseParams prm = base_derive(16, 2, 4, 4);
  Rng rng(uint64_t{803});
  BaseKeyPair kp = base_setup(rng, prm);

  SignedVector x(prm.l1);
  x[0] = static_cast<int64_t>(prm.x_bound);  // == bound, outside [0, bound)
  CHECK(error_code_of([&] { base_enc(rng, kp.mpk, x); }) ==
        Errc::bound_exceeded);
  SignedVector neg(prm.l1);
  neg[0] = -1;
  CHECK(error_code_of([&] { base_enc(rng, kp.mpk, neg); }) ==
        Errc::bound_exceeded);

  SignedVector wrong_len(prm.l1 + 1);
  CHECK(error_code_of([&] { base_enc(rng, kp.mpk, wrong_len); }) ==
        Errc::dimension_mismatch);

  BaseParams blank;
  CHECK(error_code_of([&] { base_setup(rng, blank); }) == Errc::params_invalid);
}

}  // TEST_SUITE
