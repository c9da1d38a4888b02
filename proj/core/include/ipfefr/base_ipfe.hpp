#pragma once

#include <cstdint>

#include "ipfefr/modmatrix.hpp"
#include "ipfefr/rng.hpp"

namespace ipfefr {

// Baseline (non-revocable) inner-product functional encryption layer: the
// substrate the full scheme builds on. The master secret is a narrow Gaussian
// matrix Z; the public key publishes A (uniform) and U = A Z. A key for
// function x is the integer vector Z x; decryption pairs it against the
// two-part ciphertext and rounds.
//
// Exactness contract: for x entries in [0, X) and y entries in [0, Y),
// dec(keygen(x), x, enc(y)) == <x, y> with probability 1 under the derived
// parameters (the modulus is sized against the worst-case noise inner
// product, not a tail bound).

struct BaseParams {
  uint32_t n = 0, m = 0, l1 = 0;
  uint64_t p = 0;
  uint64_t x_bound = 0, y_bound = 0, k_range = 0;
  double sigma_z = 0;  // master-secret width
  double sigma_e = 0;  // ciphertext noise width

  bool operator==(const BaseParams&) const = default;
};

BaseParams base_derive(uint32_t n, uint32_t l1, uint64_t x_bound, uint64_t y_bound);

struct BaseMasterSecret {
  SignedMatrix z;  // m x l1
};

struct BaseMasterPublic {
  BaseParams prm;
  ModMatrix a;  // n x m
  ModMatrix u;  // n x l1 == A * Z mod p
};

struct BaseKeyPair {
  BaseMasterSecret msk;
  BaseMasterPublic mpk;
};

struct BaseCiphertext {
  ModVector c1;  // m
  ModVector c2;  // l1
};

BaseKeyPair base_setup(Rng& rng, const BaseParams& prm);
SignedVector base_keygen(const BaseMasterSecret& msk, const SignedVector& x);
BaseCiphertext base_enc(Rng& rng, const BaseMasterPublic& mpk,
                        const SignedVector& y);
uint64_t base_dec(const BaseMasterPublic& mpk, const SignedVector& fx,
                  const SignedVector& x, const BaseCiphertext& ct);

}  // namespace ipfefr
