#pragma once

#include <cstdint>
#include <vector>

#include "ipfefr/modmatrix.hpp"

namespace ipfefr {

// Binary decomposition gadget modulo p with digit count h = ceil(log2 p).
// Layout is coordinate-major: the decomposition of a length-l vector is the
// length l*h concatenation bits(v_0) || bits(v_1) || ... with each block
// least-significant-bit first, and the matching power expansion of an l x c
// matrix stacks, for each source row i, the h rows 2^j * row_i (j = 0..h-1).
// With that pairing, decompose(v)^T * expand(M) == v^T * M (mod p) holds as an
// exact integer identity per column, because sum_j 2^j b_j reconstitutes each
// residue exactly (no modular wrap is involved in the recomposition).

// Binary digits of a single residue, LSB first.
std::vector<uint64_t> bit_decompose(uint64_t value, uint32_t h);
uint64_t bit_compose(const std::vector<uint64_t>& bits);

// Vector decomposition: length l -> length l*h, entries in {0,1} mod p.
ModVector bit_decompose_vec(const ModVector& v);

// Matrix power expansion: (rows x cols) -> (h*rows x cols) mod p.
ModMatrix power_expand_mat(const ModMatrix& m);

// Nearest-multiple decode. Given a residue `value` mod `modulus`, return
//   argmin_{mu in [0, range)} dist(value, mu * step mod modulus)
// where dist is circular distance mod `modulus`; ties resolve to the lowest
// mu. Requires range >= 1, step >= 1 and range * step <= modulus. The scan is
// literal (the contract is the argmin itself) with one sound shortcut: a
// candidate within step/2 (strictly) of the value cannot be beaten, since all
// other candidates are at least step away from it on the circle.
uint64_t decode_round(uint64_t value, uint64_t modulus, uint64_t step,
                      uint64_t range);

// Fixed-width signed packing used by the key-refresh broadcast. Values must
// satisfy |v| <= bound; each is stored as v + bound in ceil(log2(2*bound+1))
// bits, little-endian within the bit stream. pack_width(bound) gives the
// per-entry width; packed size is ceil(len * width / 8) bytes.
uint32_t pack_width(uint64_t bound);
std::vector<uint8_t> pack_signed(const SignedVector& v, uint64_t bound);
SignedVector unpack_signed(const std::vector<uint8_t>& bytes, size_t len,
                           uint64_t bound);

}  // namespace ipfefr
