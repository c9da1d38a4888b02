#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ipfefr/modmatrix.hpp"

namespace ipfefr {

// Deterministic byte streams from SHAKE256 (OpenSSL). A stream is defined by a
// domain tag plus a message; output is produced in 64 KiB blocks where block i
// is SHAKE256(tag-length-prefixed || tag || message || LE64(i)). The block
// construction makes arbitrarily long output well defined (one-shot XOF
// finalization yields each block) and is part of the stability contract: the
// same tag/message always produce the same stream bytes.
class XofStream {
 public:
  XofStream(std::string_view domain_tag, const std::vector<uint8_t>& message);

  void read(uint8_t* out, size_t len);
  std::vector<uint8_t> read(size_t len);

  // Uniform residue mod p. Rejection sampling from (bits(p) + 64)-bit chunks;
  // acceptance per chunk misses with probability < 2^-64.
  uint64_t residue(uint64_t p);

 private:
  void refill();

  std::vector<uint8_t> input_;
  std::vector<uint8_t> block_;
  size_t pos_ = 0;
  uint64_t counter_ = 0;
};

// One-shot digest (32 bytes) of tag || message.
std::array<uint8_t, 32> shake256_digest(std::string_view domain_tag,
                                        const std::vector<uint8_t>& message);

// Identity hash: a nonzero vector of l2 residues mod p derived from the
// institution's identity string. Deterministic; the all-zero outcome (which
// would make the holder decode-blind) is skipped by drawing further.
ModVector hash_identity(std::string_view identity, uint64_t p, size_t l2);

// Epoch-secret mask: exactly `bits` pseudorandom bits (last byte zero-padded)
// derived from a scalar secret.
std::vector<uint8_t> hash_mask(uint64_t secret, uint64_t p, size_t bits);

// Pseudorandom function mapping a function vector to `count` residues mod p
// under a 32-byte key. The input is the canonical little-endian serialization
// of the vector entries (zig-zag, fixed 8 bytes each).
ModVector prf_tags(const std::array<uint8_t, 32>& key, const SignedVector& x,
                   uint64_t p, size_t count);

// Hex helpers shared by tools and tests.
std::string to_hex(const std::vector<uint8_t>& bytes);
std::string to_hex(const std::array<uint8_t, 32>& bytes);
std::vector<uint8_t> from_hex(std::string_view hex);

}  // namespace ipfefr
