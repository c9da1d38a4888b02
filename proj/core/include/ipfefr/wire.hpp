#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ipfefr/params.hpp"
#include "ipfefr/scheme.hpp"

namespace ipfefr {

// Canonical binary serialization. Every object is framed as
//
//   magic[8] = "IPFEFR\x00\x01"
//   kind[1]
//   params_digest[32]   (all-zero for the params object itself)
//   body
//
// The digest binds every non-params object to the parameter set it was made
// under; decoders verify it against the expected parameters and reject on
// mismatch (Errc::serialization), as they do for any truncation, trailing
// garbage, bad magic, wrong kind, or out-of-range residue.
//
// Body primitives (all little-endian): u8/u32/u64 fixed width; signed 64-bit
// values as zig-zag in fixed 8 bytes; doubles as their IEEE-754 bit pattern
// in a u64; strings and byte blobs as u32 length + raw bytes. A residue
// vector/matrix stores its modulus (u64) and dimensions, then each residue in
// the minimum whole-byte width for that modulus. Everything is deterministic:
// equal objects encode to identical bytes.

enum class WireKind : uint8_t {
  params = 0x01,
  master_public = 0x02,
  master_secret = 0x03,
  group_public = 0x04,
  group_state = 0x05,
  user_secret = 0x06,
  function_key = 0x07,
  ciphertext = 0x08,
  directory = 0x09,
  update_key = 0x0A,
  update_info = 0x0B,
};

const char* wire_kind_name(WireKind k);

// 32-byte digest of the canonical params body; used in headers and as a
// stable fingerprint for parameter sets.
std::array<uint8_t, 32> params_digest(const Params& prm);

// Kind byte of an encoded blob (header must be well formed).
WireKind peek_kind(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_params(const Params& prm);
std::vector<uint8_t> encode_master_public(const MasterPublic& mpk);
std::vector<uint8_t> encode_master_secret(const MasterSecret& msk, const Params& prm);
std::vector<uint8_t> encode_group_public(const GroupPublic& gpk, const Params& prm);
std::vector<uint8_t> encode_group_state(const GroupState& gs, const Params& prm);
std::vector<uint8_t> encode_user_secret(const UserSecret& usk, const Params& prm);
std::vector<uint8_t> encode_function_key(const FunctionKey& fk, const Params& prm);
std::vector<uint8_t> encode_ciphertext(const Ciphertext& ct, const Params& prm);
std::vector<uint8_t> encode_directory(const Directory& dir, const Params& prm);
std::vector<uint8_t> encode_update_key(const UpdateKey& uk, const Params& prm);
std::vector<uint8_t> encode_update_info(const UpdateInfo& upi, const Params& prm);

Params decode_params(const std::vector<uint8_t>& bytes);
// The master public key embeds its params; no expectation needed.
MasterPublic decode_master_public(const std::vector<uint8_t>& bytes);
MasterSecret decode_master_secret(const std::vector<uint8_t>& bytes, const Params& prm);
GroupPublic decode_group_public(const std::vector<uint8_t>& bytes, const Params& prm);
GroupState decode_group_state(const std::vector<uint8_t>& bytes, const Params& prm);
UserSecret decode_user_secret(const std::vector<uint8_t>& bytes, const Params& prm);
FunctionKey decode_function_key(const std::vector<uint8_t>& bytes, const Params& prm);
Ciphertext decode_ciphertext(const std::vector<uint8_t>& bytes, const Params& prm);
Directory decode_directory(const std::vector<uint8_t>& bytes, const Params& prm);
UpdateKey decode_update_key(const std::vector<uint8_t>& bytes, const Params& prm);
UpdateInfo decode_update_info(const std::vector<uint8_t>& bytes, const Params& prm);

// Whole-file helpers (Errc::io on failure). Writes are atomic: temp file in
// the same directory, then rename.
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);
std::vector<uint8_t> read_file(const std::string& path);

}  // namespace ipfefr
