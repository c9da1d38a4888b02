#include "ipfefr/prims.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>

#include "ipfefr/errors.hpp"
#include "ipfefr/modarith.hpp"

namespace ipfefr {

namespace {

constexpr size_t kBlockSize = 64 * 1024;

void shake256_raw(const uint8_t* in, size_t in_len, uint8_t* out, size_t out_len) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  require(ctx != nullptr, Errc::state, "EVP context allocation failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_shake256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, in, in_len) == 1 &&
            EVP_DigestFinalXOF(ctx, out, out_len) == 1;
  EVP_MD_CTX_free(ctx);
  require(ok, Errc::state, "SHAKE256 evaluation failed");
}

std::vector<uint8_t> frame_input(std::string_view tag,
                                 const std::vector<uint8_t>& message) {
  // Length-prefixing the tag keeps (tag, message) framing unambiguous.
  std::vector<uint8_t> input;
  input.reserve(4 + tag.size() + message.size());
  uint32_t tl = static_cast<uint32_t>(tag.size());
  for (int i = 0; i < 4; ++i) input.push_back(static_cast<uint8_t>(tl >> (8 * i)));
  input.insert(input.end(), tag.begin(), tag.end());
  input.insert(input.end(), message.begin(), message.end());
  return input;
}

}  // namespace

XofStream::XofStream(std::string_view domain_tag,
                     const std::vector<uint8_t>& message)
    : input_(frame_input(domain_tag, message)) {}

void XofStream::refill() {
  std::vector<uint8_t> block_input = input_;
  for (int i = 0; i < 8; ++i)
    block_input.push_back(static_cast<uint8_t>(counter_ >> (8 * i)));
  ++counter_;
  block_.assign(kBlockSize, 0);
  shake256_raw(block_input.data(), block_input.size(), block_.data(), kBlockSize);
  pos_ = 0;
}

void XofStream::read(uint8_t* out, size_t len) {
  size_t done = 0;
  while (done < len) {
    if (pos_ >= block_.size()) refill();
    size_t take = std::min(len - done, block_.size() - pos_);
    std::memcpy(out + done, block_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

std::vector<uint8_t> XofStream::read(size_t len) {
  std::vector<uint8_t> out(len);
  read(out.data(), len);
  return out;
}

uint64_t XofStream::residue(uint64_t p) {
  require(p >= 2, Errc::params_invalid, "residue modulus too small");
  // Draw bits(p) + >=56 extra bits per attempt (capped at 120 so 2^W fits in
  // 128 bits); the floor-multiple acceptance region then misses with
  // probability < 2^-56 and the loop is unbiased.
  const uint32_t bits = std::min<uint32_t>(bits_for_modulus(p) + 64, 120);
  const uint32_t nbytes = (bits + 7) / 8;
  for (;;) {
    uint8_t buf[16];
    read(buf, nbytes);
    u128 val = 0;
    for (uint32_t i = 0; i < nbytes; ++i)
      val |= static_cast<u128>(buf[i]) << (8 * i);
    u128 full = static_cast<u128>(1) << (nbytes * 8);
    u128 limit = full - full % p;
    if (val < limit) return static_cast<uint64_t>(val % p);
  }
}

std::array<uint8_t, 32> shake256_digest(std::string_view domain_tag,
                                        const std::vector<uint8_t>& message) {
  std::vector<uint8_t> input = frame_input(domain_tag, message);
  std::array<uint8_t, 32> out{};
  shake256_raw(input.data(), input.size(), out.data(), out.size());
  return out;
}

ModVector hash_identity(std::string_view identity, uint64_t p, size_t l2) {
  std::vector<uint8_t> msg(identity.begin(), identity.end());
  XofStream xs("IPFEFR/H1", msg);
  ModVector id(p, l2);
  for (;;) {
    bool nonzero = false;
    for (size_t i = 0; i < l2; ++i) {
      id[i] = xs.residue(p);
      nonzero |= id[i] != 0;
    }
    if (nonzero) return id;
  }
}

std::vector<uint8_t> hash_mask(uint64_t secret, uint64_t p, size_t bits) {
  std::vector<uint8_t> msg(16);
  for (int i = 0; i < 8; ++i) msg[i] = static_cast<uint8_t>(secret >> (8 * i));
  for (int i = 0; i < 8; ++i) msg[8 + i] = static_cast<uint8_t>(p >> (8 * i));
  XofStream xs("IPFEFR/H2", msg);
  std::vector<uint8_t> mask = xs.read((bits + 7) / 8);
  if (bits % 8 != 0) mask.back() &= static_cast<uint8_t>((1u << (bits % 8)) - 1);
  return mask;
}

ModVector prf_tags(const std::array<uint8_t, 32>& key, const SignedVector& x,
                   uint64_t p, size_t count) {
  std::vector<uint8_t> msg;
  msg.reserve(32 + 8 * x.size());
  msg.insert(msg.end(), key.begin(), key.end());
  for (size_t i = 0; i < x.size(); ++i) {
    int64_t v = x[i];
    // zig-zag keeps the encoding sign-stable and fixed-width
    uint64_t zz = (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
    for (int b = 0; b < 8; ++b) msg.push_back(static_cast<uint8_t>(zz >> (8 * b)));
  }
  XofStream xs("IPFEFR/PRF", msg);
  ModVector t(p, count);
  for (size_t i = 0; i < count; ++i) t[i] = xs.residue(p);
  return t;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

std::string to_hex(const std::array<uint8_t, 32>& bytes) {
  return to_hex(std::vector<uint8_t>(bytes.begin(), bytes.end()));
}

std::vector<uint8_t> from_hex(std::string_view hex) {
  require(hex.size() % 2 == 0, Errc::serialization, "odd hex length");
  std::vector<uint8_t> out(hex.size() / 2);
  auto nib = [](char c) -> uint8_t {
    if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
    fail(Errc::serialization, "non-hex character");
  };
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
  return out;
}

}  // namespace ipfefr
