#include "ipfefr/gadgets.hpp"

#include <bit>

#include "ipfefr/errors.hpp"
#include "ipfefr/modarith.hpp"

namespace ipfefr {

std::vector<uint64_t> bit_decompose(uint64_t value, uint32_t h) {
  require(h >= 64 || value < (1ull << h), Errc::bound_exceeded,
          "value does not fit in the digit count");
  std::vector<uint64_t> bits(h);
  for (uint32_t j = 0; j < h; ++j) bits[j] = (value >> j) & 1ull;
  return bits;
}

uint64_t bit_compose(const std::vector<uint64_t>& bits) {
  require(bits.size() <= 64, Errc::bound_exceeded, "too many digits");
  uint64_t v = 0;
  for (size_t j = 0; j < bits.size(); ++j) {
    require(bits[j] <= 1, Errc::bound_exceeded, "digit out of {0,1}");
    v |= bits[j] << j;
  }
  return v;
}

ModVector bit_decompose_vec(const ModVector& v) {
  const uint32_t h = bits_for_modulus(v.mod);
  ModVector out(v.mod, v.size() * h);
  for (size_t i = 0; i < v.size(); ++i) {
    uint64_t val = v[i];
    for (uint32_t j = 0; j < h; ++j) out[i * h + j] = (val >> j) & 1ull;
  }
  return out;
}

ModMatrix power_expand_mat(const ModMatrix& m) {
  const uint32_t h = bits_for_modulus(m.mod);
  ModMatrix out(m.mod, m.rows * h, m.cols);
  for (size_t i = 0; i < m.rows; ++i) {
    uint64_t mult = 1;
    for (uint32_t j = 0; j < h; ++j) {
      uint64_t* dst = out.row(i * h + j);
      const uint64_t* src = m.row(i);
      for (size_t c = 0; c < m.cols; ++c) dst[c] = mul_mod(mult, src[c], m.mod);
      mult = mul_mod(mult, 2, m.mod);
    }
  }
  return out;
}

uint64_t decode_round(uint64_t value, uint64_t modulus, uint64_t step,
                      uint64_t range) {
  require(modulus >= 2, Errc::params_invalid, "decode modulus too small");
  require(step >= 1 && range >= 1, Errc::params_invalid, "decode step/range");
  require(value < modulus, Errc::bound_exceeded, "decode value not reduced");
  // range * step <= modulus keeps candidate points distinct on the circle.
  require(range <= modulus / step, Errc::params_invalid,
          "decode range * step exceeds modulus");

  uint64_t best_mu = 0;
  uint64_t best_dist = UINT64_MAX;
  uint64_t cand = 0;  // mu * step mod modulus, updated incrementally
  for (uint64_t mu = 0; mu < range; ++mu) {
    uint64_t d = value >= cand ? value - cand : cand - value;
    uint64_t dist = d <= modulus - d ? d : modulus - d;
    if (dist < best_dist) {
      best_dist = dist;
      best_mu = mu;
      // Any other candidate is >= step away on the circle, hence at distance
      // > step/2 from the value; strictly-less-than keeps ties exact.
      // (best_dist <= modulus/2 < 2^63, so the doubling cannot overflow.)
      if (best_dist * 2 < step) return best_mu;
    }
    // Wrap-safe incremental candidate: cand + step reduced mod modulus.
    uint64_t t = cand + step;
    cand = (t < cand) ? t - modulus : (t >= modulus ? t - modulus : t);
  }
  return best_mu;
}

uint32_t pack_width(uint64_t bound) {
  require(bound >= 1, Errc::bound_exceeded, "packing bound must be positive");
  require(bound <= (UINT64_MAX - 1) / 2, Errc::bound_exceeded,
          "packing bound too large");
  return static_cast<uint32_t>(std::bit_width(2 * bound));
}

std::vector<uint8_t> pack_signed(const SignedVector& v, uint64_t bound) {
  const uint32_t w = pack_width(bound);
  std::vector<uint8_t> out((v.size() * w + 7) / 8, 0);
  size_t bitpos = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    int64_t e = v[i];
    require(e >= -static_cast<int64_t>(bound) && e <= static_cast<int64_t>(bound),
            Errc::bound_exceeded, "packed value exceeds bound");
    uint64_t enc = static_cast<uint64_t>(e + static_cast<int64_t>(bound));
    for (uint32_t j = 0; j < w; ++j, ++bitpos) {
      if ((enc >> j) & 1ull) out[bitpos / 8] |= static_cast<uint8_t>(1u << (bitpos % 8));
    }
  }
  return out;
}

SignedVector unpack_signed(const std::vector<uint8_t>& bytes, size_t len,
                           uint64_t bound) {
  const uint32_t w = pack_width(bound);
  require(bytes.size() >= (len * w + 7) / 8, Errc::serialization,
          "packed buffer too short");
  SignedVector out(len);
  size_t bitpos = 0;
  for (size_t i = 0; i < len; ++i) {
    uint64_t enc = 0;
    for (uint32_t j = 0; j < w; ++j, ++bitpos) {
      uint64_t bit = (bytes[bitpos / 8] >> (bitpos % 8)) & 1u;
      enc |= bit << j;
    }
    require(enc <= 2 * bound, Errc::serialization, "packed value out of range");
    out[i] = static_cast<int64_t>(enc) - static_cast<int64_t>(bound);
  }
  return out;
}

}  // namespace ipfefr
