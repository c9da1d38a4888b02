#include "ipfefr/base_ipfe.hpp"

#include <cmath>

#include "ipfefr/errors.hpp"
#include "ipfefr/gadgets.hpp"
#include "ipfefr/gauss.hpp"
#include "ipfefr/modarith.hpp"

namespace ipfefr {

namespace {

constexpr double kSigma = 2.0;  // both widths; exactness comes from p sizing

void check_bounds(const SignedVector& v, uint64_t bound, const char* what) {
  for (size_t i = 0; i < v.size(); ++i)
    require(v[i] >= 0 && static_cast<uint64_t>(v[i]) < bound, Errc::bound_exceeded,
            std::string(what) + " entry outside [0, bound)");
}

}  // namespace

BaseParams base_derive(uint32_t n, uint32_t l1, uint64_t x_bound, uint64_t y_bound) {
  require(n >= 2 && l1 >= 1, Errc::params_invalid, "dimensions must be positive");
  require(x_bound >= 2 && y_bound >= 2, Errc::params_invalid,
          "plaintext bounds must be at least 2");
  BaseParams prm;
  prm.n = n;
  prm.l1 = l1;
  prm.x_bound = x_bound;
  prm.y_bound = y_bound;
  prm.k_range = l1 * x_bound * y_bound;
  prm.sigma_z = kSigma;
  prm.sigma_e = kSigma;

  // Worst-case noise energy: |x^T e2| <= l1 (X-1) cut_e, and |f^T e1| <=
  // m * (l1 (X-1) cut_z) * cut_e with cut = TAIL_CUT * sigma the absolute
  // entry bounds of the truncated samplers. m depends on p (m = 2 n ceil(lg p))
  // so iterate to a fixed point as in the main derivation.
  const double cut_z = TAIL_CUT * prm.sigma_z;
  const double cut_e = TAIL_CUT * prm.sigma_e;
  for (uint32_t h = 2; h <= 62; ++h) {
    const uint32_t m = 2 * n * h;
    double fmax = static_cast<double>(l1) * static_cast<double>(x_bound) * cut_z;
    double noise = static_cast<double>(l1) * static_cast<double>(x_bound) * cut_e +
                   static_cast<double>(m) * fmax * cut_e;
    double p_needed_f = 4.0 * static_cast<double>(prm.k_range) * (noise + 1.0);
    uint64_t p_needed = static_cast<uint64_t>(std::ceil(p_needed_f));
    p_needed = std::max(p_needed, 4 * prm.k_range + 1);
    const uint64_t h_lo = (1ull << (h - 1)) + 1;
    const uint64_t h_hi = 1ull << h;
    if (p_needed < h_lo) p_needed = h_lo;
    if (p_needed > h_hi) continue;
    uint64_t p = next_prime(p_needed);
    if (p > h_hi) continue;
    prm.p = p;
    prm.m = m;
    return prm;
  }
  fail(Errc::params_invalid, "no admissible baseline parameters");
}

BaseKeyPair base_setup(Rng& rng, const BaseParams& prm) {
  require(prm.p >= 2 && prm.m > 0, Errc::params_invalid, "uninitialized params");
  BaseKeyPair kp;
  kp.msk.z = gauss_matrix(rng, prm.m, prm.l1, prm.sigma_z);
  kp.mpk.prm = prm;
  kp.mpk.a = random_matrix(rng, prm.p, prm.n, prm.m);
  ModMatrix zmod = to_mod(kp.msk.z, prm.p);
  kp.mpk.u = mat_mul(kp.mpk.a, zmod);
  return kp;
}

SignedVector base_keygen(const BaseMasterSecret& msk, const SignedVector& x) {
  return signed_mat_vec(msk.z, x);
}

BaseCiphertext base_enc(Rng& rng, const BaseMasterPublic& mpk,
                        const SignedVector& y) {
  const BaseParams& prm = mpk.prm;
  require(y.size() == prm.l1, Errc::dimension_mismatch, "message length");
  check_bounds(y, prm.y_bound, "message");

  ModVector s = random_vector(rng, prm.p, prm.n);
  SignedVector e1 = gauss_vector(rng, prm.m, prm.sigma_e);
  SignedVector e2 = gauss_vector(rng, prm.l1, prm.sigma_e);

  BaseCiphertext ct;
  ct.c1 = vec_mat(s, mpk.a);  // A^T s
  for (size_t i = 0; i < prm.m; ++i)
    ct.c1[i] = add_mod(ct.c1[i], from_signed(e1[i], prm.p), prm.p);

  const uint64_t delta = prm.p / prm.k_range;
  ct.c2 = vec_mat(s, mpk.u);  // U^T s
  for (size_t i = 0; i < prm.l1; ++i) {
    uint64_t t = add_mod(ct.c2[i], from_signed(e2[i], prm.p), prm.p);
    uint64_t msg = mul_mod(delta, static_cast<uint64_t>(y[i]), prm.p);
    ct.c2[i] = add_mod(t, msg, prm.p);
  }
  return ct;
}

uint64_t base_dec(const BaseMasterPublic& mpk, const SignedVector& fx,
                  const SignedVector& x, const BaseCiphertext& ct) {
  const BaseParams& prm = mpk.prm;
  require(x.size() == prm.l1, Errc::dimension_mismatch, "function length");
  require(fx.size() == prm.m, Errc::dimension_mismatch, "key length");
  require(ct.c1.size() == prm.m && ct.c2.size() == prm.l1,
          Errc::dimension_mismatch, "ciphertext shape");
  check_bounds(x, prm.x_bound, "function");

  ModVector xm = to_mod(x, prm.p);
  ModVector fm = to_mod(fx, prm.p);
  uint64_t lhs = dot_mod(xm, ct.c2);
  uint64_t rhs = dot_mod(fm, ct.c1);
  uint64_t mu_noisy = sub_mod(lhs, rhs, prm.p);
  return decode_round(mu_noisy, prm.p, prm.p / prm.k_range, prm.k_range);
}

}  // namespace ipfefr
