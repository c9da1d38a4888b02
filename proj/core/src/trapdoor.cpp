#include "ipfefr/trapdoor.hpp"

#include <cmath>

#include "ipfefr/errors.hpp"
#include "ipfefr/gauss.hpp"
#include "ipfefr/modarith.hpp"

namespace ipfefr {

namespace {

// Basis of the lattice { z : <g, z> = 0 mod p } for g = (1, 2, ..., 2^(h-1)):
// columns b_i = 2*e_i - e_{i+1} for i < h-1, plus the binary expansion of p.
// Gram-Schmidt norms of this basis are bounded by sqrt(5), which fixes the
// per-step width sigma_g = sqrt(5) * SIGMA_G_UNIT.
std::vector<double> gadget_basis_cols(uint64_t p, uint32_t h) {
  std::vector<double> b(static_cast<size_t>(h) * h, 0.0);
  auto at = [&](uint32_t row, uint32_t col) -> double& {
    return b[static_cast<size_t>(col) * h + row];
  };
  for (uint32_t i = 0; i + 1 < h; ++i) {
    at(i, i) = 2.0;
    at(i + 1, i) = -1.0;
  }
  for (uint32_t j = 0; j < h; ++j)
    at(j, h - 1) = static_cast<double>((p >> j) & 1ull);
  return b;
}

}  // namespace

GadgetBasis::GadgetBasis(uint64_t p_in) : p(p_in) {
  h = bits_for_modulus(p);
  sigma_g = std::sqrt(5.0) * SIGMA_G_UNIT;
  b = gadget_basis_cols(p, h);

  // Classical Gram-Schmidt (h <= 64, doubles are plenty).
  gs = b;
  gs_norm2.assign(h, 0.0);
  auto col = [&](std::vector<double>& m, uint32_t c) { return m.data() + static_cast<size_t>(c) * h; };
  for (uint32_t j = 0; j < h; ++j) {
    double* gj = col(gs, j);
    for (uint32_t k = 0; k < j; ++k) {
      const double* gk = col(gs, k);
      double dot = 0;
      for (uint32_t i = 0; i < h; ++i) dot += gj[i] * gk[i];
      double coeff = dot / gs_norm2[k];
      for (uint32_t i = 0; i < h; ++i) gj[i] -= coeff * gk[i];
    }
    double n2 = 0;
    for (uint32_t i = 0; i < h; ++i) n2 += gj[i] * gj[i];
    gs_norm2[j] = n2;
  }
}

void GadgetBasis::sample_coset(Rng& rng, uint64_t target, int64_t* out) const {
  // Shift vector t with <g, t> = target: the binary digits of the target.
  std::vector<double> c(h);
  for (uint32_t j = 0; j < h; ++j)
    c[j] = static_cast<double>((target >> j) & 1ull);
  std::vector<double> t = c;

  // Klein's nearest-plane walk: sample v in the lattice close to c, then
  // return t - v (which stays in the coset of t).
  std::vector<int64_t> z(h);
  for (int32_t j = static_cast<int32_t>(h) - 1; j >= 0; --j) {
    const double* gj = gs.data() + static_cast<size_t>(j) * h;
    double dot = 0;
    for (uint32_t i = 0; i < h; ++i) dot += c[i] * gj[i];
    double center = dot / gs_norm2[j];
    double step_s = sigma_g / std::sqrt(gs_norm2[j]);
    z[j] = sample_z(rng, center, step_s);
    const double* bj = b.data() + static_cast<size_t>(j) * h;
    for (uint32_t i = 0; i < h; ++i)
      c[i] -= static_cast<double>(z[j]) * bj[i];
  }
  // v = sum z_j b_j = t - c; out = t - v = c (up to fp error; reconstruct in
  // exact integer arithmetic instead of trusting the float residue).
  std::vector<int64_t> v(h, 0);
  for (uint32_t j = 0; j < h; ++j) {
    // basis columns are integral
    const double* bj = b.data() + static_cast<size_t>(j) * h;
    for (uint32_t i = 0; i < h; ++i)
      v[i] += z[j] * static_cast<int64_t>(std::llround(bj[i]));
  }
  for (uint32_t i = 0; i < h; ++i)
    out[i] = static_cast<int64_t>((target >> i) & 1ull) - v[i];
}

ModMatrix gadget_matrix(uint32_t n, uint64_t p) {
  const uint32_t h = bits_for_modulus(p);
  ModMatrix g(p, n, static_cast<size_t>(n) * h);
  for (uint32_t i = 0; i < n; ++i) {
    uint64_t powv = 1;
    for (uint32_t j = 0; j < h; ++j) {
      g.at(i, static_cast<size_t>(i) * h + j) = powv % p;
      powv = mul_mod(powv, 2, p);
    }
  }
  return g;
}

double trapdoor_quality_bound(uint32_t n, uint32_t m, uint64_t p, double rho_td) {
  const uint32_t h = bits_for_modulus(p);
  const uint32_t w = n * h;
  require(m >= 2 * w, Errc::params_invalid, "m must be at least 2*n*ceil(log2 p)");
  const uint32_t mbar = m - w;
  double s1 = SPECTRAL_C * rho_td * (std::sqrt(static_cast<double>(mbar)) +
                                     std::sqrt(static_cast<double>(w)) + 6.0);
  double sigma_g = std::sqrt(5.0) * SIGMA_G_UNIT;
  return 2.0 * sigma_g * std::sqrt(s1 * s1 + 1.0);
}

TrapdoorMatrix trap_gen(Rng& rng, uint32_t n, uint32_t m, uint64_t p,
                        double rho_td) {
  const uint32_t h = bits_for_modulus(p);
  const uint32_t w = n * h;
  require(m >= 2 * w, Errc::params_invalid, "m must be at least 2*n*ceil(log2 p)");
  const uint32_t mbar = m - w;

  TrapdoorMatrix td;
  td.p = p;
  td.n = n;
  td.m = m;
  td.h = h;
  td.basis = std::make_shared<GadgetBasis>(p);

  ModMatrix abar = random_matrix(rng, p, n, mbar);
  td.r = gauss_matrix(rng, mbar, w, rho_td);

  // Right block: G - Abar * R (mod p).
  ModMatrix right(p, n, w);
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t c = 0; c < w; ++c) {
      i128 acc = 0;
      for (uint32_t k = 0; k < mbar; ++k)
        acc += static_cast<i128>(abar.at(i, k)) * td.r.at(k, c);
      int64_t red = static_cast<int64_t>(acc % static_cast<i128>(p));
      uint64_t val = from_signed(red, p);
      right.at(i, c) = val;
    }
  }
  ModMatrix g = gadget_matrix(n, p);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t c = 0; c < w; ++c)
      right.at(i, c) = sub_mod(g.at(i, c), right.at(i, c), p);

  td.a = hstack(abar, right);
  td.s1_measured = spectral_norm_estimate(td.r);
  td.quality = 2.0 * td.basis->sigma_g * std::sqrt(td.s1_measured * td.s1_measured + 1.0);
  return td;
}

namespace {

// Build (or reuse) the Cholesky factor L with L L^T = s^2 I - sigma_g^2
// [R;I][R;I]^T - ROUND_R^2 I. Adding back ROUND_R^2 by randomized rounding
// makes the total perturbation covariance exactly s^2 I - sigma_g^2 [..].
void ensure_perturb_cache(const TrapdoorMatrix& td, double s) {
  PerturbCache& pc = *td.perturb;
  std::lock_guard<std::mutex> lock(pc.mu);
  if (pc.s == s && !pc.l.empty()) return;

  const uint32_t m = td.m;
  const uint32_t w = td.n * td.h;
  const uint32_t mbar = m - w;
  // All widths (s, sigma_g, ROUND_R) are rho-convention parameters: a width-t
  // sampler has per-coordinate variance t^2/(2 pi). The continuous
  // perturbation y = L g uses literal variances, so the whole covariance is
  // expressed in variance units by scaling with 1/(2 pi); the discrete parts
  // (randomized rounding at ROUND_R, gadget coset at sigma_g) then add back
  // exactly the subtracted fractions and the total output variance is
  // s^2/(2 pi) I — spherical width s.
  const double inv2pi = SPECTRAL_C * SPECTRAL_C;
  const double sg2 = inv2pi * td.basis->sigma_g * td.basis->sigma_g;
  const double diag = inv2pi * (s * s - ROUND_R * ROUND_R);

  // M = diag * I - sg2 * [R;I][R^T I]; block structure:
  //   top-left  (mbar x mbar): diag*I - sg2 * R R^T
  //   top-right (mbar x w):            - sg2 * R
  //   bottom-right (w x w):    (diag - sg2) * I
  std::vector<double>& l = pc.l;
  l.assign(static_cast<size_t>(m) * m, 0.0);
  auto at = [&](uint32_t r, uint32_t c) -> double& {
    return l[static_cast<size_t>(r) * m + c];
  };
  for (uint32_t i = 0; i < mbar; ++i) {
    for (uint32_t j = 0; j <= i; ++j) {
      double acc = 0;
      for (uint32_t k = 0; k < w; ++k)
        acc += static_cast<double>(td.r.at(i, k)) * static_cast<double>(td.r.at(j, k));
      double v = -sg2 * acc;
      if (i == j) v += diag;
      at(i, j) = v;
      at(j, i) = v;
    }
  }
  for (uint32_t i = mbar; i < m; ++i) {
    for (uint32_t j = 0; j < mbar; ++j) {
      double v = -sg2 * static_cast<double>(td.r.at(j, i - mbar));
      at(i, j) = v;
      at(j, i) = v;
    }
    at(i, i) = diag - sg2;
  }

  // In-place lower Cholesky. The matrix is comfortably positive definite for
  // s >= quality (smallest eigenvalue >= diag - sg2*(s1^2+1) >= 3/4 s^2 - r^2).
  for (uint32_t j = 0; j < m; ++j) {
    double d = at(j, j);
    for (uint32_t k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
    require(d > 0, Errc::state, "perturbation covariance lost positivity");
    double root = std::sqrt(d);
    at(j, j) = root;
    for (uint32_t i = j + 1; i < m; ++i) {
      double acc = at(i, j);
      for (uint32_t k = 0; k < j; ++k) acc -= at(i, k) * at(j, k);
      at(i, j) = acc / root;
    }
    for (uint32_t c = j + 1; c < m; ++c) at(j, c) = 0.0;
  }
  pc.s = s;
}

}  // namespace

SignedMatrix sample_pre(Rng& rng, const TrapdoorMatrix& td, const ModMatrix& u,
                        double s) {
  require(u.mod == td.p, Errc::modulus_mismatch, "target modulus mismatch");
  require(u.rows == td.n, Errc::dimension_mismatch, "target row count mismatch");
  require(s >= td.quality, Errc::bound_exceeded,
          "requested width below trapdoor quality");
  ensure_perturb_cache(td, s);

  const uint32_t m = td.m;
  const uint32_t w = td.n * td.h;
  const uint32_t mbar = m - w;
  const std::vector<double>& l = td.perturb->l;

  SignedMatrix out(m, u.cols);
  std::vector<double> gvec(m), y(m);
  std::vector<int64_t> pvec(m), z(w);

  for (size_t colj = 0; colj < u.cols; ++colj) {
    // Perturbation: y = L g (g standard normal), then randomized rounding.
    for (uint32_t i = 0; i < m; ++i) gvec[i] = rng.normal();
    for (uint32_t i = 0; i < m; ++i) {
      const double* row = l.data() + static_cast<size_t>(i) * m;
      double acc = 0;
      for (uint32_t k = 0; k <= i; ++k) acc += row[k] * gvec[k];
      y[i] = acc;
    }
    for (uint32_t i = 0; i < m; ++i) pvec[i] = sample_z(rng, y[i], ROUND_R);

    // Residual gadget target: v = u_col - A p (mod p).
    for (uint32_t i = 0; i < td.n; ++i) {
      i128 acc = 0;
      const uint64_t* arow = td.a.row(i);
      for (uint32_t k = 0; k < m; ++k)
        acc += static_cast<i128>(arow[k]) * pvec[k];
      int64_t red = static_cast<int64_t>(acc % static_cast<i128>(td.p));
      uint64_t ap = from_signed(red, td.p);
      uint64_t v = sub_mod(u.at(i, colj), ap, td.p);
      td.basis->sample_coset(rng, v, z.data() + static_cast<size_t>(i) * td.h);
    }

    // x = p + [R; I] z.
    for (uint32_t i = 0; i < mbar; ++i) {
      i128 acc = pvec[i];
      const int64_t* rrow = td.r.a.data() + static_cast<size_t>(i) * w;
      for (uint32_t k = 0; k < w; ++k) acc += static_cast<i128>(rrow[k]) * z[k];
      require(acc <= INT64_MAX && acc >= INT64_MIN, Errc::bound_exceeded,
              "preimage entry exceeds 64-bit range");
      out.at(i, colj) = static_cast<int64_t>(acc);
    }
    for (uint32_t i = 0; i < w; ++i) out.at(mbar + i, colj) = pvec[mbar + i] + z[i];

    // Hard verification of the congruence A x = u (mod p).
    for (uint32_t i = 0; i < td.n; ++i) {
      i128 acc = 0;
      const uint64_t* arow = td.a.row(i);
      for (uint32_t k = 0; k < m; ++k)
        acc += static_cast<i128>(arow[k]) * out.at(k, colj);
      int64_t red = static_cast<int64_t>(acc % static_cast<i128>(td.p));
      require(from_signed(red, td.p) == u.at(i, colj), Errc::state,
              "preimage verification failed");
    }
  }
  return out;
}

SignedVector sample_pre_vec(Rng& rng, const TrapdoorMatrix& td,
                            const ModVector& u, double s) {
  ModMatrix um(u.mod, u.size(), 1);
  for (size_t i = 0; i < u.size(); ++i) um.at(i, 0) = u[i];
  SignedMatrix xm = sample_pre(rng, td, um, s);
  SignedVector x(xm.rows);
  for (size_t i = 0; i < xm.rows; ++i) x[i] = xm.at(i, 0);
  return x;
}

}  // namespace ipfefr
