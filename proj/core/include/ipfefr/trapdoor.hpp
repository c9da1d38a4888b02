#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "ipfefr/modmatrix.hpp"
#include "ipfefr/rng.hpp"

namespace ipfefr {

// Gadget trapdoor over Z_p. The public matrix is A = [Abar | G - Abar*R] with
// Abar uniform n x (m - n*h), R a narrow Gaussian secret, and G = I_n (x) g^T
// the binary gadget (g = (1, 2, ..., 2^(h-1)), h = ceil(log2 p)). Preimage
// sampling is perturbation-corrected: a Gaussian perturbation with covariance
// s^2 I - sigma_g^2 [R;I][R;I]^T is added so that output columns are spherical
// at width s regardless of R. Minimum admissible s is the measured `quality`.

inline constexpr double SIGMA_G_UNIT = 2.2;      // per-step width multiplier
inline constexpr double ROUND_R = 2.2;           // randomized-rounding width
inline constexpr double RHO_TD = 2.3;            // trapdoor entry width
inline constexpr double SPECTRAL_C = 0.39894228; // 1/sqrt(2*pi)

// Klein/GS data for the gadget-lattice basis mod p (h x h, shared per p).
struct GadgetBasis {
  uint64_t p = 0;
  uint32_t h = 0;
  std::vector<double> b;        // basis, column-major h x h
  std::vector<double> gs;       // Gram-Schmidt vectors, column-major
  std::vector<double> gs_norm2; // squared GS norms
  double sigma_g = 0;           // sqrt(5) * SIGMA_G_UNIT

  explicit GadgetBasis(uint64_t p);
  // Sample z in Z^h with <g, z> = target (mod p), z ~ D at width sigma_g.
  void sample_coset(Rng& rng, uint64_t target, int64_t* out) const;
};

// Cholesky factor of the perturbation covariance for one width s. Building it
// is cubic in m; every preimage at the same s reuses it.
struct PerturbCache {
  std::mutex mu;
  double s = 0;
  std::vector<double> l;  // lower-triangular m x m, row-major
};

struct TrapdoorMatrix {
  ModMatrix a;          // n x m public matrix mod p
  SignedMatrix r;       // (m - n*h) x (n*h) trapdoor
  uint64_t p = 0;
  uint32_t n = 0, m = 0, h = 0;
  double s1_measured = 0;  // power-iteration estimate of s1(R)
  double quality = 0;      // 2 * sigma_g * sqrt(s1_measured^2 + 1)

  std::shared_ptr<GadgetBasis> basis;
  std::shared_ptr<PerturbCache> perturb = std::make_shared<PerturbCache>();
};

// Analytic lower bound on the sampling width a trapdoor of these dimensions
// supports: 2 * sigma_g * sqrt(s1_bound^2 + 1) with
// s1_bound = SPECTRAL_C * rho_td * (sqrt(m - nh) + sqrt(nh) + 6).
double trapdoor_quality_bound(uint32_t n, uint32_t m, uint64_t p,
                              double rho_td = RHO_TD);

// Requires m >= 2 * n * h.
TrapdoorMatrix trap_gen(Rng& rng, uint32_t n, uint32_t m, uint64_t p,
                        double rho_td = RHO_TD);

// Columns x_j with A * x_j = U_j (mod p), each ~ discrete Gaussian at width s.
// Requires s >= td.quality. The congruence is re-verified before returning.
SignedMatrix sample_pre(Rng& rng, const TrapdoorMatrix& td, const ModMatrix& u,
                        double s);
SignedVector sample_pre_vec(Rng& rng, const TrapdoorMatrix& td,
                            const ModVector& u, double s);

// The gadget matrix G = I_n (x) g^T (n x n*h) mod p — exposed for tests.
ModMatrix gadget_matrix(uint32_t n, uint64_t p);

}  // namespace ipfefr
