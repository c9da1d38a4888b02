#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ipfefr {

// Complete parameter set for the revocable inner-product scheme. Everything
// downstream (key sizes, noise widths, decode steps, wire sizes) is a pure
// function of this struct; validate() re-derives each internal constraint.
struct Params {
  // Dimensions.
  uint32_t n = 0;    // lattice security dimension
  uint32_t m = 0;    // public matrix width, m = 2 * n * h
  uint32_t l1 = 0;   // function/message vector length
  uint32_t l2 = 0;   // identity vector length, l2 = N + 1
  uint32_t n_inst = 0;  // number of registered institutions N

  // Moduli. q = p^k; the directory layer works mod q, ciphertexts mod p.
  uint64_t p = 0;
  uint32_t k = 0;
  uint64_t q = 0;
  uint32_t h = 0;    // ceil(log2 p), gadget digit count

  // Plaintext bounds: x entries in [0, X), y entries in [0, Y),
  // inner products in [0, K) with K = l1 * X * Y.
  uint64_t x_bound = 0;
  uint64_t y_bound = 0;
  uint64_t k_range = 0;

  // Gaussian widths.
  double rho_td = 0;   // trapdoor entry width
  double rho1 = 0;     // preimage / epoch-matrix width (>= trapdoor quality)
  double rho2 = 0;     // identity-mixing matrix width
  double sigma1 = 0;   // directory noise (mod q side)
  double sigma2 = 0;   // ciphertext noise (mod p side)

  // Recorded noise rates. Two rates are kept because the two noise layers
  // live over different moduli: sigma2 = 2C * alpha  * p * (sqrt m + sqrt n + sqrt l1)
  // and                         sigma1 = 2C * alpha1 * q * (sqrt m + sqrt n + sqrt l2).
  double alpha = 0;
  double alpha1 = 0;

  // Update-depth accounting. v_max is the operational cap on ciphertext
  // re-encryption depth; v_guaranteed is the largest depth whose inflated
  // correctness budget is satisfied analytically by this parameter set.
  uint32_t v_max = 0;
  uint32_t v_guaranteed = 0;

  // Key-refresh packing: per-entry bound and width, total bit count.
  uint64_t pack_bound = 0;
  uint32_t pack_width_bits = 0;
  uint64_t pack_total_bits = 0;

  double margin = 1.0;  // slack factor applied to both correctness budgets

  bool operator==(const Params&) const = default;
};

struct DeriveOptions {
  double margin = 1.0;
  uint32_t v_max = 3;       // operational update cap
  uint32_t v_target = 0;    // maximize v_guaranteed up to this target
};

// Deterministic parameter derivation. Picks the smallest prime p (with its
// digit count h and m = 2nh self-consistent) such that both correctness
// budgets hold at sigma2 = 1.2 with rho1 equal to the analytic trapdoor
// quality bound, preferring larger guaranteed update depth, then larger k
// (k in {3, 2}; k = 3 gives the directory layer real noise when it fits under
// the 64-bit modulus cap). Errc::params_invalid when no admissible set exists.
Params derive(uint32_t n, uint32_t l1, uint32_t n_inst, uint64_t x_bound,
              uint64_t y_bound, double margin = 1.0);
Params derive(uint32_t n, uint32_t l1, uint32_t n_inst, uint64_t x_bound,
              uint64_t y_bound, const DeriveOptions& opt);

struct Validation {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

// Re-checks every structural identity and both correctness budgets; returns
// named violations (hard failures) and warnings (recorded concessions, e.g.
// the noise-rate floors this construction cannot meet jointly with
// correctness under a 64-bit modulus).
Validation validate(const Params& prm);

// Named profiles: "micro" (fast, analytic double-update guarantee),
// "toy" (k = 3: real directory noise), "full" (n = 64 working point).
Params profile(std::string_view name);

// Human-readable multi-line summary.
std::string params_summary(const Params& prm);

// Analytic correctness-budget pieces, exposed for tests/analysis.
double fresh_noise_budget(const Params& prm);            // fresh ciphertext term
double update_noise_budget(const Params& prm, uint32_t j);  // j-th update term
double directory_noise_budget(const Params& prm);        // mod-q layer term

}  // namespace ipfefr
