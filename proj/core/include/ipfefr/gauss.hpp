#pragma once

#include <cstdint>
#include <vector>

#include "ipfefr/modmatrix.hpp"
#include "ipfefr/rng.hpp"

namespace ipfefr {

// Discrete Gaussian over the integers with weight proportional to
// exp(-pi * (x - c)^2 / s^2), truncated to |x - c| <= TAIL_CUT * s
// (mass beyond the cut is < 2^-650 — unreachable at 64-bit draw resolution).
inline constexpr double TAIL_CUT = 12.0;

// Fast-path eligibility: integer centers with width at most this use an
// exact-CDF table (one 64-bit draw per sample); everything else uses the
// uniform-proposal rejection loop. The rule is part of the deterministic
// sampling contract — changing it changes every downstream stream.
inline constexpr double TABLE_S_MAX = 4096.0;

// Reference sampler: uniform proposal on the truncated support, accept with
// probability exp(-pi (x-c)^2 / s^2). Works for any center/width.
int64_t sample_z_reject(Rng& rng, double c, double s);

// Exact-CDF table for integer-center draws at fixed width s: cumulative
// weights scaled to 64 bits, sampled with a single uniform draw plus binary
// search. Distribution identical (to 64-bit resolution) to the rejection
// sampler at the same (integer c, s).
class ZTable {
 public:
  explicit ZTable(double s);
  int64_t sample(Rng& rng) const;  // centered at 0; caller shifts
  double width() const { return s_; }

 private:
  double s_;
  int64_t radius_;
  std::vector<uint64_t> cdf_;  // cdf_[i] covers x = i - radius_
};

// Dispatching sampler: table path iff c is an exact integer and s <= TABLE_S_MAX,
// rejection otherwise. Tables are cached per width (process-wide).
int64_t sample_z(Rng& rng, double c, double s);

SignedVector gauss_vector(Rng& rng, size_t len, double s);
SignedMatrix gauss_matrix(Rng& rng, size_t rows, size_t cols, double s);

// Normalization sum over the truncated support at center 0 (analysis/tests).
double rho_sum(double s);

// Power-iteration estimate of the largest singular value (30 iterations on
// M^T M with a deterministic start vector). Used for trapdoor quality
// measurement and spectral-bound tests.
double spectral_norm_estimate(const SignedMatrix& m);

}  // namespace ipfefr
