#pragma once

#include <cstdint>
#include <vector>

#include "ipfefr/errors.hpp"
#include "ipfefr/modarith.hpp"
#include "ipfefr/rng.hpp"

namespace ipfefr {

// Dense row-major matrices/vectors of residues mod a 64-bit modulus, plus
// small-integer (signed) counterparts for Gaussian-sampled objects that live
// over Z. All entries of Mod* types are kept reduced.

struct ModVector {
  uint64_t mod = 0;
  std::vector<uint64_t> v;

  ModVector() = default;
  ModVector(uint64_t m, size_t len) : mod(m), v(len, 0) {}
  size_t size() const { return v.size(); }
  uint64_t& operator[](size_t i) { return v[i]; }
  uint64_t operator[](size_t i) const { return v[i]; }
  bool operator==(const ModVector&) const = default;
};

struct ModMatrix {
  uint64_t mod = 0;
  size_t rows = 0, cols = 0;
  std::vector<uint64_t> a;  // row-major

  ModMatrix() = default;
  ModMatrix(uint64_t m, size_t r, size_t c) : mod(m), rows(r), cols(c), a(r * c, 0) {}
  uint64_t& at(size_t r, size_t c) { return a[r * cols + c]; }
  uint64_t at(size_t r, size_t c) const { return a[r * cols + c]; }
  const uint64_t* row(size_t r) const { return a.data() + r * cols; }
  uint64_t* row(size_t r) { return a.data() + r * cols; }
  bool operator==(const ModMatrix&) const = default;
};

struct SignedVector {
  std::vector<int64_t> v;

  SignedVector() = default;
  explicit SignedVector(size_t len) : v(len, 0) {}
  size_t size() const { return v.size(); }
  int64_t& operator[](size_t i) { return v[i]; }
  int64_t operator[](size_t i) const { return v[i]; }
  bool operator==(const SignedVector&) const = default;
};

struct SignedMatrix {
  size_t rows = 0, cols = 0;
  std::vector<int64_t> a;  // row-major

  SignedMatrix() = default;
  SignedMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}
  int64_t& at(size_t r, size_t c) { return a[r * cols + c]; }
  int64_t at(size_t r, size_t c) const { return a[r * cols + c]; }
  bool operator==(const SignedMatrix&) const = default;
};

// ---- uniform sampling ----
ModMatrix random_matrix(Rng& rng, uint64_t mod, size_t rows, size_t cols);
ModVector random_vector(Rng& rng, uint64_t mod, size_t len);

// ---- structural helpers ----
ModMatrix identity_matrix(uint64_t mod, size_t n);
ModMatrix transpose(const ModMatrix& m);
ModMatrix hstack(const ModMatrix& a, const ModMatrix& b);

// ---- arithmetic mod m ----
ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b);
ModMatrix mat_sub(const ModMatrix& a, const ModMatrix& b);
ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b);
ModVector mat_vec(const ModMatrix& a, const ModVector& x);      // A * x
ModVector vec_mat(const ModVector& x, const ModMatrix& a);      // x^T * A
ModVector vec_add(const ModVector& a, const ModVector& b);
ModVector vec_sub(const ModVector& a, const ModVector& b);
uint64_t dot_mod(const ModVector& a, const ModVector& b);

// ---- conversions & mixed ops ----
ModMatrix to_mod(const SignedMatrix& s, uint64_t mod);
ModVector to_mod(const SignedVector& s, uint64_t mod);
// Lift a reduced vector into a larger modulus (entries unchanged as integers).
ModVector lift_mod(const ModVector& x, uint64_t new_mod);

// Integer (no reduction) products; Errc::bound_exceeded if a result entry
// cannot be represented in int64.
SignedVector signed_mat_vec(const SignedMatrix& a, const SignedVector& x);
// D * id over Z where id holds residues (each < its modulus, treated as
// non-negative integers).
SignedVector signed_mat_modvec(const SignedMatrix& a, const ModVector& x);
SignedVector signed_vec_add(const SignedVector& a, const SignedVector& b);
SignedVector signed_vec_sub(const SignedVector& a, const SignedVector& b);
SignedMatrix signed_mat_sub(const SignedMatrix& a, const SignedMatrix& b);

double inf_norm(const SignedVector& v);
double col_norm(const SignedMatrix& m, size_t col);  // Euclidean

// Smallest nonzero solution convention for the revocation direction: given a
// set of vectors mod a prime p, return some nonzero v with <v, row_i> = 0 mod p
// for every input row. Deterministic: reduced row echelon form with the
// lowest-index free variable set to 1 and remaining free variables 0.
// Errc::no_solution when only the zero vector is orthogonal to all rows.
ModVector solve_nullspace(const std::vector<ModVector>& rows, uint64_t p);

}  // namespace ipfefr
