#include "ipfefr/modmatrix.hpp"

#include <cmath>

namespace ipfefr {

namespace {

void check_same_mod(uint64_t a, uint64_t b) {
  require(a == b, Errc::modulus_mismatch, "operands have different moduli");
}

// Accumulate sum_i a_i * b_i (mod m). Two regimes:
//  - m <= 2^32: raw 64-bit products accumulate exactly in 128 bits for any
//    practical term count (terms < 2^64, count < 2^63), one reduction at end.
//  - larger m: reduce each product, then accumulate the reduced terms (each
//    < m <= 2^64) in 128 bits; safe for up to 2^63 terms.
uint64_t dot_range(const uint64_t* a, const uint64_t* b, size_t n, uint64_t m) {
  u128 acc = 0;
  if (m <= (1ull << 32)) {
    for (size_t i = 0; i < n; ++i) acc += static_cast<u128>(a[i]) * b[i];
  } else {
    for (size_t i = 0; i < n; ++i) acc += mul_mod(a[i], b[i], m);
  }
  return static_cast<uint64_t>(acc % m);
}

// Strided variant for column access.
uint64_t dot_strided(const uint64_t* a, const uint64_t* b, size_t n,
                     size_t stride_b, uint64_t m) {
  u128 acc = 0;
  if (m <= (1ull << 32)) {
    for (size_t i = 0; i < n; ++i) acc += static_cast<u128>(a[i]) * b[i * stride_b];
  } else {
    for (size_t i = 0; i < n; ++i) acc += mul_mod(a[i], b[i * stride_b], m);
  }
  return static_cast<uint64_t>(acc % m);
}

}  // namespace

ModMatrix random_matrix(Rng& rng, uint64_t mod, size_t rows, size_t cols) {
  ModMatrix m(mod, rows, cols);
  for (auto& e : m.a) e = rng.below(mod);
  return m;
}

ModVector random_vector(Rng& rng, uint64_t mod, size_t len) {
  ModVector v(mod, len);
  for (auto& e : v.v) e = rng.below(mod);
  return v;
}

ModMatrix identity_matrix(uint64_t mod, size_t n) {
  ModMatrix m(mod, n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1 % mod;
  return m;
}

ModMatrix transpose(const ModMatrix& m) {
  ModMatrix t(m.mod, m.cols, m.rows);
  for (size_t r = 0; r < m.rows; ++r)
    for (size_t c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
  return t;
}

ModMatrix hstack(const ModMatrix& a, const ModMatrix& b) {
  check_same_mod(a.mod, b.mod);
  require(a.rows == b.rows, Errc::dimension_mismatch, "hstack row mismatch");
  ModMatrix out(a.mod, a.rows, a.cols + b.cols);
  for (size_t r = 0; r < a.rows; ++r) {
    for (size_t c = 0; c < a.cols; ++c) out.at(r, c) = a.at(r, c);
    for (size_t c = 0; c < b.cols; ++c) out.at(r, a.cols + c) = b.at(r, c);
  }
  return out;
}

ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b) {
  check_same_mod(a.mod, b.mod);
  require(a.rows == b.rows && a.cols == b.cols, Errc::dimension_mismatch,
          "matrix add shape mismatch");
  ModMatrix out(a.mod, a.rows, a.cols);
  for (size_t i = 0; i < a.a.size(); ++i) out.a[i] = add_mod(a.a[i], b.a[i], a.mod);
  return out;
}

ModMatrix mat_sub(const ModMatrix& a, const ModMatrix& b) {
  check_same_mod(a.mod, b.mod);
  require(a.rows == b.rows && a.cols == b.cols, Errc::dimension_mismatch,
          "matrix sub shape mismatch");
  ModMatrix out(a.mod, a.rows, a.cols);
  for (size_t i = 0; i < a.a.size(); ++i) out.a[i] = sub_mod(a.a[i], b.a[i], a.mod);
  return out;
}

ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) {
  check_same_mod(a.mod, b.mod);
  require(a.cols == b.rows, Errc::dimension_mismatch, "matrix mul shape mismatch");
  ModMatrix out(a.mod, a.rows, b.cols);
  for (size_t r = 0; r < a.rows; ++r)
    for (size_t c = 0; c < b.cols; ++c)
      out.at(r, c) = dot_strided(a.row(r), b.a.data() + c, a.cols, b.cols, a.mod);
  return out;
}

ModVector mat_vec(const ModMatrix& a, const ModVector& x) {
  check_same_mod(a.mod, x.mod);
  require(a.cols == x.size(), Errc::dimension_mismatch, "mat_vec shape mismatch");
  ModVector out(a.mod, a.rows);
  for (size_t r = 0; r < a.rows; ++r)
    out[r] = dot_range(a.row(r), x.v.data(), a.cols, a.mod);
  return out;
}

ModVector vec_mat(const ModVector& x, const ModMatrix& a) {
  check_same_mod(a.mod, x.mod);
  require(a.rows == x.size(), Errc::dimension_mismatch, "vec_mat shape mismatch");
  ModVector out(a.mod, a.cols);
  for (size_t c = 0; c < a.cols; ++c)
    out[c] = dot_strided(x.v.data(), a.a.data() + c, a.rows, a.cols, a.mod);
  return out;
}

ModVector vec_add(const ModVector& a, const ModVector& b) {
  check_same_mod(a.mod, b.mod);
  require(a.size() == b.size(), Errc::dimension_mismatch, "vec add length mismatch");
  ModVector out(a.mod, a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = add_mod(a[i], b[i], a.mod);
  return out;
}

ModVector vec_sub(const ModVector& a, const ModVector& b) {
  check_same_mod(a.mod, b.mod);
  require(a.size() == b.size(), Errc::dimension_mismatch, "vec sub length mismatch");
  ModVector out(a.mod, a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = sub_mod(a[i], b[i], a.mod);
  return out;
}

uint64_t dot_mod(const ModVector& a, const ModVector& b) {
  check_same_mod(a.mod, b.mod);
  require(a.size() == b.size(), Errc::dimension_mismatch, "dot length mismatch");
  return dot_range(a.v.data(), b.v.data(), a.size(), a.mod);
}

ModMatrix to_mod(const SignedMatrix& s, uint64_t mod) {
  ModMatrix out(mod, s.rows, s.cols);
  for (size_t i = 0; i < s.a.size(); ++i) out.a[i] = from_signed(s.a[i], mod);
  return out;
}

ModVector to_mod(const SignedVector& s, uint64_t mod) {
  ModVector out(mod, s.size());
  for (size_t i = 0; i < s.size(); ++i) out[i] = from_signed(s[i], mod);
  return out;
}

ModVector lift_mod(const ModVector& x, uint64_t new_mod) {
  require(new_mod >= x.mod, Errc::modulus_mismatch, "lift to smaller modulus");
  ModVector out(new_mod, x.size());
  out.v = x.v;
  return out;
}

SignedVector signed_mat_vec(const SignedMatrix& a, const SignedVector& x) {
  require(a.cols == x.size(), Errc::dimension_mismatch,
          "signed mat_vec shape mismatch");
  SignedVector out(a.rows);
  for (size_t r = 0; r < a.rows; ++r) {
    i128 acc = 0;
    const int64_t* row = a.a.data() + r * a.cols;
    for (size_t c = 0; c < a.cols; ++c)
      acc += static_cast<i128>(row[c]) * x[c];
    require(acc <= INT64_MAX && acc >= INT64_MIN, Errc::bound_exceeded,
            "integer product exceeds 64-bit range");
    out[r] = static_cast<int64_t>(acc);
  }
  return out;
}

SignedVector signed_mat_modvec(const SignedMatrix& a, const ModVector& x) {
  require(a.cols == x.size(), Errc::dimension_mismatch,
          "signed mat_modvec shape mismatch");
  SignedVector out(a.rows);
  for (size_t r = 0; r < a.rows; ++r) {
    i128 acc = 0;
    const int64_t* row = a.a.data() + r * a.cols;
    for (size_t c = 0; c < a.cols; ++c)
      acc += static_cast<i128>(row[c]) * static_cast<i128>(x[c]);
    require(acc <= INT64_MAX && acc >= INT64_MIN, Errc::bound_exceeded,
            "integer product exceeds 64-bit range");
    out[r] = static_cast<int64_t>(acc);
  }
  return out;
}

SignedVector signed_vec_add(const SignedVector& a, const SignedVector& b) {
  require(a.size() == b.size(), Errc::dimension_mismatch,
          "signed add length mismatch");
  SignedVector out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    i128 s = static_cast<i128>(a[i]) + b[i];
    require(s <= INT64_MAX && s >= INT64_MIN, Errc::bound_exceeded,
            "integer sum exceeds 64-bit range");
    out[i] = static_cast<int64_t>(s);
  }
  return out;
}

SignedVector signed_vec_sub(const SignedVector& a, const SignedVector& b) {
  require(a.size() == b.size(), Errc::dimension_mismatch,
          "signed sub length mismatch");
  SignedVector out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    i128 s = static_cast<i128>(a[i]) - b[i];
    require(s <= INT64_MAX && s >= INT64_MIN, Errc::bound_exceeded,
            "integer difference exceeds 64-bit range");
    out[i] = static_cast<int64_t>(s);
  }
  return out;
}

SignedMatrix signed_mat_sub(const SignedMatrix& a, const SignedMatrix& b) {
  require(a.rows == b.rows && a.cols == b.cols, Errc::dimension_mismatch,
          "signed matrix sub shape mismatch");
  SignedMatrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.a.size(); ++i) {
    i128 s = static_cast<i128>(a.a[i]) - b.a[i];
    require(s <= INT64_MAX && s >= INT64_MIN, Errc::bound_exceeded,
            "integer difference exceeds 64-bit range");
    out.a[i] = static_cast<int64_t>(s);
  }
  return out;
}

double inf_norm(const SignedVector& v) {
  double m = 0;
  for (int64_t e : v.v) m = std::max(m, std::fabs(static_cast<double>(e)));
  return m;
}

double col_norm(const SignedMatrix& m, size_t col) {
  double s = 0;
  for (size_t r = 0; r < m.rows; ++r) {
    double e = static_cast<double>(m.at(r, col));
    s += e * e;
  }
  return std::sqrt(s);
}

ModVector solve_nullspace(const std::vector<ModVector>& rows, uint64_t p) {
  require(!rows.empty(), Errc::no_solution, "empty constraint set");
  size_t dim = rows[0].size();
  for (const auto& r : rows) {
    check_same_mod(r.mod, p);
    require(r.size() == dim, Errc::dimension_mismatch,
            "constraint rows of unequal length");
  }

  // Reduced row echelon form over the field Z_p.
  ModMatrix m(p, rows.size(), dim);
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < dim; ++c) m.at(r, c) = rows[r][c] % p;

  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < dim && rank < m.rows; ++col) {
    size_t piv = rank;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != rank)
      for (size_t c = 0; c < dim; ++c) std::swap(m.at(piv, c), m.at(rank, c));
    uint64_t inv = inv_mod(m.at(rank, col), p);
    for (size_t c = 0; c < dim; ++c) m.at(rank, c) = mul_mod(m.at(rank, c), inv, p);
    for (size_t r = 0; r < m.rows; ++r) {
      if (r == rank || m.at(r, col) == 0) continue;
      uint64_t f = m.at(r, col);
      for (size_t c = 0; c < dim; ++c)
        m.at(r, c) = sub_mod(m.at(r, c), mul_mod(f, m.at(rank, c), p), p);
    }
    pivot_col.push_back(col);
    ++rank;
  }

  require(rank < dim, Errc::no_solution,
          "constraints span the space; only the zero vector is orthogonal");

  // Lowest-index free variable := 1, all other free variables := 0; pivot
  // variables follow by back-substitution. Deterministic by construction.
  std::vector<bool> is_pivot(dim, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  size_t free_col = dim;
  for (size_t c = 0; c < dim; ++c) {
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  }

  ModVector out(p, dim);
  out[free_col] = 1;
  for (size_t r = 0; r < rank; ++r) {
    // Row r reads: x[pivot_col[r]] + sum_{free c} coeff * x[c] = 0.
    uint64_t coeff = m.at(r, free_col);
    out[pivot_col[r]] = neg_mod(coeff, p);
  }
  return out;
}

}  // namespace ipfefr
