#include "ipfefr/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include "ipfefr/errors.hpp"

namespace ipfefr {

namespace {
constexpr double kPi = std::numbers::pi;
}

int64_t sample_z_reject(Rng& rng, double c, double s) {
  require(s > 0, Errc::bound_exceeded, "gaussian width must be positive");
  const double lo_f = std::ceil(c - TAIL_CUT * s);
  const double hi_f = std::floor(c + TAIL_CUT * s);
  // A sub-unit width can truncate the window to the single nearest integer
  // (or to nothing when the center sits between two out-of-window integers;
  // then round to the nearest integer — the limiting distribution).
  if (lo_f > hi_f) return static_cast<int64_t>(std::llround(c));
  const int64_t lo = static_cast<int64_t>(lo_f);
  const int64_t hi = static_cast<int64_t>(hi_f);
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  const double inv_s2 = 1.0 / (s * s);
  for (;;) {
    int64_t x = lo + static_cast<int64_t>(rng.below(span));
    double d = static_cast<double>(x) - c;
    double w = std::exp(-kPi * d * d * inv_s2);
    if (rng.unit() < w) return x;
  }
}

ZTable::ZTable(double s) : s_(s) {
  require(s > 0 && s <= TABLE_S_MAX, Errc::bound_exceeded,
          "table sampler width out of range");
  radius_ = static_cast<int64_t>(std::floor(TAIL_CUT * s));
  const size_t n = static_cast<size_t>(2 * radius_ + 1);
  std::vector<long double> w(n);
  long double total = 0;
  for (size_t i = 0; i < n; ++i) {
    long double x = static_cast<long double>(static_cast<int64_t>(i) - radius_);
    w[i] = expl(-static_cast<long double>(kPi) * x * x / (s * s));
    total += w[i];
  }
  cdf_.resize(n);
  long double run = 0;
  const long double scale = 18446744073709551615.0L;  // 2^64 - 1
  for (size_t i = 0; i < n; ++i) {
    run += w[i];
    long double v = run / total * scale;
    cdf_[i] = (i + 1 == n) ? UINT64_MAX : static_cast<uint64_t>(v);
  }
}

int64_t ZTable::sample(Rng& rng) const {
  uint64_t r = rng.next_u64();
  size_t idx = static_cast<size_t>(
      std::lower_bound(cdf_.begin(), cdf_.end(), r) - cdf_.begin());
  if (idx >= cdf_.size()) idx = cdf_.size() - 1;
  return static_cast<int64_t>(idx) - radius_;
}

namespace {

const ZTable& table_for(double s) {
  static std::mutex mu;
  static std::map<uint64_t, ZTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  uint64_t key;
  static_assert(sizeof(key) == sizeof(s));
  std::memcpy(&key, &s, sizeof(key));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, ZTable(s)).first;
  return it->second;
}

}  // namespace

int64_t sample_z(Rng& rng, double c, double s) {
  if (c == std::floor(c) && s <= TABLE_S_MAX) {
    return static_cast<int64_t>(c) + table_for(s).sample(rng);
  }
  return sample_z_reject(rng, c, s);
}

SignedVector gauss_vector(Rng& rng, size_t len, double s) {
  SignedVector out(len);
  for (auto& e : out.v) e = sample_z(rng, 0.0, s);
  return out;
}

SignedMatrix gauss_matrix(Rng& rng, size_t rows, size_t cols, double s) {
  SignedMatrix out(rows, cols);
  for (auto& e : out.a) e = sample_z(rng, 0.0, s);
  return out;
}

double rho_sum(double s) {
  require(s > 0, Errc::bound_exceeded, "gaussian width must be positive");
  int64_t radius = static_cast<int64_t>(std::floor(TAIL_CUT * s));
  long double total = 0;
  for (int64_t x = -radius; x <= radius; ++x)
    total += expl(-static_cast<long double>(kPi) * x * x / (s * s));
  return static_cast<double>(total);
}

double spectral_norm_estimate(const SignedMatrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0.0;
  std::vector<double> v(m.cols, 1.0 / std::sqrt(static_cast<double>(m.cols)));
  std::vector<double> mv(m.rows);
  double sigma = 0;
  for (int iter = 0; iter < 30; ++iter) {
    for (size_t r = 0; r < m.rows; ++r) {
      double acc = 0;
      const int64_t* row = m.a.data() + r * m.cols;
      for (size_t c = 0; c < m.cols; ++c)
        acc += static_cast<double>(row[c]) * v[c];
      mv[r] = acc;
    }
    std::vector<double> w(m.cols, 0.0);
    for (size_t r = 0; r < m.rows; ++r) {
      const int64_t* row = m.a.data() + r * m.cols;
      double f = mv[r];
      for (size_t c = 0; c < m.cols; ++c)
        w[c] += static_cast<double>(row[c]) * f;
    }
    double norm = 0;
    for (double e : w) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0) return 0.0;
    for (size_t c = 0; c < m.cols; ++c) v[c] = w[c] / norm;
    sigma = std::sqrt(norm);
  }
  return sigma;
}

}  // namespace ipfefr
