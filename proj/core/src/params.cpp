#include "ipfefr/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ipfefr/errors.hpp"
#include "ipfefr/gadgets.hpp"
#include "ipfefr/gauss.hpp"
#include "ipfefr/modarith.hpp"
#include "ipfefr/trapdoor.hpp"

namespace ipfefr {

namespace {

constexpr double kSigma2Floor = 1.2;   // ciphertext noise width (fixed)
constexpr double kSigma1Safety = 0.9;  // fraction of the directory budget used
constexpr double kTailUpdate = 8.0;    // tail factor for update-noise terms
constexpr double kNormSlack = 1.25;    // expected-norm fluctuation allowance

uint64_t p_cap_for_k(uint32_t k) {
  // Largest p with p^k representable in uint64.
  switch (k) {
    case 2: return 4294967295ull;           // floor(sqrt(2^64 - 1))
    case 3: return 2642245ull;              // floor((2^64 - 1)^(1/3))
    default: fail(Errc::params_invalid, "k must be 2 or 3");
  }
}

uint64_t pow_u64_checked(uint64_t p, uint32_t k) {
  u128 acc = 1;
  for (uint32_t i = 0; i < k; ++i) {
    acc *= p;
    require(acc <= UINT64_MAX, Errc::params_invalid, "p^k exceeds 64 bits");
  }
  return static_cast<uint64_t>(acc);
}

// Expected Euclidean norm of an epoch key Z x after j refreshes (columns of
// width rho1 Gaussians, drift sqrt(1 + 2j) from accumulated epoch deltas),
// with a fluctuation allowance. Entry bound of x is X - 1 < X.
double key_image_norm(uint32_t l1, uint64_t x_bound, double rho1, uint32_t m,
                      uint32_t j) {
  double xnorm = static_cast<double>(x_bound) * std::sqrt(static_cast<double>(l1));
  return kNormSlack * SPECTRAL_C * rho1 * xnorm *
         std::sqrt(static_cast<double>(m)) *
         std::sqrt(1.0 + 2.0 * static_cast<double>(j));
}

struct BudgetInput {
  uint32_t n, l1;
  uint64_t x_bound;
  double sigma2, rho1;
  uint32_t m, h;
};

double fresh_term(const BudgetInput& b) {
  // l1 * X * sigma2 * (1 + sqrt(m) * rho1): the fresh-ciphertext noise energy
  // |x^T e4 - (Zx - v1 + theta 1)^T e3| measured with worst-case key norm.
  return static_cast<double>(b.l1) * static_cast<double>(b.x_bound) * b.sigma2 *
         (1.0 + std::sqrt(static_cast<double>(b.m)) * b.rho1);
}

double update_term(const BudgetInput& b, uint32_t j) {
  // One re-encryption adds, against a depth-j key, noise dominated by
  // (Z_j x)^T E2^T bits(c1): a sum of hm * m independent sigma2-Gaussian
  // products with combined standard deviation sigma2 * |bits| * |Z_j x|
  // (|bits| <= sqrt(hm)); plus the direct x^T E3^T bits term. Budgeted at
  // kTailUpdate standard deviations.
  double hm = std::sqrt(static_cast<double>(b.h) * b.m);
  double zx = key_image_norm(b.l1, b.x_bound, b.rho1, b.m, j);
  double xnorm = static_cast<double>(b.x_bound) * std::sqrt(static_cast<double>(b.l1));
  return kTailUpdate * b.sigma2 * (zx * (hm + 1.0) + hm * xnorm +
                                   static_cast<double>(b.l1) * static_cast<double>(b.x_bound));
}

}  // namespace

double fresh_noise_budget(const Params& prm) {
  BudgetInput b{prm.n, prm.l1, prm.x_bound, prm.sigma2, prm.rho1, prm.m, prm.h};
  return fresh_term(b);
}

double update_noise_budget(const Params& prm, uint32_t j) {
  BudgetInput b{prm.n, prm.l1, prm.x_bound, prm.sigma2, prm.rho1, prm.m, prm.h};
  return update_term(b, j);
}

double directory_noise_budget(const Params& prm) {
  // l2 * p * sigma1 * (1 + sqrt(m) * rho2): bound on |id^T e2 - (D id)^T e1|
  // with id entries < p and D entries of width rho2.
  return static_cast<double>(prm.l2) * static_cast<double>(prm.p) * prm.sigma1 *
         (1.0 + std::sqrt(static_cast<double>(prm.m)) * prm.rho2);
}

Params derive(uint32_t n, uint32_t l1, uint32_t n_inst, uint64_t x_bound,
              uint64_t y_bound, double margin) {
  return derive(n, l1, n_inst, x_bound, y_bound, DeriveOptions{margin, 3, 0});
}

Params derive(uint32_t n, uint32_t l1, uint32_t n_inst, uint64_t x_bound,
              uint64_t y_bound, const DeriveOptions& opt) {
  require(n >= 2 && l1 >= 1 && n_inst >= 1, Errc::params_invalid,
          "dimensions must be positive (n >= 2)");
  require(x_bound >= 2 && y_bound >= 2, Errc::params_invalid,
          "plaintext bounds must be at least 2");
  require(opt.margin >= 1.0, Errc::params_invalid, "margin must be >= 1");
  require(opt.v_target <= opt.v_max, Errc::params_invalid,
          "guaranteed depth target exceeds the operational cap");

  const uint32_t l2 = n_inst + 1;
  const uint64_t k_range = l1 * x_bound * y_bound;
  const double rho2 = std::max(2.0, std::log2(static_cast<double>(n)));

  // Prefer the deepest analytic update guarantee, then the larger k.
  for (uint32_t vg = opt.v_target + 1; vg-- > 0;) {
    for (uint32_t k : {3u, 2u}) {
      const uint64_t p_cap = p_cap_for_k(k);
      // h and p are mutually dependent (m = 2nh feeds the budget that sizes
      // p, and h = ceil(log2 p)); scan h upward and accept the first
      // self-consistent point.
      for (uint32_t h = 2; h <= 63; ++h) {
        const uint64_t h_lo = (h == 1) ? 2 : (1ull << (h - 1)) + 1;
        const uint64_t h_hi = (h >= 64) ? UINT64_MAX : (1ull << h);
        if (h_lo > p_cap) break;
        const uint32_t m = 2 * n * h;

        const double rho1 = trapdoor_quality_bound(n, m, (1ull << (h - 1)) + 1);
        BudgetInput b{n, l1, x_bound, kSigma2Floor, rho1, m, h};
        double total = fresh_term(b);
        for (uint32_t j = 1; j <= vg; ++j) total += update_term(b, j);

        const double p_needed_f =
            4.0 * static_cast<double>(k_range) * opt.margin * total;
        if (p_needed_f > static_cast<double>(p_cap) * 1.0000001) continue;
        uint64_t p_needed = static_cast<uint64_t>(std::ceil(p_needed_f));
        // Hard floors: decode steps need p > 4*K; identity hashing and bounds
        // arithmetic want p beyond every plaintext bound.
        p_needed = std::max({p_needed, 4 * k_range + 1, x_bound + 1,
                             y_bound + 1, static_cast<uint64_t>(l2) + 1, h_lo});
        if (p_needed > h_hi || p_needed > p_cap) continue;
        uint64_t p = next_prime(p_needed);
        if (p > h_hi || p > p_cap) continue;  // prime gap pushed past range

        Params prm;
        prm.n = n;
        prm.m = m;
        prm.l1 = l1;
        prm.l2 = l2;
        prm.n_inst = n_inst;
        prm.p = p;
        prm.k = k;
        prm.q = pow_u64_checked(p, k);
        prm.h = h;
        prm.x_bound = x_bound;
        prm.y_bound = y_bound;
        prm.k_range = k_range;
        prm.rho_td = RHO_TD;
        prm.rho1 = trapdoor_quality_bound(n, m, p);
        prm.rho2 = rho2;
        prm.sigma2 = kSigma2Floor;
        prm.margin = opt.margin;
        prm.v_max = opt.v_max;
        prm.v_guaranteed = vg;

        // Directory noise: the whole remaining mod-q budget (times a safety
        // fraction). For k = 2 this is sub-unit — the layer then carries no
        // effective noise, which the validation surfaces as a warning.
        double denom = 4.0 * static_cast<double>(l2) * opt.margin *
                       (1.0 + std::sqrt(static_cast<double>(m)) * rho2);
        double pk2 = std::pow(static_cast<double>(p), static_cast<double>(k) - 2.0);
        prm.sigma1 = kSigma1Safety * pk2 / denom;

        const double two_c = 2.0 * SPECTRAL_C;
        double s2_rate = std::sqrt(static_cast<double>(m)) + std::sqrt(static_cast<double>(n)) +
                         std::sqrt(static_cast<double>(l1));
        double s1_rate = std::sqrt(static_cast<double>(m)) + std::sqrt(static_cast<double>(n)) +
                         std::sqrt(static_cast<double>(l2));
        prm.alpha = prm.sigma2 / (two_c * static_cast<double>(p) * s2_rate);
        prm.alpha1 = prm.sigma1 / (two_c * static_cast<double>(prm.q) * s1_rate);

        prm.pack_bound = static_cast<uint64_t>(
            std::ceil(static_cast<double>(l1) * static_cast<double>(x_bound) *
                      2.0 * TAIL_CUT * prm.rho1));
        prm.pack_width_bits = pack_width(prm.pack_bound);
        prm.pack_total_bits = static_cast<uint64_t>(prm.m) * prm.pack_width_bits;
        return prm;
      }
    }
  }
  fail(Errc::params_invalid, "no admissible parameter set under the 64-bit cap");
}

Validation validate(const Params& prm) {
  Validation out;
  auto violation = [&](const std::string& s) { out.violations.push_back(s); };
  auto warning = [&](const std::string& s) { out.warnings.push_back(s); };

  if (prm.n < 2 || prm.l1 < 1 || prm.n_inst < 1) violation("dims: nonpositive dimension");
  if (prm.l2 != prm.n_inst + 1) violation("dims: l2 != N + 1");
  if (prm.k != 2 && prm.k != 3) violation("moduli: k outside {2,3}");
  if (!is_prime_u64(prm.p)) violation("moduli: p not prime");
  bool qok = true;
  {
    u128 acc = 1;
    for (uint32_t i = 0; i < prm.k; ++i) {
      acc *= prm.p;
      if (acc > UINT64_MAX) { qok = false; break; }
    }
    if (!qok || static_cast<uint64_t>(acc) != prm.q)
      violation("moduli: q != p^k within 64 bits");
  }
  if (prm.h != bits_for_modulus(prm.p)) violation("gadget: h != ceil(log2 p)");
  if (prm.m != 2 * prm.n * prm.h) violation("gadget: m != 2 n h");
  if (prm.k_range != prm.l1 * prm.x_bound * prm.y_bound)
    violation("plaintext: K != l1 * X * Y");
  if (prm.p <= 4 * prm.k_range) violation("plaintext: p too small for decode step");
  if (prm.v_guaranteed > prm.v_max) violation("updates: guaranteed depth exceeds cap");
  if (prm.margin < 1.0) violation("margin below 1");

  // Width sanity.
  if (prm.rho_td < 1.0) violation("widths: trapdoor width below 1");
  if (prm.rho2 < 2.0) warning("widths: identity-mixing width below 2");
  double qb = trapdoor_quality_bound(prm.n, prm.m, prm.p, prm.rho_td);
  if (prm.rho1 + 1e-9 < qb)
    violation("widths: rho1 below the preimage-sampling quality bound");

  // Rate identities (recorded, not free parameters).
  const double two_c = 2.0 * SPECTRAL_C;
  double s2_rate = std::sqrt(static_cast<double>(prm.m)) +
                   std::sqrt(static_cast<double>(prm.n)) +
                   std::sqrt(static_cast<double>(prm.l1));
  double s1_rate = std::sqrt(static_cast<double>(prm.m)) +
                   std::sqrt(static_cast<double>(prm.n)) +
                   std::sqrt(static_cast<double>(prm.l2));
  double sigma2_expect = two_c * prm.alpha * static_cast<double>(prm.p) * s2_rate;
  double sigma1_expect = two_c * prm.alpha1 * static_cast<double>(prm.q) * s1_rate;
  if (std::fabs(sigma2_expect - prm.sigma2) > 1e-6 * std::max(1.0, prm.sigma2))
    violation("rates: alpha does not reproduce sigma2");
  if (std::fabs(sigma1_expect - prm.sigma1) > 1e-6 * std::max(1.0, prm.sigma1))
    violation("rates: alpha1 does not reproduce sigma1");

  // Correctness budget, ciphertext layer, inflated to the guaranteed depth.
  double total = fresh_noise_budget(prm);
  for (uint32_t j = 1; j <= prm.v_guaranteed; ++j)
    total += update_noise_budget(prm, j);
  double p_budget = static_cast<double>(prm.p) /
                    (4.0 * static_cast<double>(prm.k_range) * prm.margin);
  if (total > p_budget)
    violation("budget: ciphertext noise exceeds p/(4K) at the guaranteed depth");

  // Correctness budget, directory layer.
  double dir = directory_noise_budget(prm) * prm.margin;
  double step = std::pow(static_cast<double>(prm.p),
                         static_cast<double>(prm.k) - 1.0);
  if (dir > step / 4.0)
    violation("budget: directory noise exceeds p^(k-1)/4");
  if (prm.sigma1 < 1.0)
    warning("directory-noise-degenerate: sigma1 < 1, the mod-q layer is "
            "effectively noiseless at this k");

  // Noise-rate floors. Jointly with the correctness budgets and the 64-bit
  // modulus cap these are unsatisfiable for the mod-p layer (the budget forces
  // alpha * p below any constant multiple of sqrt(n) once rho1 reflects a real
  // preimage sampler), so they are reported as warnings, never violations.
  if (prm.alpha * static_cast<double>(prm.p) <= 2.0 * std::sqrt(static_cast<double>(prm.n)))
    warning("lwe-rate-floor-p: alpha * p <= 2 sqrt(n)");
  if (prm.alpha1 * static_cast<double>(prm.q) <= 2.0 * std::sqrt(static_cast<double>(prm.n)))
    warning("lwe-rate-floor-q: alpha1 * q <= 2 sqrt(n)");

  // Packing layer.
  uint64_t expect_bound = static_cast<uint64_t>(
      std::ceil(static_cast<double>(prm.l1) * static_cast<double>(prm.x_bound) *
                2.0 * TAIL_CUT * prm.rho1));
  if (prm.pack_bound < expect_bound)
    violation("packing: bound below the epoch-delta worst case");
  if (prm.pack_width_bits != pack_width(prm.pack_bound))
    violation("packing: width inconsistent with bound");
  if (prm.pack_total_bits != static_cast<uint64_t>(prm.m) * prm.pack_width_bits)
    violation("packing: total bits inconsistent");

  return out;
}

Params profile(std::string_view name) {
  if (name == "micro") return derive(4, 2, 2, 2, 2, DeriveOptions{1.0, 3, 2});
  if (name == "toy") return derive(16, 2, 8, 2, 2, DeriveOptions{1.0, 3, 0});
  if (name == "full") return derive(64, 5, 5, 8, 8, DeriveOptions{1.0, 3, 0});
  fail(Errc::usage, "unknown profile (expected micro, toy, or full)");
}

std::string params_summary(const Params& prm) {
  std::ostringstream os;
  os << "n=" << prm.n << " m=" << prm.m << " l1=" << prm.l1 << " l2=" << prm.l2
     << " N=" << prm.n_inst << "\n"
     << "p=" << prm.p << " k=" << prm.k << " q=" << prm.q << " h=" << prm.h << "\n"
     << "X=" << prm.x_bound << " Y=" << prm.y_bound << " K=" << prm.k_range << "\n"
     << "rho_td=" << prm.rho_td << " rho1=" << prm.rho1 << " rho2=" << prm.rho2
     << " sigma1=" << prm.sigma1 << " sigma2=" << prm.sigma2 << "\n"
     << "alpha=" << prm.alpha << " alpha1=" << prm.alpha1 << "\n"
     << "v_max=" << prm.v_max << " v_guaranteed=" << prm.v_guaranteed << "\n"
     << "pack_bound=" << prm.pack_bound << " pack_width=" << prm.pack_width_bits
     << " pack_bits=" << prm.pack_total_bits << "\n";
  Validation val = validate(prm);
  os << "validation: " << (val.ok() ? "ok" : "INVALID");
  for (const auto& v : val.violations) os << "\n  violation: " << v;
  for (const auto& w : val.warnings) os << "\n  warning: " << w;
  os << "\n";
  return os.str();
}

}  // namespace ipfefr
