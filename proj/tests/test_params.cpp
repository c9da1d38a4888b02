#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <string>

#include "ipfefr/modarith.hpp"
#include "ipfefr/params.hpp"
#include "ipfefr/trapdoor.hpp"
#include "test_util.hpp"

using namespace ipfefr;

namespace {

bool has_prefixed(const std::vector<std::string>& list,
                  const std::string& prefix) {
  for (const std::string& s : list)
    if (s.rfind(prefix, 0) == 0) return true;
  return false;
}

uint64_t pow_plain(uint64_t p, uint32_t k) {
  uint64_t acc = 1;
  for (uint32_t i = 0; i < k; ++i) acc *= p;
  return acc;
}

}  // namespace

TEST_SUITE("params") {

TEST_CASE("all named profiles validate cleanly") {
  for (const char* name : {"micro", "toy", "full"}) {
    Params prm = profile(name);
    Validation v = validate(prm);
    for (const std::string& s : v.violations) {
      INFO("profile ", name, " violation: ", s);
      CHECK(false);
    }
    CHECK(v.ok());
    // Structural identities hold by construction.
    CHECK(prm.m == 2 * prm.n * prm.h);
    CHECK(prm.h == bits_for_modulus(prm.p));
    CHECK(prm.l2 == prm.n_inst + 1);
    CHECK(prm.q == pow_plain(prm.p, prm.k));
    CHECK(prm.k_range == prm.l1 * prm.x_bound * prm.y_bound);
    CHECK(is_prime_u64(prm.p));
  }
}

TEST_CASE("profile shapes match their frozen derivations") {
  Params micro = profile("micro");
  CHECK(micro.n == 4);
  CHECK(micro.l1 == 2);
  CHECK(micro.n_inst == 2);
  CHECK(micro.l2 == 3);
  CHECK(micro.k == 2);
  CHECK(micro.h == 30);
  CHECK(micro.m == 240);
  CHECK(micro.k_range == 8);
  CHECK(micro.v_max == 3);
  CHECK(micro.v_guaranteed == 2);
  CHECK(micro.sigma2 == doctest::Approx(1.2));
  // Regression pins: the derivation is deterministic, so these exact values
  // are part of the compatibility surface (they feed wire digests).
  CHECK(micro.p == 577357597);
  CHECK(micro.q == 333341794813614409ull);
  CHECK(micro.rho1 == trapdoor_quality_bound(micro.n, micro.m, micro.p));
  CHECK(micro.rho1 == doctest::Approx(252.144));
  CHECK(micro.rho2 == 2.0);
  CHECK(micro.pack_bound == 24206);
  CHECK(micro.pack_width_bits == 16);
  CHECK(micro.pack_total_bits == 3840);

  Params toy = profile("toy");
  CHECK(toy.n == 16);
  CHECK(toy.l1 == 2);
  CHECK(toy.n_inst == 8);
  CHECK(toy.l2 == 9);
  CHECK(toy.k == 3);
  CHECK(toy.h == 21);
  CHECK(toy.m == 672);
  CHECK(toy.k_range == 8);
  // k = 3 gives the directory layer genuine noise width.
  CHECK(toy.sigma1 > 1.0);
  CHECK(toy.p == 1534139);
  CHECK(toy.q == 3610722658969927619ull);
  CHECK(toy.rho1 == doctest::Approx(385.251));
  CHECK(toy.rho2 == 4.0);
  CHECK(toy.sigma1 == doctest::Approx(366.346));
  CHECK(toy.pack_bound == 36985);
  CHECK(toy.pack_width_bits == 17);
  CHECK(toy.pack_total_bits == 11424);

  Params full = profile("full");
  CHECK(full.n == 64);
  CHECK(full.l1 == 5);
  CHECK(full.n_inst == 5);
  CHECK(full.l2 == 6);
  CHECK(full.k == 2);
  CHECK(full.h == 32);
  CHECK(full.m == 4096);
  CHECK(full.k_range == 320);
  CHECK(full.p == 3426202771ull);
  CHECK(full.rho1 == doctest::Approx(871.313));
  CHECK(full.rho2 == 6.0);
  CHECK(full.pack_bound == 836461);
  CHECK(full.pack_width_bits == 21);
  CHECK(full.pack_total_bits == 86016);
}

TEST_CASE("profiles are exactly their derivation calls") {
  DeriveOptions micro_opt;
  micro_opt.v_target = 2;
  CHECK(profile("micro") == derive(4, 2, 2, 2, 2, micro_opt));
  CHECK(profile("toy") == derive(16, 2, 8, 2, 2));
  CHECK(profile("full") == derive(64, 5, 5, 8, 8));
  CHECK(error_code_of([] { profile("nope"); }) == Errc::usage);
}

TEST_CASE("derivation is monotone in the plaintext load") {
  Params small = derive(64, 2, 2, 2, 2);
  Params large = derive(64, 5, 5, 8, 8);
  CHECK(small.p < large.p);
  CHECK(small.k_range < large.k_range);
}

TEST_CASE("validation is sensitive to shrinking the modulus") {
  // The derivation picks the smallest admissible prime; substituting the
  // previous prime (below the computed requirement) must break validation.
  Params prm = profile("toy");
  REQUIRE(is_prime_u64(prm.p));
  uint64_t prev = prm.p - 1;
  while (!is_prime_u64(prev)) --prev;
  Params smaller = prm;
  smaller.p = prev;
  smaller.q = pow_plain(prev, smaller.k);
  smaller.h = bits_for_modulus(prev);
  smaller.m = 2 * smaller.n * smaller.h;
  CHECK(!validate(smaller).ok());
}

TEST_CASE("validate pinpoints structural tampering") {
  Params good = profile("micro");
  REQUIRE(validate(good).ok());

  SUBCASE("wrong q") {
    Params bad = good;
    bad.q = bad.q - 1;
    CHECK(has_prefixed(validate(bad).violations, "moduli: q"));
  }
  SUBCASE("wrong m") {
    Params bad = good;
    bad.m += 1;
    CHECK(!validate(bad).ok());
  }
  SUBCASE("wrong l2") {
    Params bad = good;
    bad.l2 += 1;
    CHECK(!validate(bad).ok());
  }
  SUBCASE("wrong inner-product range") {
    Params bad = good;
    bad.k_range *= 2;
    CHECK(!validate(bad).ok());
  }
  SUBCASE("preimage width below trapdoor quality") {
    Params bad = good;
    bad.rho1 = 1.0;
    CHECK(!validate(bad).ok());
  }
  SUBCASE("composite p") {
    Params bad = good;
    bad.p += 1;  // even
    CHECK(!validate(bad).ok());
  }
  SUBCASE("ciphertext noise too wide for the fresh budget") {
    Params bad = good;
    bad.sigma2 = 1e9;
    CHECK(!validate(bad).ok());
  }
}

TEST_CASE("recorded concessions surface as warnings, not violations") {
  Params micro = profile("micro");
  Validation v = validate(micro);
  REQUIRE(v.ok());
  // micro runs k = 2, so the directory layer decodes with width-zero noise.
  CHECK(has_prefixed(v.warnings, "directory-noise-degenerate"));
  CHECK(has_prefixed(v.warnings, "lwe-rate-floor-p"));

  Params toy = profile("toy");
  Validation vt = validate(toy);
  REQUIRE(vt.ok());
  // toy has genuine directory noise; that concession must NOT be reported.
  CHECK(!has_prefixed(vt.warnings, "directory-noise-degenerate"));
}

TEST_CASE("update budgets grow with depth") {
  Params prm = profile("micro");
  double b1 = update_noise_budget(prm, 1);
  double b2 = update_noise_budget(prm, 2);
  double b3 = update_noise_budget(prm, 3);
  CHECK(b1 > 0);
  CHECK(b2 > b1);
  CHECK(b3 > b2);
  CHECK(fresh_noise_budget(prm) > 0);
  CHECK(directory_noise_budget(prm) >= 0);
}

TEST_CASE("impossible loads are refused") {
  CHECK(error_code_of([] {
          derive(64, 5, 5, uint64_t{1} << 30, uint64_t{1} << 30);
        }) == Errc::params_invalid);
}

TEST_CASE("summary mentions the headline numbers") {
  Params prm = profile("micro");
  std::string s = params_summary(prm);
  CHECK(s.find(std::to_string(prm.p)) != std::string::npos);
  CHECK(s.find(std::to_string(prm.m)) != std::string::npos);
  CHECK(s.find(std::to_string(prm.k_range)) != std::string::npos);
}

}  // TEST_SUITE
