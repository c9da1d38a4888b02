// Microbenchmarks for the primitive layer and the scheme operations at the
// "micro" profile. The CLI `bench` subcommand times the full epoch workload
// at the working dimensions; these benchmarks isolate single components.

#include <benchmark/benchmark.h>

#include "ipfefr/gadgets.hpp"
#include "ipfefr/gauss.hpp"
#include "ipfefr/params.hpp"
#include "ipfefr/prims.hpp"
#include "ipfefr/rng.hpp"
#include "ipfefr/scheme.hpp"
#include "ipfefr/trapdoor.hpp"
#include "ipfefr/wire.hpp"

namespace {

using namespace ipfefr;

// One shared micro-profile deployment, built on first use.
struct Fixture {
  Params prm = profile("micro");
  Rng rng{uint64_t{42}};
  SystemKeys keys = system_setup(rng, prm);
  GroupSetupResult g = group_setup(rng, keys.mpk);
  UserSecret usk = ukeygen(keys.mpk, g.gs, "inst-0");
  ZCache zc;
  SignedVector x = make_vec(prm.l1, 1);
  SignedVector y = make_vec(prm.l1, 0);
  FunctionKey fk = fkeygen(rng, keys.msk, keys.mpk, g.gpk, usk, x, zc);
  Directory dir = dir_publish(rng, keys.msk, keys.mpk, g.gpk, x);
  Ciphertext ct = enc(rng, keys.mpk, g.gpk, y);

  static SignedVector make_vec(uint32_t len, uint32_t phase) {
    SignedVector v(len);
    for (uint32_t j = 0; j < len; ++j) v[j] = (j + phase) % 2;
    v[0] = 1;
    return v;
  }
  static Fixture& get() {
    static Fixture f;
    return f;
  }
};

void BM_sample_z_table(benchmark::State& state) {
  Rng rng{uint64_t{7}};
  for (auto _ : state) benchmark::DoNotOptimize(sample_z(rng, 0.0, 1.2));
}
BENCHMARK(BM_sample_z_table);

void BM_sample_z_reject(benchmark::State& state) {
  Rng rng{uint64_t{7}};
  for (auto _ : state) benchmark::DoNotOptimize(sample_z(rng, 0.5, 8000.0));
}
BENCHMARK(BM_sample_z_reject);

void BM_gauss_vector_wide(benchmark::State& state) {
  Fixture& f = Fixture::get();
  Rng rng{uint64_t{7}};
  for (auto _ : state)
    benchmark::DoNotOptimize(gauss_vector(rng, f.prm.m, f.prm.rho1));
}
BENCHMARK(BM_gauss_vector_wide);

void BM_trap_gen(benchmark::State& state) {
  Fixture& f = Fixture::get();
  Rng rng{uint64_t{7}};
  for (auto _ : state)
    benchmark::DoNotOptimize(trap_gen(rng, f.prm.n, f.prm.m, f.prm.p));
}
BENCHMARK(BM_trap_gen)->Unit(benchmark::kMillisecond);

void BM_sample_pre_column(benchmark::State& state) {
  Fixture& f = Fixture::get();
  Rng rng{uint64_t{7}};
  ModVector u = random_vector(rng, f.prm.p, f.prm.n);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_pre_vec(rng, f.keys.msk.td, u, f.prm.rho1));
}
BENCHMARK(BM_sample_pre_column)->Unit(benchmark::kMillisecond);

void BM_decode_round_full_scan(benchmark::State& state) {
  Fixture& f = Fixture::get();
  // Worst case: the winning candidate is the last one scanned.
  uint64_t step = f.prm.q / f.prm.p;
  uint64_t noisy = mul_mod(step, f.prm.p - 1, f.prm.q);
  for (auto _ : state)
    benchmark::DoNotOptimize(decode_round(noisy, f.prm.q, step, f.prm.p));
}
BENCHMARK(BM_decode_round_full_scan)->Unit(benchmark::kMillisecond);

void BM_prf_tags(benchmark::State& state) {
  Fixture& f = Fixture::get();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        prf_tags(f.keys.msk.prf_key, f.x, f.prm.p, f.prm.l2));
}
BENCHMARK(BM_prf_tags);

void BM_enc(benchmark::State& state) {
  Fixture& f = Fixture::get();
  Rng rng{uint64_t{7}};
  for (auto _ : state)
    benchmark::DoNotOptimize(enc(rng, f.keys.mpk, f.g.gpk, f.y));
}
BENCHMARK(BM_enc);

void BM_dec(benchmark::State& state) {
  Fixture& f = Fixture::get();
  for (auto _ : state)
    benchmark::DoNotOptimize(dec(f.keys.mpk, f.usk, f.fk, f.dir, f.ct));
}
BENCHMARK(BM_dec)->Unit(benchmark::kMillisecond);

void BM_fkeygen_cached(benchmark::State& state) {
  Fixture& f = Fixture::get();
  Rng rng{uint64_t{7}};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fkeygen(rng, f.keys.msk, f.keys.mpk, f.g.gpk, f.usk, f.x, f.zc));
}
BENCHMARK(BM_fkeygen_cached);

void BM_ct_update(benchmark::State& state) {
  Fixture& f = Fixture::get();
  Rng rng{uint64_t{7}};
  GroupState gs = f.g.gs;  // advance a private copy one epoch
  GroupPublic gpk1 = group_update(rng, f.keys.mpk, gs, {});
  ZCache zc;
  const SignedMatrix& z_old = zc.get(rng, f.keys.msk, f.keys.mpk, f.g.gpk);
  UpdateKey uptk = uptkeygen(rng, f.keys.msk, f.keys.mpk, gpk1, z_old);
  for (auto _ : state)
    benchmark::DoNotOptimize(ct_update(f.keys.mpk, uptk, f.ct));
}
BENCHMARK(BM_ct_update)->Unit(benchmark::kMillisecond);

void BM_wire_ciphertext_roundtrip(benchmark::State& state) {
  Fixture& f = Fixture::get();
  for (auto _ : state) {
    std::vector<uint8_t> bytes = encode_ciphertext(f.ct, f.prm);
    benchmark::DoNotOptimize(decode_ciphertext(bytes, f.prm));
  }
}
BENCHMARK(BM_wire_ciphertext_roundtrip);

}  // namespace

BENCHMARK_MAIN();
