#include "ipfefr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <iomanip>

#include "ipfefr/errors.hpp"
#include "ipfefr/scheme.hpp"

namespace ipfefr {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

constexpr const char* kOpNames[] = {
    "system-setup", "group-setup", "ukeygen", "fkeygen", "enc", "dec",
    "group-update", "uptkeygen", "ct-update", "fupdate", "key-update",
};
constexpr size_t kOpCount = sizeof(kOpNames) / sizeof(kOpNames[0]);

// One full epoch cycle; fills times[0..10] (ms) when `times` is non-null.
void run_cycle(const Params& prm, const BenchConfig& cfg, Rng& rng,
               double* times) {
  const uint32_t N = cfg.n_inst;
  auto timed = [&](size_t op, auto&& body) {
    Clock::time_point t0 = Clock::now();
    body();
    if (times) times[op] = ms_since(t0);
  };

  // Institution i holds function x_i; entries alternate in {0, 1} with phase
  // i, so every x_i is nonzero and the x_i are pairwise distinct for N <= l1+1.
  std::vector<SignedVector> xs(N);
  for (uint32_t i = 0; i < N; ++i) {
    xs[i] = SignedVector(prm.l1);
    for (uint32_t j = 0; j < prm.l1; ++j) xs[i][j] = (i + j) % 2;
    xs[i][i % prm.l1] = 1;  // keep nonzero for every phase
  }
  SignedVector y(prm.l1);
  for (uint32_t j = 0; j < prm.l1; ++j) y[j] = j % 2;

  SystemKeys keys;
  timed(0, [&] { keys = system_setup(rng, prm); });

  GroupSetupResult g;
  timed(1, [&] { g = group_setup(rng, keys.mpk); });
  GroupPublic gpk0 = g.gpk;

  std::vector<UserSecret> usks(N);
  timed(2, [&] {
    for (uint32_t i = 0; i < N; ++i)
      usks[i] = ukeygen(keys.mpk, g.gs, "inst-" + std::to_string(i));
  });

  ZCache zc;
  std::vector<FunctionKey> fks(N);
  std::vector<Directory> dirs(N);
  timed(3, [&] {
    for (uint32_t i = 0; i < N; ++i) {
      fks[i] = fkeygen(rng, keys.msk, keys.mpk, gpk0, usks[i], xs[i], zc);
      dirs[i] = dir_publish(rng, keys.msk, keys.mpk, gpk0, xs[i]);
    }
  });

  Ciphertext ct;
  timed(4, [&] { ct = enc(rng, keys.mpk, gpk0, y); });

  timed(5, [&] {
    uint64_t mu = dec(keys.mpk, usks[0], fks[0], dirs[0], ct);
    uint64_t want = 0;
    for (uint32_t j = 0; j < prm.l1; ++j)
      want += static_cast<uint64_t>(xs[0][j]) * static_cast<uint64_t>(y[j]);
    require(mu == want, Errc::state, "benchmark decryption mismatch");
  });

  std::vector<std::string> revoke;
  for (uint32_t i = 0; i < N / 2; ++i) revoke.push_back(usks[i].name);
  GroupPublic gpk1;
  timed(6, [&] { gpk1 = group_update(rng, keys.mpk, g.gs, revoke); });

  const SignedMatrix& z_old = zc.get(rng, keys.msk, keys.mpk, gpk0);
  UpdateKey uptk;
  timed(7, [&] { uptk = uptkeygen(rng, keys.msk, keys.mpk, gpk1, z_old); });

  timed(8, [&] {
    Ciphertext ct1 = ct_update(keys.mpk, uptk, ct);
    require(ct1.version == 1, Errc::state, "benchmark update mismatch");
  });

  std::vector<UpdateInfo> upis(N);
  timed(9, [&] {
    for (uint32_t i = 0; i < N; ++i)
      upis[i] = fupdate(rng, keys.mpk, g.gs, gpk1, xs[i]);
  });

  timed(10, [&] {
    for (uint32_t i = N / 2; i < N; ++i) {
      FunctionKey fk1 = key_update(keys.mpk, usks[i], fks[i], upis[i]);
      require(fk1.version == 1, Errc::state, "benchmark refresh mismatch");
    }
  });
}

}  // namespace

BenchResult run_epoch_suite(const BenchConfig& cfg, std::ostream* progress) {
  require(cfg.reps >= 1, Errc::usage, "need at least one repetition");
  require(cfg.l1 >= 2, Errc::usage, "need l1 >= 2");
  require(cfg.n_inst >= 2, Errc::usage, "need at least two institutions");

  BenchResult result;
  result.cfg = cfg;
  result.prm = derive(64, cfg.l1, cfg.n_inst, 2, 2);

  Rng root(cfg.seed);
  std::vector<std::vector<double>> samples(kOpCount);

  if (cfg.warmup) {
    if (progress)
      (*progress) << "bench l1=" << cfg.l1 << " N=" << cfg.n_inst
                  << ": warmup" << std::endl;
    Rng rng = root.fork(0);
    run_cycle(result.prm, cfg, rng, nullptr);
  }
  for (uint32_t rep = 0; rep < cfg.reps; ++rep) {
    if (progress)
      (*progress) << "bench l1=" << cfg.l1 << " N=" << cfg.n_inst << ": rep "
                  << (rep + 1) << "/" << cfg.reps << std::endl;
    Rng rng = root.fork(rep + 1);
    double times[kOpCount] = {};
    run_cycle(result.prm, cfg, rng, times);
    for (size_t i = 0; i < kOpCount; ++i) samples[i].push_back(times[i]);
  }

  const uint32_t N = cfg.n_inst;
  const uint32_t calls[kOpCount] = {1, 1, N, N, 1, 1, 1, 1, 1, N, N - N / 2};
  for (size_t i = 0; i < kOpCount; ++i) {
    OpTiming t;
    t.name = kOpNames[i];
    t.calls = calls[i];
    t.median_ms = median(samples[i]);
    std::vector<double> dev;
    for (double v : samples[i]) dev.push_back(std::fabs(v - t.median_ms));
    t.mad_ms = median(dev);
    result.ops.push_back(std::move(t));
  }
  return result;
}

std::string bench_table(const BenchResult& r) {
  std::ostringstream os;
  os << "epoch workload: n=64 l1=" << r.cfg.l1 << " N=" << r.cfg.n_inst
     << " X=Y=2 (p=" << r.prm.p << ", k=" << r.prm.k << ", m=" << r.prm.m
     << "), " << r.cfg.reps << " reps\n";
  os << std::left << std::setw(14) << "operation" << std::right << std::setw(12)
     << "median(ms)" << std::setw(11) << "mad(ms)" << std::setw(7) << "calls"
     << std::setw(15) << "per-call(ms)" << "\n";
  for (const OpTiming& t : r.ops) {
    os << std::left << std::setw(14) << t.name << std::right << std::fixed
       << std::setprecision(3) << std::setw(12) << t.median_ms << std::setw(11)
       << t.mad_ms << std::setw(7) << t.calls << std::setw(15)
       << t.median_ms / t.calls << "\n";
  }
  return os.str();
}

const OpTiming& op_timing(const BenchResult& r, const std::string& name) {
  for (const OpTiming& t : r.ops)
    if (t.name == name) return t;
  fail(Errc::not_found, "no such operation timing: " + name);
}

}  // namespace ipfefr
