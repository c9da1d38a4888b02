#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ipfefr/params.hpp"

namespace ipfefr {

// Self-contained timing harness for the full epoch workload, shared by the
// command-line `bench` subcommand and the acceptance checks.
//
// One repetition plays a complete epoch cycle at n = 64, X = Y = 2:
//   system-setup, group-setup; ukeygen for each of the N institutions;
//   fkeygen + directory publication for each institution (institution i holds
//   its own function x_i); one encryption and one verified decryption;
//   group-update revoking floor(N/2) institutions; uptkeygen for the step;
//   ct-update of the stored ciphertext; fupdate broadcast per function;
//   key-update for every surviving institution.
// Operation timings are wall-clock per block; multi-call blocks record the
// call count so per-call costs can be read off. The reported statistics are
// the median and the median absolute deviation across repetitions; an initial
// untimed warmup repetition is run first.

struct BenchConfig {
  uint32_t l1 = 5;      // function/message length
  uint32_t n_inst = 5;  // institutions N
  uint32_t reps = 3;    // timed repetitions (>= 1)
  uint64_t seed = 1;
  bool warmup = true;
};

struct OpTiming {
  std::string name;
  double median_ms = 0;  // per-repetition block time
  double mad_ms = 0;
  uint32_t calls = 1;    // calls inside one block
};

struct BenchResult {
  Params prm;
  BenchConfig cfg;
  std::vector<OpTiming> ops;  // fixed order, the eleven operations
};

// Runs the suite at derive(64, cfg.l1, cfg.n_inst, 2, 2). If `progress` is
// non-null a line is written per repetition.
BenchResult run_epoch_suite(const BenchConfig& cfg, std::ostream* progress = nullptr);

// Fixed-width human-readable table.
std::string bench_table(const BenchResult& r);

// Timing of one named operation (Errc::not_found if absent).
const OpTiming& op_timing(const BenchResult& r, const std::string& name);

}  // namespace ipfefr
