#pragma once

#include <string>
#include <vector>

#include "gerty/check.hpp"

namespace gerty {

struct BenchConfig {
  std::vector<int> arities;
  int trials = 10;
  EqualityBackend backend = EqualityBackend::Syntactic;
  std::string solver_cmd;
  const SemiringSpec* semiring = nullptr;  // defaults to naturals
};

struct BenchRow {
  int arity = 0;
  double base_mean_ms = 0;
  double base_stderr_ms = 0;   // negative when trials == 1 (undefined)
  double opt_mean_ms = 0;
  double opt_stderr_ms = 0;
  double speedup = 0;          // base mean / optimised mean
};

// The n-ary fanout program: an n-ary application combinator plus a
// combinator that applies an n-ary function to one argument n times.
std::string gen_fanout_source(int n);
std::vector<Declaration> gen_fanout(int n);

// Times full checks (parsing excluded), interleaving base and optimised
// runs; mean and standard error over `trials` timed runs per mode.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

std::string bench_csv(const std::vector<BenchRow>& rows,
                      const std::string& backend_name);

}  // namespace gerty
