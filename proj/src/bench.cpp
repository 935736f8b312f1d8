#include "gerty/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace gerty {

std::string gen_fanout_source(int n) {
  std::ostringstream out;
  std::string N = std::to_string(n);
  // appN
  out << "app" << N << " : (a : (0, " << 2 * n << ") Type 0) -> (b : (0, 2) Type 0)\n";
  for (int i = 0; i < n; ++i) out << "-> (x" << i << " : (1, 0) a) ";
  out << "\n-> (f : (1, 0) (";
  for (int i = 0; i < n; ++i) out << "(y" << i << " : (1, 0) a) -> ";
  out << "b)) -> b\n";
  out << "app" << N << " = \\a -> \\b -> ";
  for (int i = 0; i < n; ++i) out << "\\x" << i << " -> ";
  out << "\\f -> f";
  for (int i = 0; i < n; ++i) out << " x" << i;
  out << "\n\n";
  // fanN
  out << "fan" << N << " : (a : (0, " << n + 1 << ") Type 0) -> (b : (0, 2) Type 0)\n";
  out << "-> (f : (1, 0) (";
  for (int i = 0; i < n; ++i) out << "(z" << i << " : (1, 0) a) -> ";
  out << "b))\n";
  out << "-> (x : (" << n << ", 0) a) -> b\n";
  out << "fan" << N << " = \\a -> \\b -> \\f -> \\x -> app" << N << " a b";
  for (int i = 0; i < n; ++i) out << " x";
  out << " f\n";
  return out.str();
}

std::vector<Declaration> gen_fanout(int n) {
  return parse_file(gen_fanout_source(n), "<fanout-" + std::to_string(n) + ">").decls;
}

namespace {

double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / (double)xs.size();
}

double stderr_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return -1;  // undefined for a single trial
  double m = mean(xs);
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= (double)(xs.size() - 1);
  return std::sqrt(v / (double)xs.size());
}

double cpu_ms() {
  timespec ts;
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return (double)ts.tv_sec * 1000.0 + (double)ts.tv_nsec / 1e6;
}

// Process CPU time for the in-process backend (immune to scheduling
// noise); wall time for the smt backend, so the external solver's cost
// stays inside the measurement.
double time_check_once(const ParsedFile& file, const CheckOptions& opt) {
  bool wall = opt.backend == EqualityBackend::Smt;
  DefEnv defs;
  auto w0 = std::chrono::steady_clock::now();
  double c0 = cpu_ms();
  FileReport rep = check_declarations(file, opt, defs);
  double c1 = cpu_ms();
  auto w1 = std::chrono::steady_clock::now();
  if (!rep.ok())
    throw GertyError(ErrorCode::TypeMismatch,
                     "benchmark program failed to check: " + rep.decls.front().error);
  return wall ? std::chrono::duration<double, std::milli>(w1 - w0).count() : c1 - c0;
}

// One trial records the better of two back-to-back runs, rejecting
// one-sided scheduler outliers.
double time_check_ms(const ParsedFile& file, const CheckOptions& opt) {
  double a = time_check_once(file, opt);
  double b = time_check_once(file, opt);
  return std::min(a, b);
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  std::string solver;
  if (cfg.backend == EqualityBackend::Smt) {
    solver = resolve_solver(cfg.solver_cmd);
    if (solver.empty())
      throw GertyError(ErrorCode::SolverUnavailable,
                       "the smt backend needs a solver (--smt-solver)");
  }
  for (int n : cfg.arities) {
    ParsedFile file;
    file.decls = gen_fanout(n);
    CheckOptions base;
    base.semiring = cfg.semiring;
    base.backend = cfg.backend;
    base.solver_cmd = solver;
    base.optimise = false;
    CheckOptions optd = base;
    optd.optimise = true;

    std::vector<double> base_ms, opt_ms;
    // Untimed warm-ups, then interleaved timed pairs in alternating
    // order (ABBA) to cancel drift.
    time_check_ms(file, base);
    time_check_ms(file, optd);
    for (int t = 0; t < cfg.trials; ++t) {
      if (t % 2 == 0) {
        base_ms.push_back(time_check_ms(file, base));
        opt_ms.push_back(time_check_ms(file, optd));
      } else {
        opt_ms.push_back(time_check_ms(file, optd));
        base_ms.push_back(time_check_ms(file, base));
      }
    }
    BenchRow row;
    row.arity = n;
    row.base_mean_ms = mean(base_ms);
    row.base_stderr_ms = stderr_of(base_ms);
    row.opt_mean_ms = mean(opt_ms);
    row.opt_stderr_ms = stderr_of(opt_ms);
    row.speedup = row.base_mean_ms / row.opt_mean_ms;
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows,
                      const std::string& backend_name) {
  std::ostringstream out;
  out << "arity,backend,base_ms,base_stderr,optimised_ms,optimised_stderr,speedup\n";
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const auto& r : rows) {
    out << r.arity << "," << backend_name << "," << r.base_mean_ms << ",";
    if (r.base_stderr_ms < 0) out << "n/a";
    else out << r.base_stderr_ms;
    out << "," << r.opt_mean_ms << ",";
    if (r.opt_stderr_ms < 0) out << "n/a";
    else out << r.opt_stderr_ms;
    out << "," << r.speedup << "\n";
  }
  return out.str();
}

}  // namespace gerty
