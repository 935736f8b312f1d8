// Command-line front end; links only the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gerty/capi.h"

namespace {

struct Common {
  std::string semiring = "nat";
  std::string equality = "normal";
  bool optimise = false;
  bool debug_elision = false;
  std::string solver;
  long fuel = 100000;
  unsigned long long seed = 42;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--semiring", c.semiring,
                  "grade semiring: nat, zero-one, none-one-tons, security, singleton");
  cmd->add_option("--equality", c.equality, "grade equality backend: normal or smt");
  cmd->add_flag("--optimize", c.optimise, "elide substitutions into 0-graded variables");
  cmd->add_flag("--debug-elision", c.debug_elision,
                "cross-check every elided substitution");
  cmd->add_option("--smt-solver", c.solver, "SMT solver command (smt backend)");
  cmd->add_option("--fuel", c.fuel, "normalization step budget");
  cmd->add_option("--seed", c.seed, "random seed for generated suites");
}

int run(const Common& c, const char* command, const std::vector<std::string>& args,
        const std::vector<std::pair<std::string, std::string>>& extra) {
  gerty_options* opts = gerty_options_new();
  gerty_options_set(opts, "semiring", c.semiring.c_str());
  gerty_options_set(opts, "equality", c.equality.c_str());
  gerty_options_set(opts, "optimize", c.optimise ? "1" : "0");
  gerty_options_set(opts, "debug-elision", c.debug_elision ? "1" : "0");
  if (!c.solver.empty()) gerty_options_set(opts, "smt-solver", c.solver.c_str());
  gerty_options_set(opts, "fuel", std::to_string(c.fuel).c_str());
  gerty_options_set(opts, "seed", std::to_string(c.seed).c_str());
  for (const auto& [k, v] : extra) gerty_options_set(opts, k.c_str(), v.c_str());

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  gerty_result* res =
      gerty_run(opts, command, argv.empty() ? nullptr : argv.data(), (int)argv.size());
  fputs(gerty_result_output(res), stdout);
  fputs(gerty_result_diagnostics(res), stderr);
  int code = gerty_result_code(res);
  gerty_result_free(res);
  gerty_options_free(opts);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gerty: a graded modal dependent type checker"};
  app.require_subcommand(1);

  Common c;

  auto* check = app.add_subcommand("check", "type check a .gerty file");
  std::string check_file;
  check->add_option("file", check_file)->required();
  add_common(check, c);

  auto* eval = app.add_subcommand("eval", "normalize a declaration and print it");
  std::string eval_file, eval_name;
  eval->add_option("file", eval_file)->required();
  eval->add_option("name", eval_name)->required();
  add_common(eval, c);

  auto* translate =
      app.add_subcommand("translate", "translate a declaration into STLC or SSF");
  std::string tr_file, tr_name, tr_target = "stlc";
  translate->add_option("--target", tr_target, "stlc or ssf");
  translate->add_option("file", tr_file)->required();
  translate->add_option("name", tr_name)->required();
  add_common(translate, c);

  auto* bench = app.add_subcommand("bench", "run the fanout checking benchmark");
  std::string arities = "3..8", csv;
  int trials = 10;
  bench->add_option("--arities", arities, "e.g. 3..8 or 1,2,3");
  bench->add_option("--trials", trials);
  bench->add_option("--csv", csv, "write results to a CSV file");
  std::string bench_backend = "normal";
  bench->add_option("--backend", bench_backend, "normal or smt");
  add_common(bench, c);

  auto* selftest = app.add_subcommand("selftest", "run a metatheory property suite");
  std::string suite = "subst";
  int cases = 300;
  selftest->add_option("--suite", suite,
                       "subst, structural, preservation, agreement, wf, termination");
  selftest->add_option("--cases", cases);
  add_common(selftest, c);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return run(c, "check", {check_file}, {});
  if (eval->parsed()) return run(c, "eval", {eval_file, eval_name}, {});
  if (translate->parsed())
    return run(c, "translate", {tr_file, tr_name}, {{"target", tr_target}});
  if (bench->parsed()) {
    Common cb = c;
    cb.equality = bench_backend == "smt" ? "smt" : "normal";
    return run(cb, "bench", {},
               {{"arities", arities}, {"trials", std::to_string(trials)}, {"csv", csv}});
  }
  if (selftest->parsed())
    return run(c, "selftest", {}, {{"suite", suite}, {"cases", std::to_string(cases)}});
  return GERTY_ERR_CONFIG;
}
