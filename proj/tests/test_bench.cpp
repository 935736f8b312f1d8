#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gerty/bench.hpp"
#include "helpers.hpp"

using namespace gerty;
using namespace gerty::test;

TEST_CASE("the generated arity-3 program matches the listing") {
  std::vector<Declaration> generated = gen_fanout(3);
  ParsedFile listing = parse_corpus("app3fan3.gerty");
  REQUIRE(generated.size() == 2);
  REQUIRE(listing.decls.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(generated[i].name == listing.decls[i].name);
    INFO(generated[i].name);
    CHECK(alpha_eq(generated[i].signature, listing.decls[i].signature));
    CHECK(alpha_eq(generated[i].body, listing.decls[i].body));
  }
}

TEST_CASE("the degenerate arity") {
  std::vector<Declaration> d = gen_fanout(1);
  REQUIRE(d.size() == 2);
  CHECK(d[1].name == "fan1");
  // fan1's x is graded (1, 0)
  TermPtr sig = d[1].signature;
  while (sig->b->kind == TermKind::Pi) sig = sig->b;
  CHECK(grade_struct_eq(normalize_grade(sig->grade_s), g_one()));
  CHECK(grade_struct_eq(normalize_grade(sig->grade_r), g_zero()));
}

TEST_CASE("generated fanout programs typecheck for small arities") {
  for (int n = 1; n <= 5; ++n) {
    ParsedFile f;
    f.decls = gen_fanout(n);
    DefEnv defs;
    FileReport rep = check_declarations(f, options(), defs);
    INFO("arity ", n);
    CHECK(rep.ok());
  }
}

TEST_CASE("a small bench run produces sane rows") {
  BenchConfig cfg;
  cfg.arities = {1, 2};
  cfg.trials = 2;
  std::vector<BenchRow> rows = run_bench(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.base_mean_ms > 0);
    CHECK(r.opt_mean_ms > 0);
    CHECK(r.speedup > 0);
    CHECK(r.base_stderr_ms >= 0);  // defined for two trials
  }
  std::string csv = bench_csv(rows, "normal");
  CHECK(csv.find("arity,backend,base_ms") != std::string::npos);
  CHECK(csv.find("\n1,normal,") != std::string::npos);
}

TEST_CASE("a single trial reports its standard error as absent") {
  BenchConfig cfg;
  cfg.arities = {1};
  cfg.trials = 1;
  std::vector<BenchRow> rows = run_bench(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].base_stderr_ms < 0);
  std::string csv = bench_csv(rows, "normal");
  CHECK(csv.find("n/a") != std::string::npos);
}
