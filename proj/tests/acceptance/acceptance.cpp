// Acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gerty/bench.hpp"
#include "gerty/embed.hpp"
#include "gerty/oracle.hpp"
#include "../helpers.hpp"

using namespace gerty;
using namespace gerty::test;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s\n", ok ? "PASS" : "FAIL", n, what.c_str(),
              detail.empty() ? "" : (" — " + detail).c_str());
  std::fflush(stdout);
  if (!ok) failures++;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

// --- criterion 1: golden corpus ---------------------------------------

void criterion1() {
  struct Entry {
    const char* file;
    const char* semiring;
    bool expect_ok;
  };
  const Entry entries[] = {
      {"id.gerty", "nat", true},      {"fst.gerty", "nat", true},
      {"idLo.gerty", "security", true}, {"counit.gerty", "nat", true},
      {"comult.gerty", "nat", true},  {"app3fan3.gerty", "nat", true},
      {"leak.gerty", "security", false},
  };
  bool ok = true;
  std::string detail;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    FileReport rep = check_corpus(e.file, e.semiring);
    double ms = ms_since(t0);
    if (ms >= 1000.0) {
      ok = false;
      detail += std::string(e.file) + " took too long; ";
    }
    if (rep.ok() != e.expect_ok) {
      ok = false;
      detail += std::string(e.file) + (e.expect_ok ? " rejected; " : " accepted; ");
    }
    if (!e.expect_ok) {
      bool found = false;
      for (const auto& d : rep.decls)
        if (!d.ok && d.error.find("For 'x' expected Hi but got .1") != std::string::npos)
          found = true;
      if (!found) {
        ok = false;
        detail += "leak diagnostic missing the exact grade mismatch; ";
      }
    }
  }
  report(1, "golden corpus typechecks (leak rejected with the exact diagnostic)", ok,
         detail);
}

// --- criterion 2: the worked judgment ----------------------------------

void criterion2() {
  Checker checker(options(), nullptr);
  checker.wf_extend("a", t_universe(0));
  checker.wf_extend("x", t_var("a"));
  checker.wf_extend("y", t_var("a"));
  GradedType got = checker.infer(t_var("x"));
  checker.solve();
  const SemiringSpec& nat = checker.semiring();
  std::string delta = show_ctx(checker.delta(), nat);
  std::string s1 = show_vec(got.subject, nat);
  std::string s2 = show_vec(got.subject_type, nat);
  bool ok = delta == "((), (1), (1,0))" && s1 == "(0,1,0)" && s2 == "(1,0,0)";
  report(2, "judgment reproduction for a : Type, x : a, y : a |- x : a", ok,
         ok ? "" : delta + " " + s1 + " " + s2);
}

// --- criterion 3: the substitution vector computation ------------------

void criterion3() {
  CtxGradeVec delta_prime = {{g_zero(), g_zero(), g_num(2ul)}};
  GradeVec sigma2 = {g_zero(), g_one()};
  CtxGradeVec transformed =
      ctx_add(discard(delta_prime, 2), ctx_scale(choose(delta_prime, 2), sigma2));
  CtxGradeVec full = {{}, {g_one()}};
  for (auto& row : transformed) full.push_back(row);
  std::string printed = show_ctx(full, *find_semiring("nat"));
  bool ok = printed == "((), (1), (0,2))";
  report(3, "the worked substitution yields ((), (1), (0,2))", ok,
         ok ? "" : printed);
}

// --- criterion 4: metatheory property suites ---------------------------

void criterion4() {
  const SemiringSpec& nat = *find_semiring("nat");
  SuiteResult subst = subst_lemma_suite(20260810, 300, nat);
  SuiteResult structural = structural_suite(20260811, 300, nat);
  SuiteResult pres = preservation_suite(20260812, 300, nat);
  std::ostringstream detail;
  detail << "subst " << subst.cases << "/" << subst.failures << ", structural "
         << structural.cases << "/" << structural.failures << ", preservation "
         << pres.cases << "/" << pres.failures;
  bool ok = subst.ok() && structural.ok() && pres.ok() && subst.cases == 300 &&
            structural.cases == 300 && pres.cases == 300;
  if (!ok)
    for (const auto& suite : {subst, structural, pres})
      for (const auto& m : suite.messages) detail << "; " << m;
  report(4, "metatheory suites (300 seeded cases each, zero failures)", ok,
         detail.str());
}

// --- criterion 5: embeddings -------------------------------------------

void criterion5() {
  const SemiringSpec& nat = *find_semiring("nat");
  bool ok = true;
  std::string detail;

  std::vector<FragmentSample> samples = gen_stlc_fragment(20260813, 200);
  int sim_failures = 0;
  for (const auto& s : samples) {
    try {
      StlcResult res = stlc_translate(s.deriv, nat);
      SimReport rep = stlc_simulation_check(s.judgment.subject, res.term, 10);
      if (!rep.ok) {
        sim_failures++;
        if (detail.empty()) detail = rep.error;
      }
    } catch (const GertyError& e) {
      sim_failures++;
      if (detail.empty()) detail = e.what();
    }
  }
  if (sim_failures) {
    ok = false;
    detail = "simulation failures: " + std::to_string(sim_failures) + "; " + detail;
  }

  try {
    CheckOptions opt = options();
    opt.record_derivations = true;
    DefEnv defs;
    FileReport rep = check_declarations(parse_corpus("id.gerty"), opt, defs);
    if (!rep.ok()) throw GertyError(ErrorCode::TypeMismatch, "id failed to check");
    SsfResult res = ssf_translate(rep.decls[0].body_deriv, nat);
    SsfTypePtr expected = ssf_forall("a", 0, ssf_arrow(ssf_tvar("a"), ssf_tvar("a")));
    bool shape = res.term->kind == SsfTerm::Kind::TyAbs && res.term->level == 0 &&
                 res.term->a->kind == SsfTerm::Kind::Lam &&
                 res.term->a->a->kind == SsfTerm::Kind::Var &&
                 res.term->a->a->name == res.term->a->name;
    if (!shape || !ssf_type_equal(res.type, expected)) {
      ok = false;
      detail += "; id translated to " + show_ssf(res.term) + " : " +
                show_ssf_type(res.type);
    }
  } catch (const GertyError& e) {
    ok = false;
    detail += std::string("; id translation failed: ") + e.what();
  }

  // leak fails the Ssf predicate: its type parameter has subject grade 1.
  try {
    Checker checker(options(), nullptr);
    checker.wf_extend("g", t_universe(0));
    checker.wf_extend("h", parse_term("(x : (.1, .0) g) -> Type 1"));
    checker.wf_extend("c", t_var("g"));
    GradedType got = checker.infer(t_var("g"));
    checker.solve();
    Judgment j;
    j.ctx = checker.ctx();
    j.delta = checker.delta();
    j.subject = t_var("g");
    j.type = got.type;
    j.subject_use = got.subject;
    j.type_use = got.subject_type;
    if (ssf_predicate(j, nat)) {
      ok = false;
      detail += "; leak's judgment unexpectedly satisfies the Ssf predicate";
    }
  } catch (const GertyError& e) {
    ok = false;
    detail += std::string("; ") + e.what();
  }

  report(5, "embedding simulation (200 terms), id to SSF, leak outside Ssf", ok,
         detail);
}

// --- criterion 6: backend agreement ------------------------------------

std::vector<std::string> generated_programs(int count) {
  std::vector<std::string> programs;
  std::mt19937_64 rng(20260814);
  int i = 0;
  while ((int)programs.size() < count) {
    int kind = i++ % 5;
    std::ostringstream src;
    switch (kind) {
      case 0: {  // identity at a boxed/plain type
        int s = (int)(rng() % 3);
        src << "p : (a : (.0, .2) Type 0) -> (x : (." << s << ", .0) a) -> [." << s
            << "] a\n";
        src << "p = \\a -> \\x -> [x]\n";
        break;
      }
      case 1: {  // K combinator with grades
        src << "p : (a : (.0, .2) Type 0) -> (b : (.0, .1) Type 0) -> "
               "(x : (.1, .0) a) -> (y : (.0, .0) b) -> a\n";
        src << "p = \\a -> \\b -> \\x -> \\y -> x\n";
        break;
      }
      case 2: {  // fanout instances
        src << gen_fanout_source(1 + (int)(rng() % 3));
        break;
      }
      case 3: {  // pair projection through the modality
        src << "p : (a : (.0, .2) Type 0) (b : (.0, .1) Type 0) -> <a * [.0] b> -> a\n";
        src << "p = \\a b q -> case q of <x, y> -> let [z] = y in x\n";
        break;
      }
      default: {  // grade-perturbed identity: rejected under both backends
        int s = 1 + (int)(rng() % 3);
        src << "p : (a : (.0, .2) Type 0) -> (x : (." << s << ", .0) a) -> a\n";
        src << "p = \\a -> \\x -> x\n";  // body uses x exactly once
        if (s == 1) src << "q : (a : (.0, .3) Type 0) -> Type 0\nq = \\a -> a\n";
        break;
      }
    }
    programs.push_back(src.str());
  }
  return programs;
}

void criterion6() {
  std::string solver = test_solver();
  if (solver.empty()) {
    report(6, "backend agreement", false, "no SMT solver available");
    return;
  }
  CheckOptions syn = options();
  CheckOptions smt = options();
  smt.backend = EqualityBackend::Smt;
  smt.solver_cmd = solver;

  bool ok = true;
  std::string detail;
  auto agree = [&](const ParsedFile& f, const std::string& label,
                   const std::string& semiring) {
    CheckOptions a = syn, b = smt;
    a.semiring = b.semiring = find_semiring(semiring);
    DefEnv d1, d2;
    FileReport r1 = check_declarations(f, a, d1);
    FileReport r2 = check_declarations(f, b, d2);
    if (r1.decls.size() != r2.decls.size()) {
      ok = false;
      detail += label + ": report sizes differ; ";
      return;
    }
    for (size_t i = 0; i < r1.decls.size(); ++i)
      if (r1.decls[i].ok != r2.decls[i].ok) {
        ok = false;
        detail += label + "/" + r1.decls[i].name + ": " +
                  (r1.decls[i].ok ? "normal accepts, smt rejects"
                                  : "smt accepts, normal rejects") +
                  "; ";
      }
  };

  const std::pair<const char*, const char*> corpus[] = {
      {"id.gerty", "nat"},     {"fst.gerty", "nat"},      {"idLo.gerty", "security"},
      {"counit.gerty", "nat"}, {"comult.gerty", "nat"},   {"app3fan3.gerty", "nat"},
      {"leak.gerty", "security"}};
  for (const auto& [file, semiring] : corpus)
    agree(parse_corpus(file), file, semiring);

  int i = 0;
  for (const auto& src : generated_programs(100)) {
    agree(parse_file(src, "<gen>"), "program " + std::to_string(i++), "nat");
    if (!ok && detail.size() > 300) break;
  }
  report(6, "syntactic and SMT backends accept/reject identically", ok, detail);
}

// --- criterion 7: the optimisation experiment ---------------------------

void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  // (a) base/optimised agreement for arities 1..8.
  for (int n = 1; n <= 8; ++n) {
    ParsedFile f;
    f.decls = gen_fanout(n);
    DefEnv d1, d2;
    CheckOptions base = options();
    CheckOptions optd = options();
    optd.optimise = true;
    FileReport r1 = check_declarations(f, base, d1);
    FileReport r2 = check_declarations(f, optd, d2);
    if (!r1.ok() || !r2.ok()) {
      ok = false;
      detail += "arity " + std::to_string(n) + " failed to check; ";
      continue;
    }
    for (size_t i = 0; i < r1.decls.size(); ++i)
      if (!alpha_eq(r1.decls[i].signature, r2.decls[i].signature)) {
        ok = false;
        detail += "arity " + std::to_string(n) + " grades differ; ";
      }
  }

  // (b, c) normalization backend: 10 trials over arities 1..8.
  BenchConfig cfg;
  cfg.arities = {1, 2, 3, 4, 5, 6, 7, 8};
  cfg.trials = 10;
  std::vector<BenchRow> rows = run_bench(cfg);
  double speedup8 = rows.back().speedup;
  if (speedup8 < 1.15) {
    ok = false;
    detail += "normalization speedup at arity 8 is " + std::to_string(speedup8) +
              " (< 1.15); ";
  }
  int inversions = 0;
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].base_mean_ms < rows[i - 1].base_mean_ms) inversions++;
  if (inversions > 1) {
    ok = false;
    detail += "base time not weakly monotone (" + std::to_string(inversions) +
              " inversions); ";
  }

  // (d) SMT backend at arity 8.
  std::string solver = test_solver();
  if (solver.empty()) {
    ok = false;
    detail += "no SMT solver for the smt-backend measurement; ";
  } else {
    BenchConfig smt_cfg;
    smt_cfg.arities = {8};
    smt_cfg.trials = 10;
    smt_cfg.backend = EqualityBackend::Smt;
    smt_cfg.solver_cmd = solver;
    std::vector<BenchRow> smt_rows = run_bench(smt_cfg);
    if (smt_rows.front().speedup < 1.1) {
      ok = false;
      detail += "smt speedup at arity 8 is " + std::to_string(smt_rows.front().speedup) +
                " (< 1.1); ";
    }
  }

  double total_s = ms_since(t0) / 1000.0;
  if (total_s >= 300) {
    ok = false;
    detail += "experiment exceeded the 5-minute budget; ";
  }
  std::ostringstream info;
  info << "normal speedup@8 = " << speedup8 << ", runtime " << (int)total_s << "s";
  report(7, "optimisation experiment", ok, detail.empty() ? info.str() : detail + info.str());
}

// --- criterion 8: empirical termination ---------------------------------

void criterion8() {
  SuiteResult res = termination_suite(20260815, 1000, *find_semiring("nat"), 100000);
  bool ok = res.ok() && res.cases == 1000;
  std::string detail = std::to_string(res.cases) + " cases";
  if (!res.messages.empty()) detail += "; " + res.messages.front();
  report(8, "1000 generated well-typed terms normalize within 100000 steps", ok,
         detail);
}

// --- criterion 9: semiring laws ------------------------------------------

void criterion9() {
  bool ok = true;
  std::string detail;
  for (const auto& s : builtin_semirings()) {
    LawReport laws = check_semiring_laws(s);
    if (!laws.ok()) {
      ok = false;
      detail += s.name + ": " + laws.violations.front().law + "; ";
    }
    QuantReport q = is_quantitative(s);
    if (q.verdict != s.quantitative) {
      ok = false;
      detail += s.name + ": quantitativity verdict mismatch; ";
    }
    if (s.quantitative && !q.axioms_hold) {
      ok = false;
      detail += s.name + ": declared quantitative but an axiom fails; ";
    }
  }
  report(9, "law and quantitativity verification for all five semirings", ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all acceptance criteria passed\n");
  return failures == 0 ? 0 : 1;
}
