#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gerty/oracle.hpp"
#include "gerty/parse.hpp"
#include "helpers.hpp"

using namespace gerty;

namespace {
const SemiringSpec& nat() { return *find_semiring("nat"); }
}

TEST_CASE("the nested-context variable-rule derivation validates") {
  // ((), (1)) . a : Type, x : a |- x : a with subject (0,1), type (1,0).
  DerivCtx c = deriv_ctx_empty();
  deriv_ctx_extend(c, "a", t_universe(0), derive_type_node(c, 0));
  deriv_ctx_extend(c, "x", t_var("a"), derive_var_node(c, 0));
  DerivPtr var = derive_var_node(c, 1);
  OracleResult res = check_derivation(var, nat());
  INFO(res.error);
  CHECK(res.ok);
  CHECK(show_vec(var->conclusion.subject_use, nat()) == "(0,1)");
  CHECK(show_vec(var->conclusion.type_use, nat()) == "(1,0)");
}

TEST_CASE("a perturbed variable rule is rejected") {
  DerivCtx c = deriv_ctx_empty();
  deriv_ctx_extend(c, "a", t_universe(0), derive_type_node(c, 0));
  deriv_ctx_extend(c, "x", t_var("a"), derive_var_node(c, 0));
  DerivPtr var = derive_var_node(c, 1);
  Derivation broken = *var;
  broken.conclusion.subject_use = {g_one(), g_one()};  // should be 0,1
  OracleResult res = check_derivation(mk_deriv(broken), nat());
  CHECK_FALSE(res.ok);
  CHECK(res.error.find("T-Var") != std::string::npos);
}

TEST_CASE("an application missing the scaling is rejected") {
  Generator gen(99, nat());
  // Find a generated application and drop the s * sigma4 contribution.
  for (int i = 0; i < 200; ++i) {
    DerivPtr d = gen.gen_derivation(8);
    if (d->rule != "T-App") continue;
    REQUIRE(check_derivation(d, nat()).ok);
    Derivation broken = *d;
    broken.conclusion.subject_use = broken.premises[0]->conclusion.subject_use;
    // Changing the subject grading must invalidate the node unless the
    // scaled contribution happens to be zero.
    GradeVec scaled = scalar_mul(
        d->g1, d->premises[2]->conclusion.subject_use);
    bool vacuous = vec_equal(scaled, zero_vec(scaled.size()), nat());
    if (vacuous) continue;
    OracleResult res = check_derivation(mk_deriv(broken), nat());
    CHECK_FALSE(res.ok);
    return;
  }
  FAIL("no application with a nonzero scaled contribution was generated");
}

TEST_CASE("generated derivations validate and cover the rules") {
  Generator gen(7, nat());
  std::map<std::string, int> seen;
  for (int i = 0; i < 300; ++i) {
    DerivPtr d = gen.gen_derivation(10);
    OracleResult res = check_derivation(d, nat());
    INFO("case ", i, " rule ", d->rule, ": ", res.error);
    REQUIRE(res.ok);
    std::function<void(const DerivPtr&)> count = [&](const DerivPtr& n) {
      seen[n->rule]++;
      for (const auto& p : n->premises)
        if (p) count(p);
    };
    count(d);
  }
  for (const char* rule :
       {"T-Var", "T-Type", "T-Arrow", "T-Fun", "T-App", "T-Ten", "T-Pair", "T-TenCut",
        "T-Box", "T-BoxI", "T-BoxE", "T-Conv", "Wf-Ext", "Wf-Empty"}) {
    INFO(rule);
    CHECK(seen[rule] > 0);
  }
}

TEST_CASE("budget-1 derivations are leaves") {
  Generator gen(3, nat());
  for (int i = 0; i < 50; ++i) {
    DerivPtr d = gen.gen_derivation(1);
    CHECK((d->rule == "T-Var" || d->rule == "T-Type"));
  }
}

TEST_CASE("oracle and algorithm agree on generated derivations") {
  SuiteResult res = agreement_suite(2024, 120, nat());
  for (const auto& m : res.messages) MESSAGE(m);
  CHECK(res.failures == 0);
  CHECK(res.cases == 120);
}

TEST_CASE("the substitution lemma suite re-checks") {
  SuiteResult res = subst_lemma_suite(11, 60, nat());
  for (const auto& m : res.messages) MESSAGE(m);
  CHECK(res.failures == 0);
}

TEST_CASE("structural admissibility re-checks") {
  SuiteResult res = structural_suite(12, 60, nat());
  for (const auto& m : res.messages) MESSAGE(m);
  CHECK(res.failures == 0);
}

TEST_CASE("single-step preservation on closed subjects") {
  SuiteResult res = preservation_suite(13, 60, nat());
  for (const auto& m : res.messages) MESSAGE(m);
  CHECK(res.failures == 0);
}

TEST_CASE("assumptions of well-formed contexts re-check (Lemma 2)") {
  SuiteResult res = wf_assumption_suite(14, 60, nat());
  for (const auto& m : res.messages) MESSAGE(m);
  CHECK(res.failures == 0);
}

TEST_CASE("generated well-typed terms terminate") {
  SuiteResult res = termination_suite(15, 200, nat());
  for (const auto& m : res.messages) MESSAGE(m);
  CHECK(res.failures == 0);
}

TEST_CASE("exchange of dependent assumptions is malformed") {
  // A row that ends exactly between the swapped columns.
  CtxGradeVec d = {{g_one(), g_zero()}};
  CHECK_THROWS_AS(exch(1, d), GertyError);
}

TEST_CASE("the worked substitution instance re-checks as a judgment") {
  // Two type variables y focuses, x : Type 0, and a trailing assumption
  // whose type uses x twice: substituting y for x moves the grade 2 onto
  // y's column, exactly the discard/choose computation.
  const SemiringSpec& s = nat();
  // t' : Type 0 using x twice: (w :(1,0) x) -> x
  TermPtr tprime = t_pi("w", g_one(), g_zero(), t_var("x"), t_var("x"));
  CtxGradeVec delta_prime = {{g_zero(), g_zero(), g_num(2ul)}};
  GradeVec sigma2 = {g_zero(), g_one()};  // subject grading of y over Gamma1
  CtxGradeVec transformed =
      ctx_add(discard(delta_prime, 2), ctx_scale(choose(delta_prime, 2), sigma2));
  REQUIRE(transformed.size() == 1);

  TermPtr substituted = subst(tprime, "x", t_var("y"));
  // The transformed row must make the substituted type's formation
  // judgment re-check over Gamma1 = a : Type 0, y : Type 0.
  Judgment formation;
  formation.form = JForm::Typing;
  formation.ctx = {{"a", t_universe(0)}, {"y", t_universe(0)}};
  formation.delta = {{}, {g_zero()}};
  formation.subject = substituted;
  formation.type = t_universe(0);
  formation.subject_use = transformed[0];
  formation.type_use = {g_zero(), g_zero()};
  std::string err;
  bool ok = recheck_judgment(formation, gerty::test::options(), nullptr, &err);
  INFO(err);
  CHECK(ok);
  CHECK(show_vec(transformed[0], s) == "(0,2)");
}

TEST_CASE("an empty file produces an empty report") {
  ParsedFile f = parse_file("", "<empty>");
  DefEnv defs;
  FileReport rep = check_declarations(f, gerty::test::options(), defs);
  CHECK(rep.decls.empty());
  CHECK(rep.ok());
}
