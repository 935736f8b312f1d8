#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gerty/check.hpp"
#include "gerty/oracle.hpp"
#include "helpers.hpp"

using namespace gerty;
using namespace gerty::test;

TEST_CASE("the corpus programs typecheck under their semirings") {
  CHECK(check_corpus("id.gerty").ok());
  CHECK(check_corpus("fst.gerty").ok());
  CHECK(check_corpus("counit.gerty").ok());
  CHECK(check_corpus("comult.gerty").ok());
  CHECK(check_corpus("app3fan3.gerty").ok());
  CHECK(check_corpus("idLo.gerty", "security").ok());
}

TEST_CASE("leak is rejected with the exact diagnostic") {
  FileReport rep = check_corpus("leak.gerty", "security");
  REQUIRE(rep.decls.size() == 2);
  CHECK(rep.decls[0].ok);  // idLo
  REQUIRE_FALSE(rep.decls[1].ok);
  CHECK(rep.decls[1].error.find("At subject stage got the following mismatched "
                                "grades:\n For 'x' expected Hi but got .1") !=
        std::string::npos);
}

TEST_CASE("the worked judgment: a : Type, x : a, y : a |- x : a") {
  Checker checker(options(), nullptr);
  checker.wf_extend("a", t_universe(0));
  checker.wf_extend("x", t_var("a"));
  checker.wf_extend("y", t_var("a"));
  const SemiringSpec& nat = checker.semiring();
  CHECK(show_ctx(checker.delta(), nat) == "((), (1), (1,0))");
  GradedType got = checker.infer(t_var("x"));
  checker.solve();
  CHECK(show_vec(got.subject, nat) == "(0,1,0)");
  CHECK(show_vec(got.subject_type, nat) == "(1,0,0)");
  CHECK(alpha_eq(got.type, t_var("a")));
}

TEST_CASE("closed universes infer with empty vectors") {
  Checker checker(options(), nullptr);
  GradedType got = checker.infer(t_universe(0));
  CHECK(got.type->kind == TermKind::Universe);
  CHECK(normalize_level(got.type->level) == 1);
  CHECK(got.subject.empty());
  CHECK(got.subject_type.empty());
}

TEST_CASE("the constant function checks at its graded type") {
  // \x -> \y -> x : (x :(1,0) A) -> (y :(0,0) B) -> A
  Checker checker(options(), nullptr);
  checker.wf_extend("A", t_universe(0));
  checker.wf_extend("B", t_universe(0));
  TermPtr k = parse_term("\\x -> \\y -> x");
  TermPtr ty = parse_term("(x : (.1, .0) A) -> (y : (.0, .0) B) -> A");
  GradePair res = checker.check(k, ty);
  checker.solve();
  CHECK(show_vec(res.subject, checker.semiring()) == "(0,0)");
  CHECK(show_vec(res.subject_type, checker.semiring()) == "(2,1)");
}

TEST_CASE("wf_extend rejects non-types and nonzero type use") {
  Checker checker(options(), nullptr);
  checker.wf_extend("a", t_universe(0));
  checker.wf_extend("x", t_var("a"));
  // x : a is not a type
  CHECK_THROWS_AS(checker.wf_extend("y", t_var("x")), GertyError);
  try {
    Checker c2(options(), nullptr);
    c2.wf_extend("a", t_universe(0));
    c2.wf_extend("x", t_var("a"));
    c2.wf_extend("y", t_var("x"));
  } catch (const GertyError& e) {
    CHECK(e.code == ErrorCode::NotAType);
  }
}

TEST_CASE("error paths carry the expected codes") {
  DefEnv defs;
  CheckOptions opt = options();

  auto fails_with = [&](const std::string& src, ErrorCode code) {
    ParsedFile f = parse_file(src);
    DefEnv local;
    FileReport rep = check_declarations(f, opt, local);
    REQUIRE_FALSE(rep.ok());
    for (const auto& d : rep.decls)
      if (!d.ok) {
        CHECK(d.code == code);
        return;
      }
  };

  fails_with("f : (x : (.1, .0) missing) -> missing\nf = \\x -> x\n",
             ErrorCode::UnboundVariable);
  fails_with("f : Type 1\nf = Type 0 Type 0\n", ErrorCode::NotAFunction);
  // a lambda against a universe cannot check
  fails_with("f : Type 1\nf = \\x -> x\n", ErrorCode::TypeMismatch);
  // wrong subject grade: id at (0,0) on x
  fails_with("f : (a : (.0, .2) Type 0) -> (x : (.0, .0) a) -> a\nf = \\a -> \\x -> x\n",
             ErrorCode::GradeMismatch);
  // universe level mismatch
  fails_with("f : Type 0\nf = Type 0\n", ErrorCode::TypeMismatch);
  // security literals are foreign to the naturals
  fails_with("f : (a : (.0, .2) Type 0) -> (x : (Lo, Hi) a) -> a\nf = \\a -> \\x -> x\n",
             ErrorCode::ForeignLiteral);
}

TEST_CASE("eliminator scrutinee shape errors") {
  CheckOptions opt = options();
  ParsedFile f = parse_file(
      "f : (a : (.0, .2) Type 0) -> (x : (.1, .0) a) -> a\n"
      "f = \\a -> \\x -> case x of <u, v> -> u\n");
  DefEnv defs;
  FileReport rep = check_declarations(f, opt, defs);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.decls[0].code == ErrorCode::NotATensor);

  ParsedFile g = parse_file(
      "f : (a : (.0, .2) Type 0) -> (x : (.1, .0) a) -> a\n"
      "f = \\a -> \\x -> let [u] = x in u\n");
  DefEnv defs2;
  FileReport rep2 = check_declarations(g, opt, defs2);
  REQUIRE_FALSE(rep2.ok());
  CHECK(rep2.decls[0].code == ErrorCode::NotABox);
}

TEST_CASE("definitions are visible to later declarations and unfold") {
  ParsedFile f = parse_file(
      "id : (a : (.0, .2) Type 0) -> (x : (.1, .0) a) -> a\n"
      "id = \\a -> \\x -> x\n"
      "use : (b : (.0, .2) Type 0) -> (y : (.1, .0) b) -> b\n"
      "use = \\b -> \\y -> id b y\n");
  CheckOptions opt = options();
  DefEnv defs;
  CHECK(check_declarations(f, opt, defs).ok());
  CHECK(defs.find("id") != nullptr);
  CHECK(defs.find("use") != nullptr);
}

TEST_CASE("implicit grades are solved and zonked into the signature") {
  FileReport rep = check_corpus("fst.gerty");
  REQUIRE(rep.ok());
  // The anonymous tensor binder solved to (1, 0).
  const TermPtr& sig = rep.decls[0].signature;
  const TermPtr& anon = sig->b->b;
  REQUIRE(anon->kind == TermKind::Pi);
  CHECK(grade_struct_eq(normalize_grade(anon->grade_s), g_one()));
  CHECK(grade_struct_eq(normalize_grade(anon->grade_r), g_zero()));
}

TEST_CASE("the optimisation changes nothing observable") {
  for (const char* name : {"id.gerty", "fst.gerty", "counit.gerty", "comult.gerty",
                           "app3fan3.gerty"}) {
    FileReport base = check_corpus(name, "nat", false);
    FileReport opt = check_corpus(name, "nat", true);
    REQUIRE(base.ok());
    REQUIRE(opt.ok());
    REQUIRE(base.decls.size() == opt.decls.size());
    for (size_t i = 0; i < base.decls.size(); ++i)
      CHECK(alpha_eq(base.decls[i].signature, opt.decls[i].signature));
  }
}

TEST_CASE("elision requires a quantitative semiring") {
  // Under security (not quantitative) the optimised run must still agree.
  FileReport base = check_corpus("idLo.gerty", "security", false);
  FileReport opt = check_corpus("idLo.gerty", "security", true);
  CHECK(base.ok());
  CHECK(opt.ok());
}

TEST_CASE("the debug flag cross-checks every elision on the corpus") {
  CheckOptions opt = options();
  opt.optimise = true;
  opt.debug_elision = true;
  DefEnv defs;
  FileReport rep = check_declarations(parse_corpus("app3fan3.gerty"), opt, defs);
  CHECK(rep.ok());
}

TEST_CASE("accepted corpus judgments validate against the declarative oracle") {
  CheckOptions opt = options();
  opt.record_derivations = true;
  for (const char* name : {"id.gerty", "counit.gerty", "comult.gerty",
                           "app3fan3.gerty"}) {
    DefEnv defs;
    FileReport rep = check_declarations(parse_corpus(name), opt, defs);
    REQUIRE(rep.ok());
    for (const auto& d : rep.decls) {
      REQUIRE(d.body_deriv != nullptr);
      OracleResult oracle = check_derivation(d.body_deriv, *opt.semiring, &defs);
      INFO(name, "/", d.name, ": ", oracle.error);
      CHECK(oracle.ok);
    }
  }
}
