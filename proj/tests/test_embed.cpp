#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gerty/embed.hpp"
#include "helpers.hpp"

using namespace gerty;
using namespace gerty::test;

namespace {
const SemiringSpec& nat() { return *find_semiring("nat"); }

// Checks a closed declaration with derivation recording and returns the
// body derivation.
DerivPtr body_derivation(const std::string& source, const std::string& name) {
  CheckOptions opt = options();
  opt.record_derivations = true;
  DefEnv defs;
  FileReport rep = check_declarations(parse_file(source), opt, defs);
  REQUIRE(rep.ok());
  for (const auto& d : rep.decls)
    if (d.name == name) return d.body_deriv;
  FAIL("declaration not found");
  return nullptr;
}
}  // namespace

TEST_CASE("stlc predicate") {
  // \x -> x over a closed base: sigma2 = 0 everywhere.
  std::vector<FragmentSample> samples = gen_stlc_fragment(5, 5);
  for (const auto& s : samples) CHECK(stlc_predicate(s.judgment, nat()));

  // id's body judgment uses a at the type level.
  Checker checker(options(), nullptr);
  checker.wf_extend("a", t_universe(0));
  checker.wf_extend("x", t_var("a"));
  GradedType got = checker.infer(t_var("x"));
  checker.solve();
  Judgment j;
  j.ctx = checker.ctx();
  j.delta = checker.delta();
  j.subject = t_var("x");
  j.type = got.type;
  j.subject_use = got.subject;
  j.type_use = got.subject_type;
  CHECK_FALSE(stlc_predicate(j, nat()));

  // non-quantitative semirings are rejected outright
  CHECK_THROWS_AS(stlc_predicate(j, *find_semiring("security")), GertyError);
}

TEST_CASE("the K combinator translates to STLC") {
  DerivPtr d = body_derivation(
      "k : (x : (.1, .0) Type 0) -> (y : (.0, .0) Type 0) -> Type 0\n"
      "k = \\x -> \\y -> x\n",
      "k");
  StlcResult res = stlc_translate(d, nat());
  CHECK(show_simple(res.type) == "Type0 -> Type0 -> Type0");
  REQUIRE(res.term->kind == StlcTerm::Kind::Lam);
  REQUIRE(res.term->a->kind == StlcTerm::Kind::Lam);
  CHECK(res.term->a->a->kind == StlcTerm::Kind::Var);
}

TEST_CASE("variables translate to themselves") {
  std::vector<FragmentSample> samples = gen_stlc_fragment(77, 20);
  for (const auto& s : samples) {
    StlcResult res = stlc_translate(s.deriv, nat());
    SimpleTypePtr inferred = stlc_infer(res.ctx, res.term);
    CHECK(st_equal(inferred, res.type));
  }
}

TEST_CASE("terms with boxes are out of the STLC fragment") {
  DerivPtr d = body_derivation(
      "b : (x : (.1, .0) Type 0) -> [.1] Type 0\n"
      "b = \\x -> [x]\n",
      "b");
  CHECK_THROWS_AS(stlc_translate(d, nat()), GertyError);
  try {
    stlc_translate(d, nat());
  } catch (const GertyError& e) {
    CHECK(e.code == ErrorCode::OutOfFragment);
  }
}

TEST_CASE("simulation: beta steps commute with the embedding") {
  // (\x -> x) u for one step; K a b for two steps.
  std::vector<FragmentSample> samples = gen_stlc_fragment(123, 40);
  int stepped = 0;
  for (const auto& s : samples) {
    StlcResult res = stlc_translate(s.deriv, nat());
    SimReport rep = stlc_simulation_check(s.judgment.subject, res.term, 10);
    INFO(rep.error);
    CHECK(rep.ok);
    if (rep.steps > 0) stepped++;
  }
  CHECK(stepped > 0);  // the generator produces genuine redexes
}

TEST_CASE("ssf predicate accepts the representation-independence shape") {
  // gamma : Type (subject grade 0), h : (x : gamma) -> a, c : gamma
  Checker checker(options(), nullptr);
  checker.wf_extend("a", t_universe(0));
  checker.wf_extend("g", t_universe(0));
  checker.wf_extend("h", parse_term("(x : (.1, .0) g) -> a"));
  checker.wf_extend("c", t_var("g"));
  GradedType got = checker.infer(parse_term("h c"));
  checker.solve();
  Judgment j;
  j.ctx = checker.ctx();
  j.delta = checker.delta();
  j.subject = parse_term("h c");
  j.type = got.type;
  j.subject_use = got.subject;
  j.type_use = got.subject_type;
  CHECK(ssf_predicate(j, nat()));

  // leak's body judgment: the type parameter has subject grade 1.
  GradedType leak = checker.infer(t_var("g"));
  checker.solve();
  Judgment lj = j;
  lj.subject = t_var("g");
  lj.type = leak.type;
  lj.subject_use = leak.subject;
  lj.type_use = leak.subject_type;
  CHECK_FALSE(ssf_predicate(lj, nat()));
}

TEST_CASE("positive universe occurrences are excluded") {
  // f : Type -> Type used relevantly fails the predicate.
  CHECK(universe_positive(t_universe(0)));
  CHECK(universe_positive(parse_term("(x : (.1, .0) a) -> Type 0")));
  CHECK_FALSE(universe_positive(parse_term("(x : (.1, .0) Type 0) -> a")));
  Checker checker(options(), nullptr);
  checker.wf_extend("a", t_universe(0));
  checker.wf_extend("f", parse_term("(x : (.1, .0) Type 0) -> Type 0"));
  GradedType got = checker.infer(parse_term("f a"));
  checker.solve();
  Judgment j;
  j.ctx = checker.ctx();
  j.delta = checker.delta();
  j.subject = parse_term("f a");
  j.type = got.type;
  j.subject_use = got.subject;
  j.type_use = got.subject_type;
  CHECK_FALSE(ssf_predicate(j, nat()));
}

TEST_CASE("id translates into stratified System F") {
  DerivPtr d = body_derivation(read_file(corpus_path("id.gerty")), "id");
  SsfResult res = ssf_translate(d, nat());
  // Lambda a : *0. lambda x : a. x  at  forall a : *0. a -> a
  REQUIRE(res.term->kind == SsfTerm::Kind::TyAbs);
  CHECK(res.term->level == 0);
  REQUIRE(res.term->a->kind == SsfTerm::Kind::Lam);
  CHECK(res.term->a->a->kind == SsfTerm::Kind::Var);
  CHECK(res.term->a->a->name == res.term->a->name);
  SsfTypePtr expected =
      ssf_forall("a", 0, ssf_arrow(ssf_tvar("a"), ssf_tvar("a")));
  CHECK(ssf_type_equal(res.type, expected));
  CHECK(ssf_type_equal(ssf_infer(res.ctx, res.term), res.type));
}

TEST_CASE("leak does not translate into Ssf") {
  ParsedFile f = parse_file(
      "leak : (g : (.1, .2) Type 0) -> (h : (.0, .0) ((x : (.0, .0) g) -> Type 1)) -> "
      "(c : (.0, .0) g) -> Type 0\n"
      "leak = \\g -> \\h -> \\c -> g\n");
  CheckOptions opt = options();
  opt.record_derivations = true;
  DefEnv defs;
  FileReport rep = check_declarations(f, opt, defs);
  REQUIRE(rep.ok());
  CHECK_THROWS_AS(ssf_translate(rep.decls[0].body_deriv, nat()), GertyError);
}

TEST_CASE("the prelude typechecks under the naturals") {
  std::vector<Declaration> decls = prelude();
  REQUIRE(decls.size() >= 5);
  ParsedFile f;
  f.decls = decls;
  DefEnv defs;
  FileReport rep = check_declarations(f, options(), defs);
  for (const auto& d : rep.decls) {
    INFO(d.name, ": ", d.error);
    CHECK(d.ok);
  }
  // The existential instance lands in Type 1 = Type (suc 0).
  bool found = false;
  for (const auto& d : decls)
    if (d.name == "exy") {
      found = true;
      CHECK(pretty(d.signature).find("Type 1") != std::string::npos);
    }
  CHECK(found);
}

TEST_CASE("two beta steps of the K redex commute with the embedding") {
  // (\x -> \y -> x) a b  over two base atoms.
  DerivCtx c = deriv_ctx_empty();
  deriv_ctx_extend(c, "a0", t_universe(0), derive_type_node(c, 0));
  deriv_ctx_extend(c, "b0", t_universe(0), derive_type_node(c, 0));
  TermPtr k = t_lam("x", t_lam("y", t_var("x")));
  TermPtr redex = t_app(t_app(k, t_var("a0")), t_var("b0"));
  StlcPtr image = stlc_app(
      stlc_app(stlc_lam("x", st_base("T"), stlc_lam("y", st_base("T"), stlc_var("x"))),
               stlc_var("a0")),
      stlc_var("b0"));
  SimReport rep = stlc_simulation_check(redex, image, 10);
  INFO(rep.error);
  CHECK(rep.ok);
  CHECK(rep.steps == 2);
  // both sides reach a0
  TermPtr t = redex;
  for (int i = 0; i < 2; ++i) t = step(t).term;
  CHECK(alpha_eq(t, t_var("a0")));
}

TEST_CASE("a representation-independence inverse translates with one type abstraction") {
  // \g -> \h -> \c -> h c  at  (g :(0,2) Type) -> (h :(1,0) (x :(1,0) g) -> a)
  //                            -> (c :(1,0) g) -> a
  DerivPtr d = [] {
    CheckOptions opt = options();
    opt.record_derivations = true;
    DefEnv defs;
    FileReport rep = check_declarations(
        parse_file("use : (a : (.0, .2) Type 0) -> (g : (.0, .2) Type 0) -> "
                   "(h : (.1, .0) ((x : (.1, .0) g) -> a)) -> (c : (.1, .0) g) -> a\n"
                   "use = \\a -> \\g -> \\h -> \\c -> h c\n"),
        opt, defs);
    REQUIRE(rep.ok());
    return rep.decls[0].body_deriv;
  }();
  SsfResult res = ssf_translate(d, *find_semiring("nat"));
  // Lambda a. Lambda g. \h. \c. h c : two type abstractions (a and g are
  // both type parameters here), two term lambdas.
  int tyabs = 0, lams = 0;
  SsfPtr t = res.term;
  while (t) {
    if (t->kind == SsfTerm::Kind::TyAbs) { tyabs++; t = t->a; }
    else if (t->kind == SsfTerm::Kind::Lam) { lams++; t = t->a; }
    else break;
  }
  CHECK(tyabs == 2);
  CHECK(lams == 2);
}
