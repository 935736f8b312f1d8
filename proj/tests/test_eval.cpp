#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gerty/eval.hpp"
#include "gerty/parse.hpp"
#include "helpers.hpp"

using namespace gerty;

TEST_CASE("single steps fire the expected rules") {
  // (\x -> x) u
  TermPtr t = t_app(t_lam("x", t_var("x")), t_var("u"));
  StepResult r = step(t);
  REQUIRE(r.stepped);
  CHECK(std::string(r.rule) == "beta-fun");
  CHECK(alpha_eq(r.term, t_var("u")));

  // let [x] = [Type 0] in x
  TermPtr b = t_letbox("x", t_boxintro(t_universe(0)), t_var("x"));
  r = step(b);
  REQUIRE(r.stepped);
  CHECK(std::string(r.rule) == "beta-box");
  CHECK(r.term->kind == TermKind::Universe);

  // case <a, b> of <x, y> -> x
  TermPtr p = t_letpair("x", "y", t_pair(t_var("a"), t_var("b")), t_var("x"));
  r = step(p);
  REQUIRE(r.stepped);
  CHECK(std::string(r.rule) == "beta-tensor");
  CHECK(alpha_eq(r.term, t_var("a")));

  // neutral terms are stuck
  CHECK_FALSE(step(t_var("x")).stepped);
  CHECK_FALSE(step(t_app(t_var("f"), t_var("x"))).stepped);
}

TEST_CASE("cbn does not reduce under binders or inside intro forms") {
  TermPtr redex = t_app(t_lam("y", t_var("y")), t_var("u"));
  CHECK_FALSE(step(t_lam("x", redex)).stepped);
  CHECK_FALSE(step(t_pair(redex, redex)).stepped);
  CHECK_FALSE(step(t_boxintro(redex)).stepped);
  // ... but the head of an application and scrutinees do reduce
  CHECK(step(t_app(redex, t_var("z"))).stepped);
  CHECK(step(t_letbox("x", redex, t_var("x"))).stepped);
}

TEST_CASE("simultaneous pair substitution avoids component capture") {
  // case <y, Type 0> of <x, y> -> x y : the y inside the first component
  // must refer to the outer y, not the bound one.
  TermPtr t = t_letpair("x", "y", t_pair(t_var("y"), t_universe(0)),
                        t_app(t_var("x"), t_var("y")));
  StepResult r = step(t);
  REQUIRE(r.stepped);
  CHECK(alpha_eq(r.term, t_app(t_var("y"), t_universe(0))));
}

TEST_CASE("normalization reaches the normal form or exhausts fuel") {
  // id applied to (Type 0) and a variable
  TermPtr id2 = t_lam("a", t_lam("x", t_var("x")));
  TermPtr t = t_app(t_app(id2, t_universe(0)), t_var("v"));
  CHECK(alpha_eq(normalize(t), t_var("v")));

  CHECK(alpha_eq(normalize(t_var("x")), t_var("x")));

  // fan3's body applied to arguments reaches f x x x
  ParsedFile f = gerty::test::parse_corpus("app3fan3.gerty");
  DefEnv defs;
  for (const auto& d : f.decls) defs.add(d.name, d.signature, d.body);
  TermPtr call = parse_term("fan3 a b f x");
  TermPtr nf = normalize(call, &defs);
  CHECK(alpha_eq(nf, parse_term("f x x x")));

  // an obvious loop exhausts fuel
  TermPtr omega = t_app(t_lam("x", t_app(t_var("x"), t_var("x"))),
                        t_lam("x", t_app(t_var("x"), t_var("x"))));
  CHECK_THROWS_AS(normalize(omega, nullptr, 500), GertyError);
}

TEST_CASE("step is deterministic") {
  TermPtr inner = t_app(t_lam("y", t_var("y")), t_var("u"));
  TermPtr t = t_app(inner, t_var("z"));
  StepResult r1 = step(t), r2 = step(t);
  REQUIRE(r1.stepped);
  REQUIRE(r2.stepped);
  CHECK(alpha_eq(r1.term, r2.term));
  CHECK(std::string(r1.rule) == r2.rule);
}

TEST_CASE("definitional equality includes beta and eta") {
  EvalEnv env;
  // \x -> f x = f
  CHECK(def_equal(env, t_lam("x", t_app(t_var("f"), t_var("x"))), t_var("f")));
  // let [x] = t in [x] = t
  CHECK(def_equal(env, t_letbox("x", t_var("t"), t_boxintro(t_var("x"))), t_var("t")));
  // case t of <x,y> -> <x,y> = t
  CHECK(def_equal(env, t_letpair("x", "y", t_var("t"), t_pair(t_var("x"), t_var("y"))),
                  t_var("t")));
  // beta inside
  CHECK(def_equal(env, t_app(t_lam("x", t_var("x")), t_var("u")), t_var("u")));
  CHECK_FALSE(def_equal(env, t_lam("x", t_var("x")),
                        t_lam("x", t_lam("y", t_var("y")))));
}

TEST_CASE("stepping preserves definitional equality") {
  TermPtr samples[] = {
      t_app(t_lam("x", t_app(t_var("x"), t_var("x"))), t_var("g")),
      t_letbox("x", t_boxintro(t_var("g")), t_boxintro(t_var("x"))),
      t_letpair("x", "y", t_pair(t_var("a"), t_var("b")), t_pair(t_var("y"), t_var("x"))),
  };
  EvalEnv env;
  for (const auto& t : samples) {
    StepResult r = step(t);
    REQUIRE(r.stepped);
    CHECK(def_equal(env, t, r.term));
  }
}

TEST_CASE("subtyping") {
  EvalEnv env;
  CHECK(subtype(env, t_universe(0), t_universe(1)));
  CHECK_FALSE(subtype(env, t_universe(1), t_universe(0)));
  TermPtr a = parse_term("(x : (.1, .0) a) -> b");
  CHECK(subtype(env, a, a));

  // contravariant domains: (x : Type 1) -> A <= (x : Type 0) -> A
  TermPtr f1 = t_pi("x", g_one(), g_zero(), t_universe(1), t_var("A"));
  TermPtr f0 = t_pi("x", g_one(), g_zero(), t_universe(0), t_var("A"));
  CHECK(subtype(env, f1, f0));
  CHECK_FALSE(subtype(env, f0, f1));

  // grades must agree
  TermPtr g1 = t_pi("x", g_one(), g_zero(), t_var("A"), t_var("A"));
  TermPtr g2 = t_pi("x", g_num(2ul), g_zero(), t_var("A"), t_var("A"));
  CHECK_FALSE(subtype(env, g1, g2));

  // covariant box/tensor components
  CHECK(subtype(env, t_boxty(g_one(), t_universe(0)), t_boxty(g_one(), t_universe(1))));
  CHECK_FALSE(
      subtype(env, t_boxty(g_one(), t_universe(0)), t_boxty(g_zero(), t_universe(0))));
}

TEST_CASE("definitions unfold during normalization") {
  DefEnv defs;
  defs.add("self", parse_term("(x : (.1, .0) a) -> a"), t_lam("x", t_var("x")));
  TermPtr call = t_app(t_var("self"), t_var("v"));
  CHECK(alpha_eq(normalize(call, &defs), t_var("v")));
  // opaque without the environment
  CHECK(alpha_eq(normalize(call, nullptr), call));
}
