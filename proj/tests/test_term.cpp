#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gerty/term.hpp"

using namespace gerty;

TEST_CASE("levels normalize to naturals") {
  CHECK(normalize_level(lvl_suc(lvl_zero())) == 1);
  CHECK(normalize_level(lvl_lub(lvl_suc(lvl_zero()), lvl_zero())) == 1);
  LevelPtr l = lvl_suc(lvl_suc(lvl_zero()));
  CHECK(normalize_level(lvl_lub(l, l)) == normalize_level(l));
  // homomorphism into (N, max)
  LevelPtr a = lvl_const(3), b = lvl_const(5);
  CHECK(normalize_level(lvl_lub(a, b)) ==
        std::max(normalize_level(a), normalize_level(b)));
}

TEST_CASE("substitution hits free occurrences only") {
  TermPtr hit = subst(t_var("x"), "x", t_universe(0));
  CHECK(hit->kind == TermKind::Universe);

  // \y -> x with [y/x]: the bound y must be renamed.
  TermPtr lam = t_lam("y", t_var("x"));
  TermPtr res = subst(lam, "x", t_var("y"));
  REQUIRE(res->kind == TermKind::Lam);
  CHECK(res->name != "y");
  CHECK(res->a->kind == TermKind::Var);
  CHECK(res->a->name == "y");
  CHECK(alpha_eq(res, t_lam("w", t_var("y"))));

  // Substitution under a shadowing binder leaves the body alone.
  TermPtr shadow = t_lam("x", t_var("x"));
  CHECK(alpha_eq(subst(shadow, "x", t_universe(0)), shadow));
}

TEST_CASE("the box beta contraction is a substitution") {
  // let [x] = [t1] in t2 reduces to [t1/x]t2; check the right-hand side.
  TermPtr t1 = t_universe(0);
  TermPtr t2 = t_app(t_var("x"), t_var("x"));
  TermPtr expected = t_app(t_universe(0), t_universe(0));
  CHECK(alpha_eq(subst(t2, "x", t1), expected));
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(t_lam("x", t_var("x")), t_lam("y", t_var("y"))));
  CHECK_FALSE(alpha_eq(t_lam("x", t_lam("y", t_var("x"))),
                       t_lam("x", t_lam("y", t_var("y")))));
  TermPtr p1 = t_pi("x", g_one(), g_zero(), t_var("A"), t_var("A"));
  TermPtr p2 = t_pi("z", g_one(), g_zero(), t_var("A"), t_var("A"));
  CHECK(alpha_eq(p1, p2));
  // Grades count: (1,0) vs (0,0)
  TermPtr p3 = t_pi("x", g_zero(), g_zero(), t_var("A"), t_var("A"));
  CHECK_FALSE(alpha_eq(p1, p3));
  // ... but numeral spellings don't: (0+1) vs .1
  TermPtr p4 = t_pi("x", g_add(g_zero(), g_one()), g_zero(), t_var("A"), t_var("A"));
  CHECK(alpha_eq(p1, p4));
  // free variables must match exactly
  CHECK_FALSE(alpha_eq(t_var("x"), t_var("y")));
}

TEST_CASE("subst by the same variable is alpha-identity") {
  TermPtr terms[] = {
      t_lam("y", t_app(t_var("x"), t_var("y"))),
      t_pi("z", g_one(), g_zero(), t_var("x"), t_var("z")),
      t_letpair("p", "q", t_var("x"), t_pair(t_var("p"), t_var("q"))),
      t_letbox("b", t_var("x"), t_boxintro(t_var("b"))),
  };
  for (const auto& t : terms) CHECK(alpha_eq(subst(t, "x", t_var("x")), t));
}

TEST_CASE("free variable queries") {
  TermPtr t = t_lam("x", t_app(t_var("x"), t_var("y")));
  CHECK(occurs_free("y", t));
  CHECK_FALSE(occurs_free("x", t));
  std::set<std::string> fv;
  free_vars(t, fv);
  CHECK(fv == std::set<std::string>{"y"});

  TermPtr lp = t_letpair("a", "b", t_var("p"), t_app(t_var("a"), t_var("c")));
  CHECK(occurs_free("p", lp));
  CHECK(occurs_free("c", lp));
  CHECK_FALSE(occurs_free("a", lp));
}

TEST_CASE("substitution commutes with renaming") {
  // alpha-equal inputs give alpha-equal outputs
  TermPtr t1 = t_lam("y", t_app(t_var("x"), t_var("y")));
  TermPtr t2 = t_lam("w", t_app(t_var("x"), t_var("w")));
  REQUIRE(alpha_eq(t1, t2));
  TermPtr u = t_lam("z", t_var("z"));
  CHECK(alpha_eq(subst(t1, "x", u), subst(t2, "x", u)));
}
