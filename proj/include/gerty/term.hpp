#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gerty/grade.hpp"

namespace gerty {

// ---------------------------------------------------------------------------
// Universe levels (closed: the grammar has no level variables)
// ---------------------------------------------------------------------------

struct Level;
using LevelPtr = std::shared_ptr<const Level>;

struct Level {
  enum class Kind { Zero, Suc, Lub } kind;
  LevelPtr a, b;
};

LevelPtr lvl_zero();
LevelPtr lvl_suc(LevelPtr l);
LevelPtr lvl_lub(LevelPtr a, LevelPtr b);
LevelPtr lvl_const(uint64_t n);
uint64_t normalize_level(const LevelPtr& l);

// ---------------------------------------------------------------------------
// Terms: one syntactic sort for computations and types
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind {
  Var,       // x
  Universe,  // Type l
  Pi,        // (x :(s,r) A) -> B
  Lam,       // \x -> t
  App,       // t u
  Tensor,    // (x :r A) * B
  Pair,      // <t, u>
  LetPair,   // case t of <x, y> -> u
  BoxTy,     // [s] A
  BoxIntro,  // [t]
  LetBox,    // let [x] = t in u
};

struct Term {
  TermKind kind;
  std::string name;    // Var / binder of Pi, Lam, Tensor, LetBox; x of LetPair
  std::string name2;   // y of LetPair
  LevelPtr level;      // Universe
  GradePtr grade_s;    // Pi subject grade; BoxTy grade
  GradePtr grade_r;    // Pi type grade; Tensor grade
  TermPtr a, b;        // children: Pi/Tensor domain+codomain, App fn+arg,
                       // Pair fst+snd, LetPair/LetBox scrutinee+body,
                       // Lam body in a, BoxTy/BoxIntro payload in a
  SourceSpan span;
};

TermPtr t_var(std::string name, SourceSpan span = {});
TermPtr t_universe(LevelPtr l, SourceSpan span = {});
TermPtr t_universe(uint64_t l);
TermPtr t_pi(std::string x, GradePtr s, GradePtr r, TermPtr domain, TermPtr codomain,
             SourceSpan span = {});
TermPtr t_lam(std::string x, TermPtr body, SourceSpan span = {});
TermPtr t_app(TermPtr fn, TermPtr arg, SourceSpan span = {});
TermPtr t_tensor(std::string x, GradePtr r, TermPtr first, TermPtr second,
                 SourceSpan span = {});
TermPtr t_pair(TermPtr first, TermPtr second, SourceSpan span = {});
TermPtr t_letpair(std::string x, std::string y, TermPtr pair, TermPtr body,
                  SourceSpan span = {});
TermPtr t_boxty(GradePtr s, TermPtr type, SourceSpan span = {});
TermPtr t_boxintro(TermPtr body, SourceSpan span = {});
TermPtr t_letbox(std::string x, TermPtr box, TermPtr body, SourceSpan span = {});

// Draws a fresh name from a process-wide counter; display code strips the
// $n suffix when unambiguous.
std::string fresh_name(const std::string& base);

void free_vars(const TermPtr& t, std::set<std::string>& out);
bool occurs_free(const std::string& x, const TermPtr& t);

// Capture-avoiding substitution [u/x]t. Binders crossed during the
// traversal are renamed to fresh names (rename pass, then recurse), so the
// result never captures and never reuses a binder that shadows x.
TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& u);

// Single-pass rename of the free occurrences of `from` to `to`. The
// caller must supply a globally fresh `to` (e.g. from fresh_name), which
// rules out capture without any binder refreshing.
TermPtr rename_free(const TermPtr& t, const std::string& from, const std::string& to);

// Alpha-equivalence. Grade annotations compare by normalized structure,
// so the two numeral spellings of the same grade agree.
bool alpha_eq(const TermPtr& t1, const TermPtr& t2);

// Structural grade-expression comparison after normalize_grade.
bool grade_struct_eq(const GradePtr& a, const GradePtr& b);

// ---------------------------------------------------------------------------
// Typing contexts
// ---------------------------------------------------------------------------

struct ContextEntry {
  std::string name;
  TermPtr type;
};

// Ordered, names distinct, later types may only mention earlier names.
using Context = std::vector<ContextEntry>;

int ctx_lookup(const Context& ctx, const std::string& name);  // -1 when absent

}  // namespace gerty
