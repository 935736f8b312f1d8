#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gerty/oracle.hpp"

namespace gerty {

// ---------------------------------------------------------------------------
// Simply-typed lambda calculus (embedding target)
// ---------------------------------------------------------------------------

struct SimpleType;
using SimpleTypePtr = std::shared_ptr<const SimpleType>;
struct SimpleType {
  enum class Kind { Base, Arrow } kind;
  std::string base;
  SimpleTypePtr a, b;
};
SimpleTypePtr st_base(std::string name);
SimpleTypePtr st_arrow(SimpleTypePtr a, SimpleTypePtr b);
bool st_equal(const SimpleTypePtr& a, const SimpleTypePtr& b);
std::string show_simple(const SimpleTypePtr& t);

struct StlcTerm;
using StlcPtr = std::shared_ptr<const StlcTerm>;
struct StlcTerm {
  enum class Kind { Var, Lam, App } kind;
  std::string name;
  SimpleTypePtr ann;  // Lam binder annotation
  StlcPtr a, b;
};
StlcPtr stlc_var(std::string n);
StlcPtr stlc_lam(std::string x, SimpleTypePtr ann, StlcPtr body);
StlcPtr stlc_app(StlcPtr f, StlcPtr u);
std::string show_stlc(const StlcPtr& t);

using StlcContext = std::vector<std::pair<std::string, SimpleTypePtr>>;
// Standard inference (binders are annotated); throws on ill-typed input.
SimpleTypePtr stlc_infer(const StlcContext& ctx, const StlcPtr& t);
// One CBN step; nullptr when stuck.
StlcPtr stlc_step(const StlcPtr& t);
// Alpha-equality of the untyped skeletons (annotations ignored).
bool stlc_skeleton_eq(const StlcPtr& a, const StlcPtr& b);

// ---------------------------------------------------------------------------
// Stratified System F (embedding target)
// ---------------------------------------------------------------------------

struct SsfType;
using SsfTypePtr = std::shared_ptr<const SsfType>;
struct SsfType {
  enum class Kind { Var, Arrow, Forall } kind;
  std::string name;     // Var / Forall binder
  uint64_t level = 0;   // Forall kind
  SsfTypePtr a, b;
};
SsfTypePtr ssf_tvar(std::string n);
SsfTypePtr ssf_arrow(SsfTypePtr a, SsfTypePtr b);
SsfTypePtr ssf_forall(std::string x, uint64_t level, SsfTypePtr body);
std::string show_ssf_type(const SsfTypePtr& t);
bool ssf_type_equal(const SsfTypePtr& a, const SsfTypePtr& b);

struct SsfTerm;
using SsfPtr = std::shared_ptr<const SsfTerm>;
struct SsfTerm {
  enum class Kind { Var, Lam, App, TyAbs, TyApp } kind;
  std::string name;     // Var / binder
  uint64_t level = 0;   // TyAbs kind
  SsfTypePtr ty;        // Lam annotation / TyApp argument
  SsfPtr a, b;
};
SsfPtr ssf_var(std::string n);
SsfPtr ssf_lam(std::string x, SsfTypePtr ann, SsfPtr body);
SsfPtr ssf_app(SsfPtr f, SsfPtr u);
SsfPtr ssf_tyabs(std::string x, uint64_t level, SsfPtr body);
SsfPtr ssf_tyapp(SsfPtr f, SsfTypePtr ty);
std::string show_ssf(const SsfPtr& t);

struct SsfBinding {
  std::string name;
  bool is_type = false;
  uint64_t level = 0;   // kind, for type bindings
  SsfTypePtr type;      // for term bindings
};
using SsfContext = std::vector<SsfBinding>;

// Kinding T : *_l with the stratified hierarchy.
uint64_t ssf_kind(const SsfContext& ctx, const SsfTypePtr& t);
SsfTypePtr ssf_infer(const SsfContext& ctx, const SsfPtr& t);

// ---------------------------------------------------------------------------
// Fragment predicates and translations
// ---------------------------------------------------------------------------

// All subject-type grades 0 and all context grade vectors zero.
// Throws NotQuantitative unless the semiring is quantitative.
bool stlc_predicate(const Judgment& j, const SemiringSpec& s);

// Type-typed assumptions carry subject grade 0 (and a zero context
// vector); other assumptions carry subject-type grade 0 and a type with
// no positive universe occurrence.
bool ssf_predicate(const Judgment& j, const SemiringSpec& s);

// Whether Type_l occurs as a positive subterm.
bool universe_positive(const TermPtr& t);

struct StlcResult {
  StlcPtr term;
  SimpleTypePtr type;
  StlcContext ctx;
};
// The grade-directed erasure, driven by the recorded derivation; the
// translated term must check in the internal STLC checker. Throws
// OutOfFragment on tensors, boxes, or nonzero type grades.
StlcResult stlc_translate(const DerivPtr& d, const SemiringSpec& s);

struct SsfResult {
  SsfPtr term;
  SsfTypePtr type;
  SsfContext ctx;
};
SsfResult ssf_translate(const DerivPtr& d, const SemiringSpec& s);

struct SimReport {
  bool ok = true;
  int steps = 0;
  std::string error;
};

// Runs the graded term's reduction and the STLC reduction of its image in
// lockstep for up to `steps` steps, checking the soundness direction
// exactly: t ~> t' implies [[t]] ~> [[t']].
SimReport stlc_simulation_check(const TermPtr& t, const StlcPtr& translated,
                                int steps);

// Pairs a generated fragment judgment with its checker derivation.
struct FragmentSample {
  Judgment judgment;
  DerivPtr deriv;
};
// Generates judgments inside the STLC fragment (types built over
// universe atoms with 0 type-grades everywhere).
std::vector<FragmentSample> gen_stlc_fragment(uint64_t seed, int count);

// Prelude: graded quantification / existential / linear-function
// instances plus the graded-comonad operations, all typechecking under
// the naturals.
std::vector<Declaration> prelude();

}  // namespace gerty
