#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gerty/check.hpp"
#include "gerty/eval.hpp"
#include "gerty/vectors.hpp"

namespace gerty {

// ---------------------------------------------------------------------------
// Declarative judgments and derivations
// ---------------------------------------------------------------------------

enum class JForm { Typing, Wf, Equality, Subtyping };

struct Judgment {
  JForm form = JForm::Typing;
  CtxGradeVec delta;
  GradeVec subject_use;   // sigma_1
  GradeVec type_use;      // sigma_2
  Context ctx;
  TermPtr subject;        // null for Wf
  TermPtr type;           // null for Wf
};

// One node per rule instance. Premise order is fixed per rule; rule
// grades that do not appear in the conclusion term ride along in g1/g2.
struct Derivation {
  std::string rule;
  Judgment conclusion;
  std::vector<DerivPtr> premises;
  size_t index = 0;   // T-Var: the position of the variable
  GradePtr g1, g2;    // per-rule grades (e.g. T-BoxE box grade / result grade)
};

DerivPtr mk_deriv(Derivation d);

struct OracleResult {
  bool ok = true;
  std::string error;
  const Derivation* failing = nullptr;
};

// Direct, non-algorithmic validation: every node must instantiate its
// rule schema with consistent metavariable bindings, vector sizes, and
// grade arithmetic (grades are evaluated, so derivations must be
// metavariable-free).
OracleResult check_derivation(const DerivPtr& d, const SemiringSpec& s,
                              const DefEnv* defs = nullptr);

// ---------------------------------------------------------------------------
// Hand assembly of derivations (shared by generators and tests)
// ---------------------------------------------------------------------------

struct DerivCtx {
  Context ctx;
  CtxGradeVec delta;
  DerivPtr wf;
};

DerivCtx deriv_ctx_empty();
// Extends with x : A given a formation derivation of A over the current
// context; maintains the Wf chain.
void deriv_ctx_extend(DerivCtx& c, const std::string& x, const TermPtr& type,
                      const DerivPtr& formation);
Judgment typing_in(const DerivCtx& c, const TermPtr& subject, const TermPtr& type,
                   GradeVec subject_use, GradeVec type_use);
DerivPtr derive_type_node(const DerivCtx& c, uint64_t level);
DerivPtr derive_var_node(const DerivCtx& c, size_t index);
// Formation derivation for the generator's type grammar (universes, type
// variables, Pi/Tensor/Box over those).
DerivPtr derive_formation(const DerivCtx& c, const TermPtr& type);

// ---------------------------------------------------------------------------
// Generation (rule-directed, bottom-up; valid by construction)
// ---------------------------------------------------------------------------

class Generator {
public:
  Generator(uint64_t seed, const SemiringSpec& s);

  // A typing derivation over a generated context. Every typing rule has
  // nonzero probability of appearing at sufficient budget.
  DerivPtr gen_derivation(int budget);

  // A typing derivation with an empty context (for preservation tests);
  // when `want_redex` is set the subject is built around a beta redex.
  DerivPtr gen_closed(int budget, bool want_redex);

  // A well-formedness derivation for a context of the given width.
  DerivPtr gen_wf(int entries);

  std::mt19937_64& rng() { return rng_; }

  struct Impl;
  std::shared_ptr<Impl> impl;

private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Metatheory suites
// ---------------------------------------------------------------------------

struct SuiteResult {
  int cases = 0;
  int failures = 0;
  std::vector<std::string> messages;
  bool ok() const { return failures == 0; }
};

// Substitution for typing: generates premise pairs, builds the
// substituted judgment exactly as displayed, and re-checks it with the
// algorithmic checker.
SuiteResult subst_lemma_suite(uint64_t seed, int cases, const SemiringSpec& s);

// Contraction / exchange / weakening admissibility, each transformed
// judgment re-accepted with the displayed grades.
SuiteResult structural_suite(uint64_t seed, int cases, const SemiringSpec& s);

// Single-step type preservation on generated closed subjects.
SuiteResult preservation_suite(uint64_t seed, int cases, const SemiringSpec& s);

// Generated derivations' conclusions re-checked algorithmically with
// identical vectors (oracle/algorithm agreement), including the oracle
// validation of each generated derivation.
SuiteResult agreement_suite(uint64_t seed, int cases, const SemiringSpec& s);

// Typing an assumption in a well-formed context (Lemma 2).
SuiteResult wf_assumption_suite(uint64_t seed, int cases, const SemiringSpec& s);

// Empirical termination: generated well-typed terms normalize within the
// given fuel.
SuiteResult termination_suite(uint64_t seed, int cases, const SemiringSpec& s,
                              long fuel = kDefaultFuel);

// Re-checks a judgment (Delta, Gamma given) with the algorithmic checker
// and compares the produced vectors; used by the suites and tests.
bool recheck_judgment(const Judgment& j, const CheckOptions& opt, const DefEnv* defs,
                      std::string* error = nullptr);

}  // namespace gerty
