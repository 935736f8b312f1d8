#pragma once

#include <functional>
#include <map>
#include <string>

#include "gerty/term.hpp"

namespace gerty {

// Top-level definitions: opaque for grade accounting, unfolded during
// normalization.
struct DefEnv {
  struct Def {
    TermPtr signature;
    TermPtr body;
  };
  std::map<std::string, Def> defs;

  const Def* find(const std::string& name) const {
    auto it = defs.find(name);
    return it == defs.end() ? nullptr : &it->second;
  }
  void add(const std::string& name, TermPtr signature, TermPtr body) {
    defs[name] = {std::move(signature), std::move(body)};
  }
};

struct StepResult {
  bool stepped = false;
  TermPtr term;            // the reduct when stepped, else the input
  const char* rule = "";   // beta-fun / beta-tensor / beta-box / delta / cong-*
};

// One CBN step: the head redex fires (function position of App, scrutinee
// of LetPair/LetBox); no reduction under Lam, inside Pair components, or
// inside BoxIntro. Deterministic; Stuck for normal forms and neutrals.
StepResult step(const TermPtr& t, const DefEnv* defs = nullptr);

inline constexpr long kDefaultFuel = 100000;

// Weak-head normalization by iterating step; FuelExhausted on running out.
TermPtr whnf(const TermPtr& t, const DefEnv* defs, long& fuel);

// Full normalization: weak-head reduce, recurse into every subterm
// position, then eta-contract (functions, tensors, boxes) bottom-up.
TermPtr normalize(const TermPtr& t, const DefEnv* defs = nullptr,
                  long fuel = kDefaultFuel);

using GradeEq = std::function<bool(const GradePtr&, const GradePtr&)>;

// Alpha-comparison with a custom grade-annotation equality.
bool alpha_eq_graded(const TermPtr& t1, const TermPtr& t2, const GradeEq& geq);

struct EvalEnv {
  const DefEnv* defs = nullptr;
  long fuel = kDefaultFuel;
  // Defaults to normalized structural comparison when unset; the checker
  // installs its backend's semantic comparison.
  GradeEq grade_eq;
};

// Definitional equality: normalize both sides and compare up to alpha
// after eta-contraction. Inputs are assumed well-typed at a shared type.
bool def_equal(const EvalEnv& env, const TermPtr& t1, const TermPtr& t2);

// Subtyping: reflexive via def_equal; Type_l <= Type_l' iff l <= l';
// Pi contravariant in the domain, covariant in the codomain, grades
// equal; Tensor and Box covariant with equal grades.
bool subtype(const EvalEnv& env, const TermPtr& a, const TermPtr& b);

}  // namespace gerty
