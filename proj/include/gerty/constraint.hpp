#pragma once

#include <map>
#include <string>
#include <vector>

#include "gerty/grade.hpp"

namespace gerty {

enum class Stage { Subject, SubjectType, Context };

const char* stage_name(Stage s);

struct Provenance {
  SourceSpan span;
  std::string var;   // the context variable or binder the grades belong to
  Stage stage = Stage::Subject;
  std::string rule;  // emitting rule, for debugging
};

// A grade-equality obligation: expected (left) against computed (right).
struct Constraint {
  GradePtr left;
  GradePtr right;
  Provenance prov;
};

struct Solution {
  std::map<int, GradePtr> assignment;  // metavariable id -> closed grade
  std::vector<Constraint> residual;
};

// The diagnostic format for a failed grade obligation. The expected side
// prints as written (a Hi annotation stays Hi); the computed side prints
// by its semiring value in numeral form (the 1 of any semiring is .1).
std::string render_grade_mismatch(const Provenance& prov, const GradePtr& expected,
                                  const GradePtr& got,
                                  const SemiringSpec* s = nullptr);

// Substitutes an assignment into a grade expression.
GradePtr apply_assignment(const GradePtr& g, const std::map<int, GradePtr>& assignment);

// Normalize-and-compare with first-order unification on metavariable
// normal forms. Unsolvable constraints are a failure under this backend;
// metavariables constrained by nothing (pass them in `all_metas`) default
// to 0. Throws Unsatisfiable with the failing constraint's provenance.
Solution solve_syntactic(const std::vector<Constraint>& cs, const SemiringSpec& s,
                         const std::vector<int>& all_metas = {});

// Discharges the batch through an external SMT-LIB 2 solver process
// (naturals as Int with non-negativity, finite carriers as an enumerated
// datatype with operation tables, metavariables as constants). Throws
// SolverUnavailable / SolverUnknown / Unsatisfiable.
Solution solve_smt(const std::vector<Constraint>& cs, const SemiringSpec& s,
                   const std::string& solver_cmd, const std::vector<int>& all_metas = {});

// Renders the SMT-LIB 2 script that solve_smt would send (exposed for
// tests and debugging).
std::string smt_script(const std::vector<Constraint>& cs, const SemiringSpec& s,
                       const std::vector<int>& all_metas = {});

// Locates a usable solver command: the explicit argument if nonempty,
// else $GERTY_SMT_SOLVER, else z3 on PATH, else the bundled node shim.
// Returns an empty string when none is available.
std::string resolve_solver(const std::string& configured = "");

}  // namespace gerty
