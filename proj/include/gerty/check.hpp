#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gerty/constraint.hpp"
#include "gerty/eval.hpp"
#include "gerty/parse.hpp"
#include "gerty/vectors.hpp"

namespace gerty {

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

enum class EqualityBackend { Syntactic, Smt };

struct CheckOptions {
  const SemiringSpec* semiring = nullptr;  // defaults to naturals
  EqualityBackend backend = EqualityBackend::Syntactic;
  bool optimise = false;        // elide substitutions into 0-graded variables
  bool debug_elision = false;   // cross-check every elision against the substitution
  long fuel = kDefaultFuel;
  std::string solver_cmd;       // SMT backend; resolved lazily when empty
  bool record_derivations = false;
};

// A type together with the judgment's subject and subject-type grade
// vectors (each of length |Gamma|).
struct GradedType {
  TermPtr type;
  GradeVec subject;
  GradeVec subject_type;
  DerivPtr deriv;  // set when record_derivations is on
};

struct GradePair {
  GradeVec subject;
  GradeVec subject_type;
  DerivPtr deriv;
};

// Bidirectional checker for a single judgment context. Delta and Gamma
// are inputs; infer/check produce the subject and subject-type vectors.
class Checker {
public:
  Checker(const CheckOptions& opt, const DefEnv* defs);
  ~Checker();

  const Context& ctx() const;
  const CtxGradeVec& delta() const;
  const SemiringSpec& semiring() const;

  // Wf-Ext: infers A's type (which must land in a universe with an
  // all-zero subject-type vector) and extends Gamma and Delta.
  void wf_extend(const std::string& x, const TermPtr& type);

  // Extends with a caller-supplied Delta row (re-checking judgments whose
  // grading is already given, e.g. the metatheory suites).
  void extend_given(const std::string& x, const TermPtr& type, const GradeVec& row);

  GradedType infer(const TermPtr& t);
  GradePair check(const TermPtr& t, const TermPtr& type);

  // Discharges the accumulated constraint store through the selected
  // backend and defaults any untouched metavariables. Must be called once
  // per judgment/declaration.
  void solve();

  // The post-solve metavariable assignment.
  const std::map<int, GradePtr>& assignment() const;
  TermPtr zonk(const TermPtr& t) const;
  GradePtr zonk(const GradePtr& g) const;

  int mint_meta();
  size_t constraints_emitted() const;

  struct Impl;

private:
  std::unique_ptr<Impl> impl_;
};

struct DeclReport {
  std::string name;
  bool ok = false;
  std::string error;            // first diagnostic when not ok
  ErrorCode code = ErrorCode::TypeMismatch;
  TermPtr signature;            // zonked signature (implicits resolved)
  DerivPtr signature_deriv;
  DerivPtr body_deriv;
};

struct FileReport {
  std::vector<DeclReport> decls;
  bool ok() const {
    for (const auto& d : decls)
      if (!d.ok) return false;
    return true;
  }
};

// Checks a parsed file: each signature is checked as a type in the empty
// context, each body against its signature; earlier declarations are
// visible to later ones through `defs`.
FileReport check_declarations(const ParsedFile& file, const CheckOptions& opt,
                              DefEnv& defs);

}  // namespace gerty
