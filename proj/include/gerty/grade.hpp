#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gerty/diagnostics.hpp"

namespace gerty {

// ---------------------------------------------------------------------------
// Semiring carrier values
// ---------------------------------------------------------------------------

// An element of a grade semiring: an arbitrary-precision natural, or an
// index into a finite carrier (the element names live in the SemiringSpec).
struct GradeValue {
  bool is_nat = true;
  mpz_class nat = 0;
  int fin = 0;

  static GradeValue natural(mpz_class n) { return GradeValue{true, std::move(n), 0}; }
  static GradeValue finite(int idx) { return GradeValue{false, 0, idx}; }

  bool operator==(const GradeValue& o) const {
    if (is_nat != o.is_nat) return false;
    return is_nat ? nat == o.nat : fin == o.fin;
  }
  bool operator!=(const GradeValue& o) const { return !(*this == o); }
};

struct SemiringSpec {
  std::string name;
  // Empty carrier means the naturals; otherwise the names of the finite
  // carrier's elements, indexed by GradeValue::fin.
  std::vector<std::string> carrier;
  GradeValue zero;
  GradeValue one;
  bool quantitative = false;
  std::function<GradeValue(const GradeValue&, const GradeValue&)> add;
  std::function<GradeValue(const GradeValue&, const GradeValue&)> mul;
  // Partial order, present only for lattice semirings (security); the
  // lattice operations themselves are add/mul.
  std::function<bool(const GradeValue&, const GradeValue&)> leq;

  bool finite() const { return !carrier.empty(); }
  std::string show(const GradeValue& v) const;
  // Index of a named carrier element, if any.
  std::optional<int> element(const std::string& name) const;
};

// The five built-in semirings: nat, zero-one, none-one-tons, security,
// singleton.
const std::vector<SemiringSpec>& builtin_semirings();
const SemiringSpec* find_semiring(const std::string& name);

// ---------------------------------------------------------------------------
// Grade expressions
// ---------------------------------------------------------------------------

struct GradeExpr;
using GradePtr = std::shared_ptr<const GradeExpr>;

enum class GradeKind { Zero, One, Add, Mul, Lit, Meta };

struct GradeExpr {
  GradeKind kind;
  GradePtr lhs, rhs;     // Add / Mul
  std::string lit;       // Lit: carrier element name (e.g. Lo, Hi, inf)
  int meta = 0;          // Meta: id
  SourceSpan span;
};

GradePtr g_zero();
GradePtr g_one();
GradePtr g_add(GradePtr a, GradePtr b);
GradePtr g_mul(GradePtr a, GradePtr b);
GradePtr g_lit(std::string name, SourceSpan span = {});
GradePtr g_meta(int id, SourceSpan span = {});
// Unary encoding of a numeral: .0 = Zero, .n = (...(0 + 1) + 1...).
GradePtr g_num(const mpz_class& n);
GradePtr g_num(unsigned long n);

bool grade_has_meta(const GradePtr& g);
// Collects the meta ids occurring in g (appended to out, unordered).
void grade_metas(const GradePtr& g, std::vector<int>& out);

// Evaluates a closed grade expression to a carrier value.
// Throws UnresolvedMetaVar / ForeignLiteral.
GradeValue eval_grade(const GradePtr& e, const SemiringSpec& s);

// Semiring-independent simplification: folds pure numeral subtrees
// (reassociation plus the 0/1 unit and absorption laws, valid in every
// semiring) and prunes units around literals and metavariables.
GradePtr normalize_grade(const GradePtr& e);

// True when normalize_grade(e) is the literal Zero.
bool grade_is_syntactic_zero(const GradePtr& e);

// Renders a grade expression the way diagnostics expect: numerals print in
// the dotted form (.0, .1, ...), carrier literals by name, metavariables
// as `_`.
std::string show_grade(const GradePtr& e);

// Bare rendering of a carrier value (0, 1, 2, Lo, Hi, ...); used when
// printing grade vectors.
std::string show_value(const GradeValue& v, const SemiringSpec& s);

// ---------------------------------------------------------------------------
// Law checking
// ---------------------------------------------------------------------------

struct LawViolation {
  std::string law;      // e.g. "add-commutativity"
  std::string witness;  // rendered witness tuple
};

struct LawReport {
  std::string semiring;
  bool exhaustive = false;  // true when the carrier is finite
  long cases = 0;
  std::vector<LawViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Exhaustive on finite carriers, randomized (samples per law) on naturals.
LawReport check_semiring_laws(const SemiringSpec& s, long samples = 200);

struct QuantReport {
  std::string semiring;
  bool verdict = false;           // the classification used by the checker
  bool axioms_hold = false;       // zero-unique && positivity && zero-product
  std::vector<LawViolation> failures;  // failing axioms with witnesses
  std::string note;               // closed-form / semantic argument
};

// Verifies the quantitative-semiring axioms (zero-unique, positivity,
// zero-product): exhaustively on finite carriers, sampled plus the
// closed-form argument on naturals. The verdict is the built-in
// classification; the note field explains the one case where it differs
// from the bare axiom check (the security lattice satisfies the axioms,
// but its zero is an inhabited security level, not absence of use).
QuantReport is_quantitative(const SemiringSpec& s, long samples = 200);

}  // namespace gerty
