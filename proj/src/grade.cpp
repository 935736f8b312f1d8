#include "gerty/grade.hpp"

#include <algorithm>
#include <random>

namespace gerty {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::UnresolvedMetaVar: return "UnresolvedMetaVar";
    case ErrorCode::ForeignLiteral: return "ForeignLiteral";
    case ErrorCode::NotAType: return "NotAType";
    case ErrorCode::NonZeroTypeUse: return "NonZeroTypeUse";
    case ErrorCode::NotAFunction: return "NotAFunction";
    case ErrorCode::NotATensor: return "NotATensor";
    case ErrorCode::NotABox: return "NotABox";
    case ErrorCode::CannotInfer: return "CannotInfer";
    case ErrorCode::GradeMismatch: return "GradeMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::FuelExhausted: return "FuelExhausted";
    case ErrorCode::MalformedExchange: return "MalformedExchange";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotQuantitative: return "NotQuantitative";
    case ErrorCode::OutOfFragment: return "OutOfFragment";
    case ErrorCode::SimulationMismatch: return "SimulationMismatch";
    case ErrorCode::Unsatisfiable: return "Unsatisfiable";
    case ErrorCode::SolverUnavailable: return "SolverUnavailable";
    case ErrorCode::SolverUnknown: return "SolverUnknown";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

std::string SemiringSpec::show(const GradeValue& v) const {
  if (v.is_nat) return v.nat.get_str();
  if (v.fin >= 0 && v.fin < (int)carrier.size()) return carrier[v.fin];
  return "<bad element #" + std::to_string(v.fin) + ">";
}

std::optional<int> SemiringSpec::element(const std::string& name) const {
  for (size_t i = 0; i < carrier.size(); ++i)
    if (carrier[i] == name) return (int)i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Built-in semirings
// ---------------------------------------------------------------------------

namespace {

SemiringSpec make_nat() {
  SemiringSpec s;
  s.name = "nat";
  s.zero = GradeValue::natural(0);
  s.one = GradeValue::natural(1);
  s.quantitative = true;
  s.add = [](const GradeValue& a, const GradeValue& b) {
    return GradeValue::natural(a.nat + b.nat);
  };
  s.mul = [](const GradeValue& a, const GradeValue& b) {
    return GradeValue::natural(a.nat * b.nat);
  };
  return s;
}

SemiringSpec make_zero_one() {
  SemiringSpec s;
  s.name = "zero-one";
  s.carrier = {"0", "1"};
  s.zero = GradeValue::finite(0);
  s.one = GradeValue::finite(1);
  s.quantitative = true;
  // 1 + 1 = 1: boolean or / and.
  s.add = [](const GradeValue& a, const GradeValue& b) {
    return GradeValue::finite(a.fin | b.fin);
  };
  s.mul = [](const GradeValue& a, const GradeValue& b) {
    return GradeValue::finite(a.fin & b.fin);
  };
  return s;
}

SemiringSpec make_none_one_tons() {
  SemiringSpec s;
  s.name = "none-one-tons";
  s.carrier = {"0", "1", "inf"};  // inf = more than one use
  s.zero = GradeValue::finite(0);
  s.one = GradeValue::finite(1);
  s.quantitative = true;
  // 1 + 1 = inf = 1 + inf; 0 is the identity.
  s.add = [](const GradeValue& a, const GradeValue& b) {
    if (a.fin == 0) return b;
    if (b.fin == 0) return a;
    return GradeValue::finite(2);
  };
  s.mul = [](const GradeValue& a, const GradeValue& b) {
    if (a.fin == 0 || b.fin == 0) return GradeValue::finite(0);
    if (a.fin == 1) return b;
    if (b.fin == 1) return a;
    return GradeValue::finite(2);
  };
  return s;
}

SemiringSpec make_security() {
  SemiringSpec s;
  s.name = "security";
  s.carrier = {"Lo", "Hi"};  // Lo <= Hi; 0 = Hi, 1 = Lo
  s.zero = GradeValue::finite(1);
  s.one = GradeValue::finite(0);
  s.quantitative = false;
  // Addition is the meet, multiplication the join of the Lo <= Hi lattice.
  s.add = [](const GradeValue& a, const GradeValue& b) {
    return GradeValue::finite(std::min(a.fin, b.fin));
  };
  s.mul = [](const GradeValue& a, const GradeValue& b) {
    return GradeValue::finite(std::max(a.fin, b.fin));
  };
  s.leq = [](const GradeValue& a, const GradeValue& b) { return a.fin <= b.fin; };
  return s;
}

SemiringSpec make_singleton() {
  SemiringSpec s;
  s.name = "singleton";
  s.carrier = {"*"};  // 1 = 0: every grade collapses
  s.zero = GradeValue::finite(0);
  s.one = GradeValue::finite(0);
  s.quantitative = false;
  s.add = [](const GradeValue&, const GradeValue&) { return GradeValue::finite(0); };
  s.mul = [](const GradeValue&, const GradeValue&) { return GradeValue::finite(0); };
  return s;
}

}  // namespace

const std::vector<SemiringSpec>& builtin_semirings() {
  static const std::vector<SemiringSpec> all = {
      make_nat(), make_zero_one(), make_none_one_tons(), make_security(),
      make_singleton()};
  return all;
}

const SemiringSpec* find_semiring(const std::string& name) {
  for (const auto& s : builtin_semirings())
    if (s.name == name) return &s;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Grade expressions
// ---------------------------------------------------------------------------

namespace {
GradePtr mk(GradeExpr e) { return std::make_shared<const GradeExpr>(std::move(e)); }
}  // namespace

GradePtr g_zero() {
  static const GradePtr z = mk({GradeKind::Zero, nullptr, nullptr, "", 0, {}});
  return z;
}
GradePtr g_one() {
  static const GradePtr o = mk({GradeKind::One, nullptr, nullptr, "", 0, {}});
  return o;
}
GradePtr g_add(GradePtr a, GradePtr b) {
  return mk({GradeKind::Add, std::move(a), std::move(b), "", 0, {}});
}
GradePtr g_mul(GradePtr a, GradePtr b) {
  return mk({GradeKind::Mul, std::move(a), std::move(b), "", 0, {}});
}
GradePtr g_lit(std::string name, SourceSpan span) {
  return mk({GradeKind::Lit, nullptr, nullptr, std::move(name), 0, std::move(span)});
}
GradePtr g_meta(int id, SourceSpan span) {
  return mk({GradeKind::Meta, nullptr, nullptr, "", id, std::move(span)});
}

GradePtr g_num(const mpz_class& n) {
  if (n == 0) return g_zero();
  static const std::vector<GradePtr> small = [] {
    std::vector<GradePtr> xs;
    xs.push_back(g_zero());
    xs.push_back(g_one());
    for (int i = 2; i <= 64; ++i) xs.push_back(g_add(xs.back(), g_one()));
    return xs;
  }();
  if (n <= 64) return small[n.get_ui()];
  GradePtr acc = small.back();
  for (mpz_class i = 64; i < n; ++i) acc = g_add(acc, g_one());
  return acc;
}
GradePtr g_num(unsigned long n) { return g_num(mpz_class((long)n)); }

bool grade_has_meta(const GradePtr& g) {
  if (!g) return false;
  if (g->kind == GradeKind::Meta) return true;
  return grade_has_meta(g->lhs) || grade_has_meta(g->rhs);
}

void grade_metas(const GradePtr& g, std::vector<int>& out) {
  if (!g) return;
  if (g->kind == GradeKind::Meta) out.push_back(g->meta);
  grade_metas(g->lhs, out);
  grade_metas(g->rhs, out);
}

GradeValue eval_grade(const GradePtr& e, const SemiringSpec& s) {
  switch (e->kind) {
    case GradeKind::Zero: return s.zero;
    case GradeKind::One: return s.one;
    case GradeKind::Add: return s.add(eval_grade(e->lhs, s), eval_grade(e->rhs, s));
    case GradeKind::Mul: return s.mul(eval_grade(e->lhs, s), eval_grade(e->rhs, s));
    case GradeKind::Lit: {
      if (auto idx = s.element(e->lit)) return GradeValue::finite(*idx);
      throw GertyError(ErrorCode::ForeignLiteral,
                       "grade literal '" + e->lit + "' is not an element of semiring '" +
                           s.name + "'",
                       e->span);
    }
    case GradeKind::Meta:
      throw GertyError(ErrorCode::UnresolvedMetaVar,
                       "unresolved grade metavariable _" + std::to_string(e->meta),
                       e->span);
  }
  throw GertyError(ErrorCode::UnresolvedMetaVar, "malformed grade expression");
}

// ---------------------------------------------------------------------------
// Normalization (semiring-independent)
// ---------------------------------------------------------------------------

namespace {

// A pure numeral subtree (Zero/One/Add/Mul only) denotes the same unary
// value in every semiring, so it can be folded to a natural.
bool numeral_of(const GradePtr& e, mpz_class& out) {
  switch (e->kind) {
    case GradeKind::Zero: out = 0; return true;
    case GradeKind::One: out = 1; return true;
    case GradeKind::Add: {
      mpz_class a, b;
      if (numeral_of(e->lhs, a) && numeral_of(e->rhs, b)) { out = a + b; return true; }
      return false;
    }
    case GradeKind::Mul: {
      mpz_class a, b;
      if (numeral_of(e->lhs, a) && numeral_of(e->rhs, b)) { out = a * b; return true; }
      return false;
    }
    default: return false;
  }
}

bool is_zero(const GradePtr& e) { return e->kind == GradeKind::Zero; }
bool is_one(const GradePtr& e) { return e->kind == GradeKind::One; }

}  // namespace

GradePtr normalize_grade(const GradePtr& e) {
  mpz_class n;
  if (numeral_of(e, n)) return g_num(n);
  switch (e->kind) {
    case GradeKind::Add: {
      GradePtr a = normalize_grade(e->lhs), b = normalize_grade(e->rhs);
      if (is_zero(a)) return b;
      if (is_zero(b)) return a;
      return g_add(a, b);
    }
    case GradeKind::Mul: {
      GradePtr a = normalize_grade(e->lhs), b = normalize_grade(e->rhs);
      if (is_zero(a) || is_zero(b)) return g_zero();
      if (is_one(a)) return b;
      if (is_one(b)) return a;
      return g_mul(a, b);
    }
    default: return e;
  }
}

bool grade_is_syntactic_zero(const GradePtr& e) {
  return normalize_grade(e)->kind == GradeKind::Zero;
}

std::string show_grade(const GradePtr& e) {
  GradePtr g = normalize_grade(e);
  mpz_class n;
  if (numeral_of(g, n)) return "." + n.get_str();
  std::function<std::string(const GradePtr&, int)> go =
      [&](const GradePtr& x, int prec) -> std::string {
    mpz_class m;
    if (numeral_of(x, m)) return "." + m.get_str();
    switch (x->kind) {
      case GradeKind::Lit: return x->lit;
      case GradeKind::Meta: return "_";
      case GradeKind::Add: {
        std::string s = go(x->lhs, 0) + " + " + go(x->rhs, 1);
        return prec > 0 ? "(" + s + ")" : s;
      }
      case GradeKind::Mul: {
        std::string s = go(x->lhs, 1) + " * " + go(x->rhs, 2);
        return prec > 1 ? "(" + s + ")" : s;
      }
      default: return ".0";
    }
  };
  return go(g, 0);
}

std::string show_value(const GradeValue& v, const SemiringSpec& s) { return s.show(v); }

// ---------------------------------------------------------------------------
// Law checking
// ---------------------------------------------------------------------------

namespace {

std::vector<GradeValue> sample_space(const SemiringSpec& s, long samples,
                                     std::mt19937_64& rng) {
  std::vector<GradeValue> xs;
  if (s.finite()) {
    for (size_t i = 0; i < s.carrier.size(); ++i) xs.push_back(GradeValue::finite((int)i));
  } else {
    xs.push_back(s.zero);
    xs.push_back(s.one);
    std::uniform_int_distribution<long> d(0, 1 << 20);
    for (long i = 0; i < samples; ++i) xs.push_back(GradeValue::natural(d(rng)));
  }
  return xs;
}

std::string witness2(const SemiringSpec& s, const GradeValue& a, const GradeValue& b) {
  return "(" + s.show(a) + ", " + s.show(b) + ")";
}
std::string witness3(const SemiringSpec& s, const GradeValue& a, const GradeValue& b,
                     const GradeValue& c) {
  return "(" + s.show(a) + ", " + s.show(b) + ", " + s.show(c) + ")";
}

}  // namespace

LawReport check_semiring_laws(const SemiringSpec& s, long samples) {
  LawReport rep;
  rep.semiring = s.name;
  rep.exhaustive = s.finite();
  std::mt19937_64 rng(0x67657274u);  // fixed seed: reports are reproducible
  // Keep the triple loop tractable for the sampled case.
  auto xs = sample_space(s, s.finite() ? 0 : std::max(2L, samples / 40), rng);

  auto fail = [&](const std::string& law, std::string w) {
    rep.violations.push_back({law, std::move(w)});
  };

  for (const auto& a : xs) {
    if (s.add(a, s.zero) != a) fail("add-right-identity", witness2(s, a, s.zero));
    if (s.add(s.zero, a) != a) fail("add-left-identity", witness2(s, s.zero, a));
    if (s.mul(a, s.one) != a) fail("mul-right-identity", witness2(s, a, s.one));
    if (s.mul(s.one, a) != a) fail("mul-left-identity", witness2(s, s.one, a));
    if (s.mul(a, s.zero) != s.zero) fail("mul-right-absorb", witness2(s, a, s.zero));
    if (s.mul(s.zero, a) != s.zero) fail("mul-left-absorb", witness2(s, s.zero, a));
    rep.cases += 6;
    for (const auto& b : xs) {
      if (s.add(a, b) != s.add(b, a)) fail("add-commutativity", witness2(s, a, b));
      rep.cases += 1;
      for (const auto& c : xs) {
        if (s.add(s.add(a, b), c) != s.add(a, s.add(b, c)))
          fail("add-associativity", witness3(s, a, b, c));
        if (s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c)))
          fail("mul-associativity", witness3(s, a, b, c));
        if (s.mul(a, s.add(b, c)) != s.add(s.mul(a, b), s.mul(a, c)))
          fail("left-distributivity", witness3(s, a, b, c));
        if (s.mul(s.add(a, b), c) != s.add(s.mul(a, c), s.mul(b, c)))
          fail("right-distributivity", witness3(s, a, b, c));
        rep.cases += 4;
        if (rep.violations.size() > 64) return rep;
      }
    }
  }
  return rep;
}

QuantReport is_quantitative(const SemiringSpec& s, long samples) {
  QuantReport rep;
  rep.semiring = s.name;
  std::mt19937_64 rng(0x71756e74u);
  auto xs = sample_space(s, samples, rng);

  bool zero_unique = !(s.one == s.zero);
  if (!zero_unique)
    rep.failures.push_back({"zero-unique", "1 = " + s.show(s.one) + " = 0"});

  bool positivity = true, zero_product = true;
  for (const auto& a : xs) {
    for (const auto& b : xs) {
      if (s.add(a, b) == s.zero && !(a == s.zero && b == s.zero)) {
        if (positivity) rep.failures.push_back({"positivity", witness2(s, a, b)});
        positivity = false;
      }
      if (s.mul(a, b) == s.zero && !(a == s.zero || b == s.zero)) {
        if (zero_product) rep.failures.push_back({"zero-product", witness2(s, a, b)});
        zero_product = false;
      }
    }
  }

  rep.axioms_hold = zero_unique && positivity && zero_product;
  rep.verdict = s.quantitative;

  if (s.name == "nat") {
    rep.note =
        "sampled; closed form: n + m = 0 over the naturals forces n = m = 0, and "
        "n * m = 0 forces n = 0 or m = 0";
  } else if (s.name == "security") {
    // The two-element check leaves all three axioms intact (Hi is the meet
    // identity), but 0 = Hi names an inhabited security level rather than
    // absence of use, so the lattice is classified non-quantitative.
    rep.note =
        "axioms hold exhaustively, but 0 = Hi marks high-security data that may "
        "still flow (boxed), so 0 does not mean unused";
  } else if (s.name == "singleton") {
    rep.note = "1 = 0 collapses every grade";
  } else if (s.finite()) {
    rep.note = "exhaustive over " + std::to_string(s.carrier.size()) + " elements";
  }
  return rep;
}

}  // namespace gerty
