#include "gerty/embed.hpp"

#include <map>

#include "gerty/parse.hpp"

namespace gerty {

// ---------------------------------------------------------------------------
// STLC
// ---------------------------------------------------------------------------

SimpleTypePtr st_base(std::string name) {
  return std::make_shared<const SimpleType>(
      SimpleType{SimpleType::Kind::Base, std::move(name), nullptr, nullptr});
}
SimpleTypePtr st_arrow(SimpleTypePtr a, SimpleTypePtr b) {
  return std::make_shared<const SimpleType>(
      SimpleType{SimpleType::Kind::Arrow, "", std::move(a), std::move(b)});
}
bool st_equal(const SimpleTypePtr& a, const SimpleTypePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == SimpleType::Kind::Base) return a->base == b->base;
  return st_equal(a->a, b->a) && st_equal(a->b, b->b);
}
std::string show_simple(const SimpleTypePtr& t) {
  if (t->kind == SimpleType::Kind::Base) return t->base;
  std::string lhs = show_simple(t->a);
  if (t->a->kind == SimpleType::Kind::Arrow) lhs = "(" + lhs + ")";
  return lhs + " -> " + show_simple(t->b);
}

StlcPtr stlc_var(std::string n) {
  return std::make_shared<const StlcTerm>(
      StlcTerm{StlcTerm::Kind::Var, std::move(n), nullptr, nullptr, nullptr});
}
StlcPtr stlc_lam(std::string x, SimpleTypePtr ann, StlcPtr body) {
  return std::make_shared<const StlcTerm>(StlcTerm{
      StlcTerm::Kind::Lam, std::move(x), std::move(ann), std::move(body), nullptr});
}
StlcPtr stlc_app(StlcPtr f, StlcPtr u) {
  return std::make_shared<const StlcTerm>(
      StlcTerm{StlcTerm::Kind::App, "", nullptr, std::move(f), std::move(u)});
}

std::string show_stlc(const StlcPtr& t) {
  switch (t->kind) {
    case StlcTerm::Kind::Var: return t->name;
    case StlcTerm::Kind::Lam:
      return "\\" + t->name + ":" + show_simple(t->ann) + ". " + show_stlc(t->a);
    case StlcTerm::Kind::App: {
      std::string f = show_stlc(t->a);
      std::string u = show_stlc(t->b);
      if (t->a->kind == StlcTerm::Kind::Lam) f = "(" + f + ")";
      if (t->b->kind != StlcTerm::Kind::Var) u = "(" + u + ")";
      return f + " " + u;
    }
  }
  return "?";
}

SimpleTypePtr stlc_infer(const StlcContext& ctx, const StlcPtr& t) {
  switch (t->kind) {
    case StlcTerm::Kind::Var: {
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->first == t->name) return it->second;
      throw GertyError(ErrorCode::UnboundVariable, "stlc: unbound " + t->name);
    }
    case StlcTerm::Kind::Lam: {
      StlcContext inner = ctx;
      inner.emplace_back(t->name, t->ann);
      return st_arrow(t->ann, stlc_infer(inner, t->a));
    }
    case StlcTerm::Kind::App: {
      SimpleTypePtr f = stlc_infer(ctx, t->a);
      if (f->kind != SimpleType::Kind::Arrow)
        throw GertyError(ErrorCode::NotAFunction, "stlc: applying a non-function");
      SimpleTypePtr u = stlc_infer(ctx, t->b);
      if (!st_equal(f->a, u))
        throw GertyError(ErrorCode::TypeMismatch,
                         "stlc: argument type " + show_simple(u) + " does not match " +
                             show_simple(f->a));
      return f->b;
    }
  }
  throw GertyError(ErrorCode::TypeMismatch, "stlc: malformed term");
}

namespace {

StlcPtr stlc_subst(const StlcPtr& t, const std::string& x, const StlcPtr& u) {
  switch (t->kind) {
    case StlcTerm::Kind::Var: return t->name == x ? u : t;
    case StlcTerm::Kind::Lam: {
      if (t->name == x) return t;
      std::string fresh = fresh_name(t->name);
      StlcPtr renamed = stlc_subst(t->a, t->name, stlc_var(fresh));
      return stlc_lam(fresh, t->ann, stlc_subst(renamed, x, u));
    }
    case StlcTerm::Kind::App:
      return stlc_app(stlc_subst(t->a, x, u), stlc_subst(t->b, x, u));
  }
  return t;
}

}  // namespace

StlcPtr stlc_step(const StlcPtr& t) {
  if (t->kind != StlcTerm::Kind::App) return nullptr;
  if (t->a->kind == StlcTerm::Kind::Lam)
    return stlc_subst(t->a->a, t->a->name, t->b);
  if (StlcPtr f = stlc_step(t->a)) return stlc_app(f, t->b);
  return nullptr;
}

namespace {
bool skel_eq(const StlcPtr& a, const StlcPtr& b,
             std::vector<std::pair<std::string, std::string>>& rho) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StlcTerm::Kind::Var: {
      for (auto it = rho.rbegin(); it != rho.rend(); ++it) {
        if (it->first == a->name) return it->second == b->name;
        if (it->second == b->name) return false;
      }
      return a->name == b->name;
    }
    case StlcTerm::Kind::Lam: {
      rho.emplace_back(a->name, b->name);
      bool ok = skel_eq(a->a, b->a, rho);
      rho.pop_back();
      return ok;
    }
    case StlcTerm::Kind::App:
      return skel_eq(a->a, b->a, rho) && skel_eq(a->b, b->b, rho);
  }
  return false;
}
}  // namespace

bool stlc_skeleton_eq(const StlcPtr& a, const StlcPtr& b) {
  std::vector<std::pair<std::string, std::string>> rho;
  return skel_eq(a, b, rho);
}

// ---------------------------------------------------------------------------
// SSF
// ---------------------------------------------------------------------------

SsfTypePtr ssf_tvar(std::string n) {
  return std::make_shared<const SsfType>(
      SsfType{SsfType::Kind::Var, std::move(n), 0, nullptr, nullptr});
}
SsfTypePtr ssf_arrow(SsfTypePtr a, SsfTypePtr b) {
  return std::make_shared<const SsfType>(
      SsfType{SsfType::Kind::Arrow, "", 0, std::move(a), std::move(b)});
}
SsfTypePtr ssf_forall(std::string x, uint64_t level, SsfTypePtr body) {
  return std::make_shared<const SsfType>(
      SsfType{SsfType::Kind::Forall, std::move(x), level, std::move(body), nullptr});
}

std::string show_ssf_type(const SsfTypePtr& t) {
  switch (t->kind) {
    case SsfType::Kind::Var: return t->name;
    case SsfType::Kind::Arrow: {
      std::string lhs = show_ssf_type(t->a);
      if (t->a->kind != SsfType::Kind::Var) lhs = "(" + lhs + ")";
      return lhs + " -> " + show_ssf_type(t->b);
    }
    case SsfType::Kind::Forall:
      return "forall " + t->name + " : *" + std::to_string(t->level) + ". " +
             show_ssf_type(t->a);
  }
  return "?";
}

namespace {
SsfTypePtr ssf_ty_subst(const SsfTypePtr& t, const std::string& x, const SsfTypePtr& u) {
  switch (t->kind) {
    case SsfType::Kind::Var: return t->name == x ? u : t;
    case SsfType::Kind::Arrow:
      return ssf_arrow(ssf_ty_subst(t->a, x, u), ssf_ty_subst(t->b, x, u));
    case SsfType::Kind::Forall: {
      if (t->name == x) return t;
      std::string fresh = fresh_name(t->name);
      SsfTypePtr renamed = ssf_ty_subst(t->a, t->name, ssf_tvar(fresh));
      return ssf_forall(fresh, t->level, ssf_ty_subst(renamed, x, u));
    }
  }
  return t;
}

bool ssf_teq(const SsfTypePtr& a, const SsfTypePtr& b,
             std::vector<std::pair<std::string, std::string>>& rho) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SsfType::Kind::Var: {
      for (auto it = rho.rbegin(); it != rho.rend(); ++it) {
        if (it->first == a->name) return it->second == b->name;
        if (it->second == b->name) return false;
      }
      return a->name == b->name;
    }
    case SsfType::Kind::Arrow: return ssf_teq(a->a, b->a, rho) && ssf_teq(a->b, b->b, rho);
    case SsfType::Kind::Forall: {
      if (a->level != b->level) return false;
      rho.emplace_back(a->name, b->name);
      bool ok = ssf_teq(a->a, b->a, rho);
      rho.pop_back();
      return ok;
    }
  }
  return false;
}
}  // namespace

bool ssf_type_equal(const SsfTypePtr& a, const SsfTypePtr& b) {
  std::vector<std::pair<std::string, std::string>> rho;
  return ssf_teq(a, b, rho);
}

SsfPtr ssf_var(std::string n) {
  return std::make_shared<const SsfTerm>(
      SsfTerm{SsfTerm::Kind::Var, std::move(n), 0, nullptr, nullptr, nullptr});
}
SsfPtr ssf_lam(std::string x, SsfTypePtr ann, SsfPtr body) {
  return std::make_shared<const SsfTerm>(SsfTerm{
      SsfTerm::Kind::Lam, std::move(x), 0, std::move(ann), std::move(body), nullptr});
}
SsfPtr ssf_app(SsfPtr f, SsfPtr u) {
  return std::make_shared<const SsfTerm>(
      SsfTerm{SsfTerm::Kind::App, "", 0, nullptr, std::move(f), std::move(u)});
}
SsfPtr ssf_tyabs(std::string x, uint64_t level, SsfPtr body) {
  return std::make_shared<const SsfTerm>(
      SsfTerm{SsfTerm::Kind::TyAbs, std::move(x), level, nullptr, std::move(body),
              nullptr});
}
SsfPtr ssf_tyapp(SsfPtr f, SsfTypePtr ty) {
  return std::make_shared<const SsfTerm>(
      SsfTerm{SsfTerm::Kind::TyApp, "", 0, std::move(ty), std::move(f), nullptr});
}

std::string show_ssf(const SsfPtr& t) {
  switch (t->kind) {
    case SsfTerm::Kind::Var: return t->name;
    case SsfTerm::Kind::Lam:
      return "\\" + t->name + ":" + show_ssf_type(t->ty) + ". " + show_ssf(t->a);
    case SsfTerm::Kind::App: {
      std::string f = show_ssf(t->a), u = show_ssf(t->b);
      if (t->a->kind == SsfTerm::Kind::Lam || t->a->kind == SsfTerm::Kind::TyAbs)
        f = "(" + f + ")";
      if (t->b->kind != SsfTerm::Kind::Var) u = "(" + u + ")";
      return f + " " + u;
    }
    case SsfTerm::Kind::TyAbs:
      return "/\\" + t->name + ":*" + std::to_string(t->level) + ". " + show_ssf(t->a);
    case SsfTerm::Kind::TyApp: return show_ssf(t->a) + " [" + show_ssf_type(t->ty) + "]";
  }
  return "?";
}

uint64_t ssf_kind(const SsfContext& ctx, const SsfTypePtr& t) {
  switch (t->kind) {
    case SsfType::Kind::Var: {
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->is_type && it->name == t->name) return it->level;
      throw GertyError(ErrorCode::UnboundVariable, "ssf: unbound type variable " + t->name);
    }
    case SsfType::Kind::Arrow:
      return std::max(ssf_kind(ctx, t->a), ssf_kind(ctx, t->b));
    case SsfType::Kind::Forall: {
      SsfContext inner = ctx;
      inner.push_back({t->name, true, t->level, nullptr});
      return std::max(t->level + 1, ssf_kind(inner, t->a));
    }
  }
  throw GertyError(ErrorCode::TypeMismatch, "ssf: malformed type");
}

SsfTypePtr ssf_infer(const SsfContext& ctx, const SsfPtr& t) {
  switch (t->kind) {
    case SsfTerm::Kind::Var: {
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (!it->is_type && it->name == t->name) return it->type;
      throw GertyError(ErrorCode::UnboundVariable, "ssf: unbound variable " + t->name);
    }
    case SsfTerm::Kind::Lam: {
      ssf_kind(ctx, t->ty);  // the annotation must be well-kinded
      SsfContext inner = ctx;
      inner.push_back({t->name, false, 0, t->ty});
      return ssf_arrow(t->ty, ssf_infer(inner, t->a));
    }
    case SsfTerm::Kind::App: {
      SsfTypePtr f = ssf_infer(ctx, t->a);
      if (f->kind != SsfType::Kind::Arrow)
        throw GertyError(ErrorCode::NotAFunction, "ssf: applying a non-function");
      SsfTypePtr u = ssf_infer(ctx, t->b);
      if (!ssf_type_equal(f->a, u))
        throw GertyError(ErrorCode::TypeMismatch, "ssf: argument type mismatch");
      return f->b;
    }
    case SsfTerm::Kind::TyAbs: {
      SsfContext inner = ctx;
      inner.push_back({t->name, true, t->level, nullptr});
      return ssf_forall(t->name, t->level, ssf_infer(inner, t->a));
    }
    case SsfTerm::Kind::TyApp: {
      SsfTypePtr f = ssf_infer(ctx, t->a);
      if (f->kind != SsfType::Kind::Forall)
        throw GertyError(ErrorCode::NotAFunction, "ssf: type-applying a non-forall");
      uint64_t k = ssf_kind(ctx, t->ty);
      if (k != f->level)
        throw GertyError(ErrorCode::TypeMismatch,
                         "ssf: kind mismatch: *" + std::to_string(k) + " vs *" +
                             std::to_string(f->level));
      return ssf_ty_subst(f->a, f->name, t->ty);
    }
  }
  throw GertyError(ErrorCode::TypeMismatch, "ssf: malformed term");
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

namespace {
void require_quantitative(const SemiringSpec& s) {
  if (!s.quantitative)
    throw GertyError(ErrorCode::NotQuantitative,
                     "fragment classification requires a quantitative semiring; '" +
                         s.name + "' is not quantitative");
}

bool value_zero(const GradePtr& g, const SemiringSpec& s) {
  return eval_grade(g, s) == s.zero;
}
}  // namespace

bool stlc_predicate(const Judgment& j, const SemiringSpec& s) {
  require_quantitative(s);
  for (const auto& g : j.type_use)
    if (!value_zero(g, s)) return false;
  for (const auto& row : j.delta)
    for (const auto& g : row)
      if (!value_zero(g, s)) return false;
  return true;
}

namespace {
bool universe_pos(const TermPtr& t, bool positive) {
  switch (t->kind) {
    case TermKind::Universe: return positive;
    case TermKind::Var: return false;
    case TermKind::Pi:
      return universe_pos(t->a, !positive) || universe_pos(t->b, positive);
    case TermKind::Tensor:
      return universe_pos(t->a, positive) || universe_pos(t->b, positive);
    case TermKind::BoxTy: return universe_pos(t->a, positive);
    default: {
      // Neutral/other type forms: any universe occurrence counts.
      std::function<bool(const TermPtr&)> any = [&](const TermPtr& x) -> bool {
        if (!x) return false;
        if (x->kind == TermKind::Universe) return true;
        return any(x->a) || any(x->b);
      };
      return any(t);
    }
  }
}
}  // namespace

bool universe_positive(const TermPtr& t) { return universe_pos(t, true); }

bool ssf_predicate(const Judgment& j, const SemiringSpec& s) {
  require_quantitative(s);
  for (size_t i = 0; i < j.ctx.size(); ++i) {
    if (j.ctx[i].type->kind == TermKind::Universe) {
      if (!value_zero(j.subject_use[i], s)) return false;
      for (const auto& g : j.delta[i])
        if (!value_zero(g, s)) return false;
    } else {
      if (!value_zero(j.type_use[i], s)) return false;
      if (universe_positive(j.ctx[i].type)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Translations (derivation-directed)
// ---------------------------------------------------------------------------

namespace {

struct StlcXlate {
  const SemiringSpec& sr;

  [[noreturn]] void out(const std::string& why, const SourceSpan& span = {}) {
    throw GertyError(ErrorCode::OutOfFragment, "outside the STLC fragment: " + why,
                     span);
  }

  SimpleTypePtr type(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Universe:
        return st_base("Type" + std::to_string(normalize_level(t->level)));
      case TermKind::Var: {
        std::string n = t->name;
        auto d = n.find('$');
        if (d != std::string::npos) n.resize(d);
        return st_base(n);
      }
      case TermKind::Pi: {
        if (!(eval_grade(t->grade_r, sr) == sr.zero))
          out("function type with nonzero type grade", t->span);
        return st_arrow(type(t->a), type(t->b));
      }
      default: out("type form outside arrows over atoms", t->span);
    }
  }

  StlcPtr term(const DerivPtr& dp) {
    const Derivation& d = *dp;
    const Judgment& c = d.conclusion;
    if (d.rule == "T-Var") return stlc_var(c.subject->name);
    if (d.rule == "T-Conv") return term(d.premises[0]);
    if (d.rule == "T-Fun") {
      const TermPtr& pity = c.type;
      SimpleTypePtr dom = type(pity->a);
      return stlc_lam(c.subject->name, dom, term(d.premises[1]));
    }
    if (d.rule == "T-App")
      return stlc_app(term(d.premises[0]), term(d.premises[2]));
    out("subject uses " + d.rule + " (only variables, functions, applications embed)");
  }
};

}  // namespace

StlcResult stlc_translate(const DerivPtr& d, const SemiringSpec& s) {
  if (!stlc_predicate(d->conclusion, s))
    throw GertyError(ErrorCode::OutOfFragment,
                     "judgment has nonzero subject-type or context grading");
  StlcXlate x{s};
  StlcResult out;
  for (const auto& e : d->conclusion.ctx) out.ctx.emplace_back(e.name, x.type(e.type));
  out.term = x.term(d);
  out.type = x.type(d->conclusion.type);
  SimpleTypePtr got = stlc_infer(out.ctx, out.term);
  if (!st_equal(got, out.type))
    throw GertyError(ErrorCode::TypeMismatch,
                     "translated term checks at " + show_simple(got) +
                         " instead of " + show_simple(out.type));
  return out;
}

namespace {

struct SsfXlate {
  const SemiringSpec& sr;

  [[noreturn]] void out(const std::string& why, const SourceSpan& span = {}) {
    throw GertyError(ErrorCode::OutOfFragment, "outside the Ssf fragment: " + why, span);
  }

  bool zero(const GradePtr& g) { return eval_grade(g, sr) == sr.zero; }

  SsfTypePtr type(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Var: return ssf_tvar(t->name);
      case TermKind::Pi: {
        if (t->a->kind == TermKind::Universe) {
          if (!zero(t->grade_s)) out("type binder with computational use", t->span);
          if (universe_positive(t->b)) out("positive universe occurrence", t->span);
          return ssf_forall(t->name, normalize_level(t->a->level), type(t->b));
        }
        if (!zero(t->grade_r)) out("term binder used in the result type", t->span);
        if (universe_positive(t->a) || universe_positive(t->b))
          out("positive universe occurrence", t->span);
        return ssf_arrow(type(t->a), type(t->b));
      }
      default: out("type form outside Ssf types", t->span);
    }
  }

  SsfPtr term(const DerivPtr& dp) {
    const Derivation& d = *dp;
    const Judgment& c = d.conclusion;
    if (d.rule == "T-Var") return ssf_var(c.subject->name);
    if (d.rule == "T-Conv") return term(d.premises[0]);
    if (d.rule == "T-Fun") {
      const TermPtr& pity = c.type;
      if (pity->a->kind == TermKind::Universe) {
        if (!zero(pity->grade_s)) out("type binder with computational use", pity->span);
        return ssf_tyabs(c.subject->name, normalize_level(pity->a->level),
                         term(d.premises[1]));
      }
      return ssf_lam(c.subject->name, type(pity->a), term(d.premises[1]));
    }
    if (d.rule == "T-App") {
      const Judgment& arg = d.premises[2]->conclusion;
      if (arg.type->kind == TermKind::Universe)
        return ssf_tyapp(term(d.premises[0]), type(arg.subject));
      return ssf_app(term(d.premises[0]), term(d.premises[2]));
    }
    out("subject uses " + d.rule);
  }
};

}  // namespace

SsfResult ssf_translate(const DerivPtr& d, const SemiringSpec& s) {
  if (!ssf_predicate(d->conclusion, s))
    throw GertyError(ErrorCode::OutOfFragment, "judgment fails the Ssf predicate");
  SsfXlate x{s};
  SsfResult out;
  for (size_t i = 0; i < d->conclusion.ctx.size(); ++i) {
    const auto& e = d->conclusion.ctx[i];
    if (e.type->kind == TermKind::Universe)
      out.ctx.push_back({e.name, true, normalize_level(e.type->level), nullptr});
    else
      out.ctx.push_back({e.name, false, 0, x.type(e.type)});
  }
  out.term = x.term(d);
  out.type = x.type(d->conclusion.type);
  SsfTypePtr got = ssf_infer(out.ctx, out.term);
  if (!ssf_type_equal(got, out.type))
    throw GertyError(ErrorCode::TypeMismatch,
                     "translated term checks at " + show_ssf_type(got) +
                         " instead of " + show_ssf_type(out.type));
  return out;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace {

// Structural erasure for fragment terms (used to compare against the
// stepped STLC side; binder annotations are not needed for comparison).
StlcPtr erase(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return stlc_var(t->name);
    case TermKind::Lam: return stlc_lam(t->name, st_base("_"), erase(t->a));
    case TermKind::App: return stlc_app(erase(t->a), erase(t->b));
    default:
      throw GertyError(ErrorCode::OutOfFragment,
                       "term outside the variable/function/application fragment",
                       t->span);
  }
}

}  // namespace

SimReport stlc_simulation_check(const TermPtr& t, const StlcPtr& translated, int steps) {
  SimReport rep;
  TermPtr g = t;
  StlcPtr s = translated;
  for (int i = 0; i < steps; ++i) {
    StepResult gr = step(g);
    if (!gr.stepped) break;
    StlcPtr sr = stlc_step(s);
    if (!sr) {
      rep.ok = false;
      rep.error = "the graded term stepped (" + std::string(gr.rule) + ") at step " +
                  std::to_string(i) + " but the STLC image is stuck";
      rep.steps = i;
      return rep;
    }
    if (!stlc_skeleton_eq(sr, erase(gr.term))) {
      rep.ok = false;
      rep.error = "images diverge at step " + std::to_string(i) + ": " +
                  show_stlc(sr) + " vs erased " + show_stlc(erase(gr.term));
      rep.steps = i;
      return rep;
    }
    g = gr.term;
    s = sr;
    rep.steps = i + 1;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fragment generator
// ---------------------------------------------------------------------------

namespace {

// Declarative construction of fragment derivations: the fragment's types
// are arrows over the universe atom, every type grade is 0, and beta
// redexes are built directly with T-App over T-Fun (the bidirectional
// checker cannot infer an unannotated redex, but the declarative system
// types it).
struct FragGen {
  std::mt19937_64 rng;
  int pick(int n) { return (int)(rng() % (uint64_t)n); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

  TermPtr gen_type(int depth) {
    if (depth <= 0 || coin(0.45)) return t_universe(0);
    // Subject grades on fragment binders are free; the actual lambda
    // grades are read off the generated bodies, so annotate with 1 here
    // (only variables of this exact type are used as eta-free arguments).
    return t_pi(fresh_name("p"), g_one(), g_zero(), gen_type(depth - 1),
                gen_type(depth - 1));
  }

  // A derivation of some term at `ty` over c; nullptr when the type has
  // no easy inhabitant.
  DerivPtr inhabit(const DerivCtx& c, const TermPtr& ty, int depth) {
    std::vector<size_t> vars;
    for (size_t i = 0; i < c.ctx.size(); ++i)
      if (alpha_eq_graded(c.ctx[i].type, ty, [](auto&, auto&) { return true; }))
        vars.push_back(i);
    if (!vars.empty() && (depth <= 0 || coin(0.5)))
      return derive_var_node(c, vars[pick((int)vars.size())]);
    if (ty->kind == TermKind::Pi) {
      DerivPtr dom = derive_formation(c, ty->a);
      DerivCtx inner = c;
      std::string x = fresh_name("x");
      deriv_ctx_extend(inner, x, ty->a, dom);
      DerivPtr body = inhabit(inner, subst(ty->b, ty->name, t_var(x)), depth - 1);
      if (!body) return nullptr;
      return fun_node(c, dom, x, body);
    }
    if (!vars.empty()) return derive_var_node(c, vars[pick((int)vars.size())]);
    return nullptr;
  }

  DerivPtr fun_node(const DerivCtx& c, const DerivPtr& dom, const std::string& x,
                    const DerivPtr& body) {
    const Judgment& bj = body->conclusion;
    GradePtr s = bj.subject_use.back();
    GradePtr r = bj.type_use.back();
    GradeVec s2(bj.subject_use.begin(), bj.subject_use.end() - 1);
    GradeVec s3(bj.type_use.begin(), bj.type_use.end() - 1);
    TermPtr lam = t_lam(x, bj.subject);
    TermPtr pity = t_pi(x, s, r, dom->conclusion.subject, bj.type);
    return mk_deriv({"T-Fun",
                     typing_in(c, lam, pity, s2,
                               vec_add(dom->conclusion.subject_use, s3)),
                     {dom, body}});
  }

  DerivPtr app_node(const DerivCtx& c, const DerivPtr& fn, const DerivPtr& arg) {
    TermPtr pity = normalize(fn->conclusion.type);
    DerivPtr dom = derive_formation(c, pity->a);
    DerivCtx inner = c;
    std::string xf = fresh_name(pity->name);
    deriv_ctx_extend(inner, xf, pity->a, dom);
    DerivPtr codf = derive_formation(inner, subst(pity->b, pity->name, t_var(xf)));
    GradeVec s3(codf->conclusion.subject_use.begin(),
                codf->conclusion.subject_use.end() - 1);
    Derivation d{
        "T-App",
        typing_in(c, t_app(fn->conclusion.subject, arg->conclusion.subject),
                  subst(pity->b, pity->name, arg->conclusion.subject),
                  vec_add(fn->conclusion.subject_use,
                          scalar_mul(pity->grade_s, arg->conclusion.subject_use)),
                  vec_add(s3, scalar_mul(pity->grade_r,
                                         arg->conclusion.subject_use))),
        {fn, dom, arg, codf}};
    d.g1 = pity->grade_s;
    d.g2 = pity->grade_r;
    return mk_deriv(std::move(d));
  }

  DerivPtr gen_term(const DerivCtx& c, int depth) {
    int choice = pick(depth > 0 ? 4 : 2);
    switch (choice) {
      case 0:
        if (!c.ctx.empty()) return derive_var_node(c, (size_t)pick((int)c.ctx.size()));
        [[fallthrough]];
      case 1: {
        // A lambda over a fragment type.
        TermPtr a = gen_type(1);
        DerivPtr dom = derive_formation(c, a);
        DerivCtx inner = c;
        std::string x = fresh_name("x");
        deriv_ctx_extend(inner, x, a, dom);
        DerivPtr body = gen_term(inner, depth - 1);
        return fun_node(c, dom, x, body);
      }
      case 2: {
        // Neutral application of a context function (first-order, so the
        // argument is a base atom of exactly the domain type).
        for (size_t i = 0; i < c.ctx.size(); ++i) {
          if (c.ctx[i].type->kind == TermKind::Pi &&
              c.ctx[i].type->a->kind == TermKind::Universe) {
            DerivPtr arg = inhabit(c, c.ctx[i].type->a, 0);
            if (arg) return app_node(c, derive_var_node(c, i), arg);
          }
        }
        return gen_term(c, depth - 1);
      }
      default: {
        // Beta redex: (\x -> body) arg. The lambda's domain is the
        // argument's derived type, so the grades line up exactly.
        TermPtr shape = gen_type(1);
        DerivPtr arg = inhabit(c, shape, depth - 1);
        if (!arg) return gen_term(c, depth - 1);
        TermPtr a = arg->conclusion.type;
        DerivPtr dom = derive_formation(c, a);
        DerivCtx inner = c;
        std::string x = fresh_name("x");
        deriv_ctx_extend(inner, x, a, dom);
        DerivPtr body = gen_term(inner, depth - 1);
        return app_node(c, fun_node(c, dom, x, body), arg);
      }
    }
  }
};

}  // namespace

std::vector<FragmentSample> gen_stlc_fragment(uint64_t seed, int count) {
  std::vector<FragmentSample> out;
  FragGen gen{std::mt19937_64(seed)};
  const SemiringSpec* nat = find_semiring("nat");
  while ((int)out.size() < count) {
    DerivCtx c = deriv_ctx_empty();
    // Base inhabitants of the universe atom plus a couple of functions.
    int natoms = 1 + gen.pick(2);
    for (int i = 0; i < natoms; ++i) {
      DerivPtr form = derive_type_node(c, 0);
      deriv_ctx_extend(c, fresh_name("b"), t_universe(0), form);
    }
    int nfuns = 1 + gen.pick(2);
    for (int i = 0; i < nfuns; ++i) {
      // First-order function variables over the atom.
      TermPtr ty = t_universe(0);
      int arity = 1 + gen.pick(2);
      for (int k = 0; k < arity; ++k)
        ty = t_pi(fresh_name("p"), g_one(), g_zero(), t_universe(0), ty);
      deriv_ctx_extend(c, fresh_name("f"), ty, derive_formation(c, ty));
    }
    DerivPtr d = gen.gen_term(c, 3);
    if (!stlc_predicate(d->conclusion, *nat)) continue;
    out.push_back({d->conclusion, d});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prelude
// ---------------------------------------------------------------------------

std::vector<Declaration> prelude() {
  static const char* source = R"(
-- Graded-comonad operations over the graded modality
counit : (a : (.0, .2) Type) -> (z : (.1 , .0) [.1] a) -> a
counit = \a z -> case z of [y] -> y

comult : (a : (.0, .2) Type) -> (z : (.1 , .0) [.6] a) -> [.2] ([.3] a)
comult = \a z -> case z of [y] -> [([y])]

-- Representation independence via graded universal quantification:
-- the type parameter g is irrelevant in inhabitants (subject grade 0).
ri : (a : (.1, .0) Type 0) -> (b : (.1, .0) Type 0) -> Type 1
ri = \a -> \b -> (g : (.0, .2) Type 0) -> (h : (.1, .0) ((x : (.1, .0) g) -> a)) -> (c : (.1, .0) g) -> b

-- Church-encoded existential package over a result alphabet c
exy : (a : (.1, .0) Type 0) -> (b : (.1, .0) Type 0) -> Type 1
exy = \a -> \b -> (c : (.0, .2) Type 0) -> (f : (.1, .0) ((x : (.0, .0) a) -> (y : (.1, .0) b) -> c)) -> c

-- Linear function space: exactly-once use of the argument
linfn : (a : (.1, .0) Type 0) -> (b : (.1, .0) Type 0) -> Type 0
linfn = \a -> \b -> (x : (.1, .0) a) -> b
)";
  return parse_file(source, "<prelude>").decls;
}

}  // namespace gerty
