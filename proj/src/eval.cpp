#include "gerty/eval.hpp"

#include "gerty/parse.hpp"

namespace gerty {

namespace {

// Simultaneous [t1/x][t2/y]b, protecting t1's free occurrences of y.
TermPtr subst2(const TermPtr& b, const std::string& x, const TermPtr& t1,
               const std::string& y, const TermPtr& t2) {
  std::string tmp = fresh_name(y);
  TermPtr renamed = subst(b, y, t_var(tmp));
  return subst(subst(renamed, x, t1), tmp, t2);
}

}  // namespace

StepResult step(const TermPtr& t, const DefEnv* defs) {
  switch (t->kind) {
    case TermKind::Var: {
      if (defs) {
        if (const auto* d = defs->find(t->name); d && d->body)
          return {true, d->body, "delta"};
      }
      return {false, t, ""};
    }
    case TermKind::App: {
      if (t->a->kind == TermKind::Lam)
        return {true, subst(t->a->a, t->a->name, t->b), "beta-fun"};
      StepResult f = step(t->a, defs);
      if (f.stepped) return {true, t_app(f.term, t->b, t->span), "cong-app"};
      return {false, t, ""};
    }
    case TermKind::LetPair: {
      if (t->a->kind == TermKind::Pair)
        return {true, subst2(t->b, t->name, t->a->a, t->name2, t->a->b),
                "beta-tensor"};
      StepResult s = step(t->a, defs);
      if (s.stepped)
        return {true, t_letpair(t->name, t->name2, s.term, t->b, t->span),
                "cong-letpair"};
      return {false, t, ""};
    }
    case TermKind::LetBox: {
      if (t->a->kind == TermKind::BoxIntro)
        return {true, subst(t->b, t->name, t->a->a), "beta-box"};
      StepResult s = step(t->a, defs);
      if (s.stepped)
        return {true, t_letbox(t->name, s.term, t->b, t->span), "cong-letbox"};
      return {false, t, ""};
    }
    default: return {false, t, ""};
  }
}

TermPtr whnf(const TermPtr& t, const DefEnv* defs, long& fuel) {
  TermPtr cur = t;
  for (;;) {
    StepResult r = step(cur, defs);
    if (!r.stepped) return cur;
    if (--fuel <= 0)
      throw GertyError(ErrorCode::FuelExhausted,
                       "normalization ran out of fuel at: " + pretty(r.term), t->span);
    cur = r.term;
  }
}

namespace {

TermPtr eta_contract(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Lam:
      // \x -> f x  =>  f   when x not free in f
      if (t->a->kind == TermKind::App && t->a->b->kind == TermKind::Var &&
          t->a->b->name == t->name && !occurs_free(t->name, t->a->a))
        return t->a->a;
      return t;
    case TermKind::LetPair:
      // case t of <x, y> -> <x, y>  =>  t
      if (t->b->kind == TermKind::Pair && t->b->a->kind == TermKind::Var &&
          t->b->a->name == t->name && t->b->b->kind == TermKind::Var &&
          t->b->b->name == t->name2)
        return t->a;
      return t;
    case TermKind::LetBox:
      // let [x] = t in [x]  =>  t
      if (t->b->kind == TermKind::BoxIntro && t->b->a->kind == TermKind::Var &&
          t->b->a->name == t->name)
        return t->a;
      return t;
    default: return t;
  }
}

TermPtr norm(const TermPtr& t, const DefEnv* defs, long& fuel) {
  TermPtr h = whnf(t, defs, fuel);
  switch (h->kind) {
    case TermKind::Var:
    case TermKind::Universe: return h;
    case TermKind::Pi:
      return t_pi(h->name, h->grade_s, h->grade_r, norm(h->a, defs, fuel),
                  norm(h->b, defs, fuel), h->span);
    case TermKind::Lam:
      return eta_contract(t_lam(h->name, norm(h->a, defs, fuel), h->span));
    case TermKind::App:  // neutral head
      return t_app(norm(h->a, defs, fuel), norm(h->b, defs, fuel), h->span);
    case TermKind::Tensor:
      return t_tensor(h->name, h->grade_r, norm(h->a, defs, fuel),
                      norm(h->b, defs, fuel), h->span);
    case TermKind::Pair:
      return t_pair(norm(h->a, defs, fuel), norm(h->b, defs, fuel), h->span);
    case TermKind::LetPair:
      return eta_contract(t_letpair(h->name, h->name2, norm(h->a, defs, fuel),
                                    norm(h->b, defs, fuel), h->span));
    case TermKind::BoxTy:
      return t_boxty(h->grade_s, norm(h->a, defs, fuel), h->span);
    case TermKind::BoxIntro: return t_boxintro(norm(h->a, defs, fuel), h->span);
    case TermKind::LetBox:
      return eta_contract(t_letbox(h->name, norm(h->a, defs, fuel),
                                   norm(h->b, defs, fuel), h->span));
  }
  return h;
}

}  // namespace

TermPtr normalize(const TermPtr& t, const DefEnv* defs, long fuel) {
  if (fuel < 1)
    throw GertyError(ErrorCode::FuelExhausted, "normalization fuel must be >= 1");
  return norm(t, defs, fuel);
}

// ---------------------------------------------------------------------------
// Graded alpha-comparison
// ---------------------------------------------------------------------------

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

bool var_ok(const Renaming& rho, const std::string& a, const std::string& b) {
  for (auto it = rho.rbegin(); it != rho.rend(); ++it) {
    if (it->first == a) return it->second == b;
    if (it->second == b) return false;
  }
  return a == b;
}

bool aeq_g(const TermPtr& t1, const TermPtr& t2, Renaming& rho, const GradeEq& geq) {
  if (t1->kind != t2->kind) return false;
  switch (t1->kind) {
    case TermKind::Var: return var_ok(rho, t1->name, t2->name);
    case TermKind::Universe:
      return normalize_level(t1->level) == normalize_level(t2->level);
    case TermKind::Pi:
    case TermKind::Tensor: {
      if (t1->kind == TermKind::Pi && !geq(t1->grade_s, t2->grade_s)) return false;
      if (!geq(t1->grade_r, t2->grade_r)) return false;
      if (!aeq_g(t1->a, t2->a, rho, geq)) return false;
      rho.emplace_back(t1->name, t2->name);
      bool ok = aeq_g(t1->b, t2->b, rho, geq);
      rho.pop_back();
      return ok;
    }
    case TermKind::Lam: {
      rho.emplace_back(t1->name, t2->name);
      bool ok = aeq_g(t1->a, t2->a, rho, geq);
      rho.pop_back();
      return ok;
    }
    case TermKind::App:
    case TermKind::Pair:
      return aeq_g(t1->a, t2->a, rho, geq) && aeq_g(t1->b, t2->b, rho, geq);
    case TermKind::LetPair: {
      if (!aeq_g(t1->a, t2->a, rho, geq)) return false;
      rho.emplace_back(t1->name, t2->name);
      rho.emplace_back(t1->name2, t2->name2);
      bool ok = aeq_g(t1->b, t2->b, rho, geq);
      rho.pop_back();
      rho.pop_back();
      return ok;
    }
    case TermKind::BoxTy:
      return geq(t1->grade_s, t2->grade_s) && aeq_g(t1->a, t2->a, rho, geq);
    case TermKind::BoxIntro: return aeq_g(t1->a, t2->a, rho, geq);
    case TermKind::LetBox: {
      if (!aeq_g(t1->a, t2->a, rho, geq)) return false;
      rho.emplace_back(t1->name, t2->name);
      bool ok = aeq_g(t1->b, t2->b, rho, geq);
      rho.pop_back();
      return ok;
    }
  }
  return false;
}

GradeEq effective(const GradeEq& geq) {
  if (geq) return geq;
  return [](const GradePtr& a, const GradePtr& b) { return grade_struct_eq(a, b); };
}

}  // namespace

bool alpha_eq_graded(const TermPtr& t1, const TermPtr& t2, const GradeEq& geq) {
  Renaming rho;
  GradeEq g = effective(geq);
  return aeq_g(t1, t2, rho, g);
}

bool def_equal(const EvalEnv& env, const TermPtr& t1, const TermPtr& t2) {
  TermPtr n1 = normalize(t1, env.defs, env.fuel);
  TermPtr n2 = normalize(t2, env.defs, env.fuel);
  return alpha_eq_graded(n1, n2, env.grade_eq);
}

namespace {

// Binder correspondence travels in a renaming environment rather than
// through substitution.
bool subty(const EvalEnv& env, const GradeEq& geq, Renaming& rho, const TermPtr& a,
           const TermPtr& b) {
  long fuel = env.fuel;
  TermPtr x = whnf(a, env.defs, fuel);
  TermPtr y = whnf(b, env.defs, fuel);
  if (x->kind == TermKind::Universe && y->kind == TermKind::Universe)
    return normalize_level(x->level) <= normalize_level(y->level);
  if (x->kind == TermKind::Pi && y->kind == TermKind::Pi) {
    if (!geq(x->grade_s, y->grade_s) || !geq(x->grade_r, y->grade_r)) return false;
    // Contravariant domain: flip the renaming orientation too.
    Renaming flipped;
    for (const auto& [l, r] : rho) flipped.emplace_back(r, l);
    if (!subty(env, geq, flipped, y->a, x->a)) return false;
    rho.emplace_back(x->name, y->name);
    bool ok = subty(env, geq, rho, x->b, y->b);
    rho.pop_back();
    return ok;
  }
  if (x->kind == TermKind::Tensor && y->kind == TermKind::Tensor) {
    if (!geq(x->grade_r, y->grade_r)) return false;
    if (!subty(env, geq, rho, x->a, y->a)) return false;
    rho.emplace_back(x->name, y->name);
    bool ok = subty(env, geq, rho, x->b, y->b);
    rho.pop_back();
    return ok;
  }
  if (x->kind == TermKind::BoxTy && y->kind == TermKind::BoxTy)
    return geq(x->grade_s, y->grade_s) && subty(env, geq, rho, x->a, y->a);
  TermPtr n1 = normalize(x, env.defs, env.fuel);
  TermPtr n2 = normalize(y, env.defs, env.fuel);
  return aeq_g(n1, n2, rho, geq);
}

}  // namespace

bool subtype(const EvalEnv& env, const TermPtr& a, const TermPtr& b) {
  GradeEq geq = effective(env.grade_eq);
  Renaming rho;
  return subty(env, geq, rho, a, b);
}

}  // namespace gerty
