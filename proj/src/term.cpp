#include "gerty/term.hpp"

#include <atomic>
#include <map>

namespace gerty {

// ---------------------------------------------------------------------------
// Levels
// ---------------------------------------------------------------------------

namespace {
LevelPtr mklvl(Level l) { return std::make_shared<const Level>(std::move(l)); }
}  // namespace

LevelPtr lvl_zero() {
  static const LevelPtr z = mklvl({Level::Kind::Zero, nullptr, nullptr});
  return z;
}
LevelPtr lvl_suc(LevelPtr l) { return mklvl({Level::Kind::Suc, std::move(l), nullptr}); }
LevelPtr lvl_lub(LevelPtr a, LevelPtr b) {
  return mklvl({Level::Kind::Lub, std::move(a), std::move(b)});
}
LevelPtr lvl_const(uint64_t n) {
  LevelPtr l = lvl_zero();
  for (uint64_t i = 0; i < n; ++i) l = lvl_suc(l);
  return l;
}

uint64_t normalize_level(const LevelPtr& l) {
  switch (l->kind) {
    case Level::Kind::Zero: return 0;
    case Level::Kind::Suc: return normalize_level(l->a) + 1;
    case Level::Kind::Lub: return std::max(normalize_level(l->a), normalize_level(l->b));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Term constructors
// ---------------------------------------------------------------------------

namespace {
TermPtr mk(Term t) { return std::make_shared<const Term>(std::move(t)); }
}  // namespace

TermPtr t_var(std::string name, SourceSpan span) {
  Term t{TermKind::Var};
  t.name = std::move(name);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_universe(LevelPtr l, SourceSpan span) {
  Term t{TermKind::Universe};
  t.level = std::move(l);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_universe(uint64_t l) { return t_universe(lvl_const(l)); }
TermPtr t_pi(std::string x, GradePtr s, GradePtr r, TermPtr domain, TermPtr codomain,
             SourceSpan span) {
  Term t{TermKind::Pi};
  t.name = std::move(x);
  t.grade_s = std::move(s);
  t.grade_r = std::move(r);
  t.a = std::move(domain);
  t.b = std::move(codomain);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_lam(std::string x, TermPtr body, SourceSpan span) {
  Term t{TermKind::Lam};
  t.name = std::move(x);
  t.a = std::move(body);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_app(TermPtr fn, TermPtr arg, SourceSpan span) {
  Term t{TermKind::App};
  t.a = std::move(fn);
  t.b = std::move(arg);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_tensor(std::string x, GradePtr r, TermPtr first, TermPtr second,
                 SourceSpan span) {
  Term t{TermKind::Tensor};
  t.name = std::move(x);
  t.grade_r = std::move(r);
  t.a = std::move(first);
  t.b = std::move(second);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_pair(TermPtr first, TermPtr second, SourceSpan span) {
  Term t{TermKind::Pair};
  t.a = std::move(first);
  t.b = std::move(second);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_letpair(std::string x, std::string y, TermPtr pair, TermPtr body,
                  SourceSpan span) {
  Term t{TermKind::LetPair};
  t.name = std::move(x);
  t.name2 = std::move(y);
  t.a = std::move(pair);
  t.b = std::move(body);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_boxty(GradePtr s, TermPtr type, SourceSpan span) {
  Term t{TermKind::BoxTy};
  t.grade_s = std::move(s);
  t.a = std::move(type);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_boxintro(TermPtr body, SourceSpan span) {
  Term t{TermKind::BoxIntro};
  t.a = std::move(body);
  t.span = std::move(span);
  return mk(std::move(t));
}
TermPtr t_letbox(std::string x, TermPtr box, TermPtr body, SourceSpan span) {
  Term t{TermKind::LetBox};
  t.name = std::move(x);
  t.a = std::move(box);
  t.b = std::move(body);
  t.span = std::move(span);
  return mk(std::move(t));
}

std::string fresh_name(const std::string& base) {
  static std::atomic<uint64_t> counter{1};
  std::string stem = base;
  auto dollar = stem.find('$');
  if (dollar != std::string::npos) stem.resize(dollar);
  if (stem.empty()) stem = "x";
  return stem + "$" + std::to_string(counter.fetch_add(1));
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

void free_vars(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var: out.insert(t->name); return;
    case TermKind::Universe: return;
    case TermKind::Pi:
    case TermKind::Tensor: {
      free_vars(t->a, out);
      std::set<std::string> body;
      free_vars(t->b, body);
      body.erase(t->name);
      out.insert(body.begin(), body.end());
      return;
    }
    case TermKind::Lam: {
      std::set<std::string> body;
      free_vars(t->a, body);
      body.erase(t->name);
      out.insert(body.begin(), body.end());
      return;
    }
    case TermKind::App:
    case TermKind::Pair:
      free_vars(t->a, out);
      free_vars(t->b, out);
      return;
    case TermKind::LetPair: {
      free_vars(t->a, out);
      std::set<std::string> body;
      free_vars(t->b, body);
      body.erase(t->name);
      body.erase(t->name2);
      out.insert(body.begin(), body.end());
      return;
    }
    case TermKind::BoxTy:
    case TermKind::BoxIntro: free_vars(t->a, out); return;
    case TermKind::LetBox: {
      free_vars(t->a, out);
      std::set<std::string> body;
      free_vars(t->b, body);
      body.erase(t->name);
      out.insert(body.begin(), body.end());
      return;
    }
  }
}

bool occurs_free(const std::string& x, const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return t->name == x;
    case TermKind::Universe: return false;
    case TermKind::Pi:
    case TermKind::Tensor:
      return occurs_free(x, t->a) || (t->name != x && occurs_free(x, t->b));
    case TermKind::Lam: return t->name != x && occurs_free(x, t->a);
    case TermKind::App:
    case TermKind::Pair: return occurs_free(x, t->a) || occurs_free(x, t->b);
    case TermKind::LetPair:
      return occurs_free(x, t->a) ||
             (t->name != x && t->name2 != x && occurs_free(x, t->b));
    case TermKind::BoxTy:
    case TermKind::BoxIntro: return occurs_free(x, t->a);
    case TermKind::LetBox:
      return occurs_free(x, t->a) || (t->name != x && occurs_free(x, t->b));
  }
  return false;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

TermPtr rename_free(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case TermKind::Var: return t->name == from ? t_var(to, t->span) : t;
    case TermKind::Universe: return t;
    case TermKind::Lam: {
      if (t->name == from) return t;
      TermPtr a = rename_free(t->a, from, to);
      return a == t->a ? t : t_lam(t->name, a, t->span);
    }
    case TermKind::BoxTy: {
      TermPtr a = rename_free(t->a, from, to);
      return a == t->a ? t : t_boxty(t->grade_s, a, t->span);
    }
    case TermKind::BoxIntro: {
      TermPtr a = rename_free(t->a, from, to);
      return a == t->a ? t : t_boxintro(a, t->span);
    }
    default: {
      bool shadows_b =
          ((t->kind == TermKind::Pi || t->kind == TermKind::Tensor ||
            t->kind == TermKind::LetBox) &&
           t->name == from) ||
          (t->kind == TermKind::LetPair && (t->name == from || t->name2 == from));
      TermPtr a = rename_free(t->a, from, to);
      TermPtr b = shadows_b ? t->b : rename_free(t->b, from, to);
      if (a == t->a && b == t->b) return t;
      Term copy = *t;
      copy.a = a;
      copy.b = b;
      return std::make_shared<const Term>(std::move(copy));
    }
  }
}

namespace {

// Renames binder `old_name` to a fresh name in `body`, returning the new
// name and renamed body. The rename is itself a substitution, so every
// binder underneath is refreshed along the way (uniform freshening).
std::pair<std::string, TermPtr> refresh(const std::string& old_name,
                                        const TermPtr& body) {
  std::string next = fresh_name(old_name);
  return {next, subst(body, old_name, t_var(next))};
}

}  // namespace

long g_subst_nodes = 0;
TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& u) {
  ++g_subst_nodes;
  switch (t->kind) {
    case TermKind::Var: return t->name == x ? u : t;
    case TermKind::Universe: return t;
    case TermKind::Pi: {
      TermPtr dom = subst(t->a, x, u);
      if (t->name == x) return t_pi(t->name, t->grade_s, t->grade_r, dom, t->b, t->span);
      auto [b, body] = refresh(t->name, t->b);
      return t_pi(b, t->grade_s, t->grade_r, dom, subst(body, x, u), t->span);
    }
    case TermKind::Lam: {
      if (t->name == x) return t;
      auto [b, body] = refresh(t->name, t->a);
      return t_lam(b, subst(body, x, u), t->span);
    }
    case TermKind::App:
      return t_app(subst(t->a, x, u), subst(t->b, x, u), t->span);
    case TermKind::Tensor: {
      TermPtr fst = subst(t->a, x, u);
      if (t->name == x) return t_tensor(t->name, t->grade_r, fst, t->b, t->span);
      auto [b, body] = refresh(t->name, t->b);
      return t_tensor(b, t->grade_r, fst, subst(body, x, u), t->span);
    }
    case TermKind::Pair:
      return t_pair(subst(t->a, x, u), subst(t->b, x, u), t->span);
    case TermKind::LetPair: {
      TermPtr scrut = subst(t->a, x, u);
      if (t->name == x || t->name2 == x)
        return t_letpair(t->name, t->name2, scrut, t->b, t->span);
      auto [bx, body1] = refresh(t->name, t->b);
      auto [by, body2] = refresh(t->name2, body1);
      return t_letpair(bx, by, scrut, subst(body2, x, u), t->span);
    }
    case TermKind::BoxTy: return t_boxty(t->grade_s, subst(t->a, x, u), t->span);
    case TermKind::BoxIntro: return t_boxintro(subst(t->a, x, u), t->span);
    case TermKind::LetBox: {
      TermPtr scrut = subst(t->a, x, u);
      if (t->name == x) return t_letbox(t->name, scrut, t->b, t->span);
      auto [b, body] = refresh(t->name, t->b);
      return t_letbox(b, scrut, subst(body, x, u), t->span);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

bool grade_struct_eq(const GradePtr& a, const GradePtr& b) {
  GradePtr x = normalize_grade(a), y = normalize_grade(b);
  std::function<bool(const GradePtr&, const GradePtr&)> go =
      [&](const GradePtr& p, const GradePtr& q) -> bool {
    if (p->kind != q->kind) return false;
    switch (p->kind) {
      case GradeKind::Zero:
      case GradeKind::One: return true;
      case GradeKind::Add:
      case GradeKind::Mul: return go(p->lhs, q->lhs) && go(p->rhs, q->rhs);
      case GradeKind::Lit: return p->lit == q->lit;
      case GradeKind::Meta: return p->meta == q->meta;
    }
    return false;
  };
  return go(x, y);
}

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

bool var_matches(const Renaming& rho, const std::string& a, const std::string& b) {
  for (auto it = rho.rbegin(); it != rho.rend(); ++it) {
    if (it->first == a) return it->second == b;
    if (it->second == b) return false;  // b already bound to a different name
  }
  return a == b;
}

bool aeq(const TermPtr& t1, const TermPtr& t2, Renaming& rho) {
  if (t1->kind != t2->kind) return false;
  switch (t1->kind) {
    case TermKind::Var: return var_matches(rho, t1->name, t2->name);
    case TermKind::Universe:
      return normalize_level(t1->level) == normalize_level(t2->level);
    case TermKind::Pi:
    case TermKind::Tensor: {
      if (t1->kind == TermKind::Pi && !grade_struct_eq(t1->grade_s, t2->grade_s))
        return false;
      if (!grade_struct_eq(t1->grade_r, t2->grade_r)) return false;
      if (!aeq(t1->a, t2->a, rho)) return false;
      rho.emplace_back(t1->name, t2->name);
      bool ok = aeq(t1->b, t2->b, rho);
      rho.pop_back();
      return ok;
    }
    case TermKind::Lam: {
      rho.emplace_back(t1->name, t2->name);
      bool ok = aeq(t1->a, t2->a, rho);
      rho.pop_back();
      return ok;
    }
    case TermKind::App:
    case TermKind::Pair:
      return aeq(t1->a, t2->a, rho) && aeq(t1->b, t2->b, rho);
    case TermKind::LetPair: {
      if (!aeq(t1->a, t2->a, rho)) return false;
      rho.emplace_back(t1->name, t2->name);
      rho.emplace_back(t1->name2, t2->name2);
      bool ok = aeq(t1->b, t2->b, rho);
      rho.pop_back();
      rho.pop_back();
      return ok;
    }
    case TermKind::BoxTy:
      return grade_struct_eq(t1->grade_s, t2->grade_s) && aeq(t1->a, t2->a, rho);
    case TermKind::BoxIntro: return aeq(t1->a, t2->a, rho);
    case TermKind::LetBox: {
      if (!aeq(t1->a, t2->a, rho)) return false;
      rho.emplace_back(t1->name, t2->name);
      bool ok = aeq(t1->b, t2->b, rho);
      rho.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& t1, const TermPtr& t2) {
  Renaming rho;
  return aeq(t1, t2, rho);
}

int ctx_lookup(const Context& ctx, const std::string& name) {
  for (int i = (int)ctx.size() - 1; i >= 0; --i)
    if (ctx[i].name == name) return i;
  return -1;
}

}  // namespace gerty
