#include "gerty/check.hpp"

#include <cassert>

#include "gerty/oracle.hpp"

namespace gerty {

namespace {

std::string display(const std::string& name) {
  auto d = name.find('$');
  return d == std::string::npos ? name : name.substr(0, d);
}

}  // namespace

struct Checker::Impl {
  CheckOptions opt;
  const SemiringSpec* sr;
  const DefEnv* defs;
  Context ctx;
  CtxGradeVec delta;
  std::vector<Constraint> store;
  std::map<int, GradePtr> assignment;
  std::vector<int> minted;
  int next_meta = 1 << 20;  // above anything the parser minted
  bool solved = false;
  // Wf derivation for the current context, maintained incrementally when
  // recording.
  std::vector<DerivPtr> wf_stack;

  Impl(const CheckOptions& o, const DefEnv* d) : opt(o), defs(d) {
    sr = opt.semiring ? opt.semiring : find_semiring("nat");
    if (opt.record_derivations)
      wf_stack.push_back(mk_deriv({"Wf-Empty", wf_judgment(), {}}));
  }

  size_t n() const { return ctx.size(); }

  Judgment wf_judgment() const {
    Judgment j;
    j.form = JForm::Wf;
    j.delta = delta;
    j.ctx = ctx;
    return j;
  }

  Judgment typing_judgment(const TermPtr& subject, const TermPtr& type,
                           const GradeVec& s1, const GradeVec& s2) const {
    Judgment j;
    j.form = JForm::Typing;
    j.delta = delta;
    j.ctx = ctx;
    j.subject = subject;
    j.type = type;
    j.subject_use = s1;
    j.type_use = s2;
    return j;
  }

  DerivPtr wf_deriv() const {
    return wf_stack.empty() ? nullptr : wf_stack.back();
  }

  // ---- grade plumbing ----------------------------------------------------

  int mint() {
    int m = next_meta++;
    minted.push_back(m);
    return m;
  }

  // Binder handling: reuse the source name unless it would shadow a
  // context entry or a definition; renaming only then keeps alignment
  // substitutions off the common path.
  std::string fresh_in_ctx(const std::string& preferred) {
    if (ctx_lookup(ctx, preferred) < 0 && (!defs || !defs->find(preferred)))
      return preferred;
    return fresh_name(preferred);
  }

  // The chosen name comes from fresh_name and cannot capture, so the
  // alignment is a plain rename.
  static TermPtr align(const TermPtr& body, const std::string& binder,
                       const std::string& chosen) {
    return chosen == binder ? body : rename_free(body, binder, chosen);
  }

  void note_metas(const GradePtr& g) { grade_metas(g, minted); }

  GradePtr zonk_grade(const GradePtr& g) const {
    return normalize_grade(apply_assignment(g, assignment));
  }

  // Checks that every literal in g belongs to the active carrier.
  void validate_grade(const GradePtr& g) {
    if (!g) return;
    if (g->kind == GradeKind::Lit && !sr->element(g->lit))
      throw GertyError(ErrorCode::ForeignLiteral,
                       "grade literal '" + g->lit + "' is not an element of semiring '" +
                           sr->name + "'",
                       g->span);
    validate_grade(g->lhs);
    validate_grade(g->rhs);
    note_metas(g);
  }

  // Emits the obligation expected == got. Under the syntactic backend the
  // obligation is decided eagerly when possible (closed comparison or a
  // directly bindable metavariable); anything else joins the store.
  void constrain(const GradePtr& expected, const GradePtr& got, Provenance prov) {
    if (opt.backend == EqualityBackend::Smt) {
      // Reflexively true obligations never reach the solver.
      if (grade_struct_eq(expected, got)) return;
      store.push_back({expected, got, std::move(prov)});
      return;
    }
    GradePtr l = normalize_grade(apply_assignment(expected, assignment));
    GradePtr r = normalize_grade(apply_assignment(got, assignment));
    if (l == r) return;
    bool lm = grade_has_meta(l), rm = grade_has_meta(r);
    if (!lm && !rm) {
      if (eval_grade(l, *sr) != eval_grade(r, *sr))
        throw GertyError(ErrorCode::GradeMismatch, render_grade_mismatch(prov, l, r, sr),
                         prov.span);
      return;
    }
    if (l->kind == GradeKind::Meta && !rm) { assignment[l->meta] = r; return; }
    if (r->kind == GradeKind::Meta && !lm) { assignment[r->meta] = l; return; }
    if (l->kind == GradeKind::Meta && r->kind == GradeKind::Meta) {
      if (l->meta != r->meta) assignment[l->meta] = r;
      return;
    }
    store.push_back({l, r, std::move(prov)});
  }

  void constrain_vec(const GradeVec& expected, const GradeVec& got, Stage stage,
                     const std::string& rule, const SourceSpan& span) {
    assert(expected.size() == got.size());
    for (size_t i = 0; i < expected.size(); ++i) {
      Provenance p{span, i < ctx.size() ? ctx[i].name : "?", stage, rule};
      constrain(expected[i], got[i], std::move(p));
    }
  }

  void constrain_zero(const GradeVec& got, Stage stage, const std::string& rule,
                      const SourceSpan& span) {
    constrain_vec(zero_vec(got.size()), got, stage, rule, span);
  }

  // Grade comparison used inside subtyping/definitional equality: decides
  // when possible, binds bindable metavariables, defers the rest.
  bool grade_decide(const GradePtr& a, const GradePtr& b, const SourceSpan& span) {
    if (opt.backend == EqualityBackend::Smt) {
      store.push_back({a, b, {span, "<type>", Stage::SubjectType, "type-equality"}});
      return true;
    }
    GradePtr l = normalize_grade(apply_assignment(a, assignment));
    GradePtr r = normalize_grade(apply_assignment(b, assignment));
    bool lm = grade_has_meta(l), rm = grade_has_meta(r);
    if (!lm && !rm) return eval_grade(l, *sr) == eval_grade(r, *sr);
    if (l->kind == GradeKind::Meta && !rm) { assignment[l->meta] = r; return true; }
    if (r->kind == GradeKind::Meta && !lm) { assignment[r->meta] = l; return true; }
    if (l->kind == GradeKind::Meta && r->kind == GradeKind::Meta) {
      if (l->meta != r->meta) assignment[l->meta] = r;
      return true;
    }
    store.push_back({l, r, {span, "<type>", Stage::SubjectType, "type-equality"}});
    return true;
  }

  EvalEnv eval_env(const SourceSpan& span) {
    EvalEnv env;
    env.defs = defs;
    env.fuel = opt.fuel;
    env.grade_eq = [this, span](const GradePtr& a, const GradePtr& b) {
      return grade_decide(a, b, span);
    };
    return env;
  }

  // ---- context management --------------------------------------------

  void push(const std::string& x, const TermPtr& type, const GradeVec& row,
            DerivPtr formation) {
    ctx.push_back({x, type});
    delta.push_back(row);
    if (opt.record_derivations)
      wf_stack.push_back(mk_deriv({"Wf-Ext", wf_judgment(), {std::move(formation)}}));
  }

  void pop() {
    ctx.pop_back();
    delta.pop_back();
    if (opt.record_derivations) wf_stack.pop_back();
  }

  struct Formation {
    uint64_t level;
    GradeVec sigma;
    DerivPtr deriv;
  };

  // Infers A's type, requires it to land in a universe, and requires the
  // subject-type vector to be all zeros.
  Formation infer_formation(const TermPtr& a, const std::string& rule) {
    GradedType gt = infer(a);
    long fuel = opt.fuel;
    TermPtr u = whnf(gt.type, defs, fuel);
    if (u->kind != TermKind::Universe)
      throw GertyError(ErrorCode::NotAType,
                       "'" + pretty(a) + "' is not a type; it has type '" +
                           pretty(gt.type) + "'",
                       a->span);
    constrain_zero(gt.subject_type, Stage::SubjectType, rule, a->span);
    return {normalize_level(u->level), gt.subject, gt.deriv};
  }

  // ---- bidirectional rules ---------------------------------------------

  GradedType infer(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Var: {
        int i = ctx_lookup(ctx, t->name);
        if (i >= 0) {
          GradeVec subject = zero_vec(n());
          subject[i] = g_one();
          GradeVec type_use = delta[i];  // length i
          type_use.resize(n(), g_zero());
          GradedType out{ctx[i].type, std::move(subject), std::move(type_use)};
          if (opt.record_derivations) {
            Derivation d{"T-Var",
                         typing_judgment(t, out.type, out.subject, out.subject_type),
                         {wf_deriv()}};
            d.index = (size_t)i;
            out.deriv = mk_deriv(std::move(d));
          }
          return out;
        }
        if (defs) {
          if (const auto* def = defs->find(t->name)) {
            GradedType out{def->signature, zero_vec(n()), zero_vec(n())};
            if (opt.record_derivations)
              out.deriv = mk_deriv(
                  {"T-Def", typing_judgment(t, out.type, out.subject, out.subject_type),
                   {wf_deriv()}});
            return out;
          }
        }
        throw GertyError(ErrorCode::UnboundVariable,
                         "unbound variable '" + display(t->name) + "'", t->span);
      }

      case TermKind::Universe: {
        GradedType out{t_universe(lvl_suc(t->level)), zero_vec(n()), zero_vec(n())};
        if (opt.record_derivations)
          out.deriv = mk_deriv(
              {"T-Type", typing_judgment(t, out.type, out.subject, out.subject_type),
               {wf_deriv()}});
        return out;
      }

      case TermKind::Pi:
      case TermKind::Tensor: {
        bool pi = t->kind == TermKind::Pi;
        if (pi) validate_grade(t->grade_s);
        validate_grade(t->grade_r);
        Formation dom = infer_formation(t->a, pi ? "arrow" : "tensor");
        std::string x = fresh_in_ctx(t->name);
        TermPtr body = align(t->b, t->name, x);
        push(x, t->a, dom.sigma, dom.deriv);
        Formation cod = infer_formation(body, pi ? "arrow" : "tensor");
        pop();
        GradeVec sigma2(cod.sigma.begin(), cod.sigma.end() - 1);
        GradePtr r_actual = cod.sigma.back();
        constrain(t->grade_r, r_actual,
                  {t->span, display(t->name), Stage::SubjectType,
                   pi ? "arrow-formation" : "tensor-formation"});
        GradedType out{t_universe(lvl_lub(lvl_const(dom.level), lvl_const(cod.level))),
                       vec_add(dom.sigma, sigma2), zero_vec(n())};
        if (opt.record_derivations) {
          Derivation d{pi ? "T-Arrow" : "T-Ten",
                       typing_judgment(t, out.type, out.subject, out.subject_type),
                       {dom.deriv, cod.deriv}};
          out.deriv = mk_deriv(std::move(d));
        }
        return out;
      }

      case TermKind::BoxTy: {
        validate_grade(t->grade_s);
        Formation a = infer_formation(t->a, "box");
        GradedType out{t_universe(lvl_const(a.level)), a.sigma, zero_vec(n())};
        if (opt.record_derivations)
          out.deriv = mk_deriv(
              {"T-Box", typing_judgment(t, out.type, out.subject, out.subject_type),
               {a.deriv}});
        return out;
      }

      case TermKind::App: {
        GradedType fn = infer(t->a);
        long fuel = opt.fuel;
        TermPtr p = whnf(fn.type, defs, fuel);
        if (p->kind != TermKind::Pi)
          throw GertyError(ErrorCode::NotAFunction,
                           "cannot apply a term of type '" + pretty(fn.type) + "'",
                           t->span);
        Formation dom = infer_formation(p->a, "app");
        GradePair arg = check(t->b, p->a);
        constrain_vec(dom.sigma, arg.subject_type, Stage::SubjectType, "app-arg",
                      t->b->span);
        std::string x = fresh_in_ctx(p->name);
        TermPtr cod = align(p->b, p->name, x);
        push(x, p->a, dom.sigma, dom.deriv);
        Formation codf = infer_formation(cod, "app");
        pop();
        GradeVec sigma3(codf.sigma.begin(), codf.sigma.end() - 1);
        GradePtr r_actual = codf.sigma.back();
        constrain(p->grade_r, r_actual,
                  {t->span, display(p->name), Stage::SubjectType, "app"});
        constrain_vec(fn.subject_type, vec_add(dom.sigma, sigma3), Stage::SubjectType,
                      "app-fun", t->span);
        TermPtr result = apply_or_elide(p, t->b);
        GradedType out{result,
                       vec_add(fn.subject, scalar_mul(p->grade_s, arg.subject)),
                       vec_add(sigma3, scalar_mul(p->grade_r, arg.subject))};
        if (opt.record_derivations) {
          Derivation d{"T-App",
                       typing_judgment(t, subst(p->b, p->name, t->b), out.subject,
                                       out.subject_type),
                       {fn.deriv, dom.deriv, arg.deriv, codf.deriv}};
          d.g1 = p->grade_s;
          d.g2 = p->grade_r;
          out.deriv = mk_deriv(std::move(d));
        }
        return out;
      }

      case TermKind::BoxIntro: {
        // No expected grade in infer mode: mint one and let the solver
        // pin it down.
        GradedType body = infer(t->a);
        GradePtr s = g_meta(mint(), t->span);
        GradedType out{t_boxty(s, body.type, t->span),
                       scalar_mul(s, body.subject), body.subject_type};
        if (opt.record_derivations) {
          Derivation d{"T-BoxI",
                       typing_judgment(t, out.type, out.subject, out.subject_type),
                       {body.deriv}};
          d.g1 = s;
          out.deriv = mk_deriv(std::move(d));
        }
        return out;
      }

      case TermKind::LetPair: return elim_letpair(t, nullptr);
      case TermKind::LetBox: return elim_letbox(t, nullptr);

      case TermKind::Lam:
        throw GertyError(ErrorCode::CannotInfer,
                         "cannot infer the type of an unannotated function", t->span);
      case TermKind::Pair:
        throw GertyError(ErrorCode::CannotInfer,
                         "cannot infer the type of a pair without a tensor annotation",
                         t->span);
    }
    throw GertyError(ErrorCode::CannotInfer, "cannot infer type", t->span);
  }

  GradePair check(const TermPtr& t, const TermPtr& expected) {
    long fuel = opt.fuel;
    switch (t->kind) {
      case TermKind::Lam: {
        TermPtr p = whnf(expected, defs, fuel);
        if (p->kind != TermKind::Pi)
          throw GertyError(ErrorCode::TypeMismatch,
                           "checking a function against non-function type '" +
                               pretty(expected) + "'",
                           t->span);
        validate_grade(p->grade_s);
        validate_grade(p->grade_r);
        Formation dom = infer_formation(p->a, "fun");
        std::string x = fresh_in_ctx(t->name);
        TermPtr body = align(t->a, t->name, x);
        TermPtr cod = align(p->b, p->name, x);
        push(x, p->a, dom.sigma, dom.deriv);
        GradePair b = check(body, cod);
        pop();
        GradeVec sigma2(b.subject.begin(), b.subject.end() - 1);
        GradePtr s_actual = b.subject.back();
        GradeVec sigma3(b.subject_type.begin(), b.subject_type.end() - 1);
        GradePtr r_actual = b.subject_type.back();
        constrain(p->grade_s, s_actual,
                  {t->span, display(t->name), Stage::Subject, "fun"});
        constrain(p->grade_r, r_actual,
                  {t->span, display(t->name), Stage::SubjectType, "fun"});
        GradePair out{sigma2, vec_add(dom.sigma, sigma3)};
        if (opt.record_derivations) {
          Derivation d{"T-Fun",
                       typing_judgment(t_lam(x, body, t->span),
                                       t_pi(x, p->grade_s, p->grade_r, p->a, cod),
                                       out.subject, out.subject_type),
                       {dom.deriv, b.deriv}};
          out.deriv = mk_deriv(std::move(d));
        }
        return out;
      }

      case TermKind::Pair: {
        TermPtr p = whnf(expected, defs, fuel);
        if (p->kind != TermKind::Tensor)
          throw GertyError(ErrorCode::TypeMismatch,
                           "checking a pair against non-tensor type '" +
                               pretty(expected) + "'",
                           t->span);
        validate_grade(p->grade_r);
        Formation dom = infer_formation(p->a, "pair");
        std::string x = fresh_in_ctx(p->name);
        TermPtr second_ty = align(p->b, p->name, x);
        push(x, p->a, dom.sigma, dom.deriv);
        Formation codf = infer_formation(second_ty, "pair");
        pop();
        GradeVec sigmaB(codf.sigma.begin(), codf.sigma.end() - 1);
        GradePtr r_actual = codf.sigma.back();
        constrain(p->grade_r, r_actual,
                  {t->span, display(p->name), Stage::SubjectType, "pair"});
        GradePair first = check(t->a, p->a);
        constrain_vec(dom.sigma, first.subject_type, Stage::SubjectType, "pair",
                      t->a->span);
        TermPtr second_expected = subst(p->b, p->name, t->a);
        GradePair second = check(t->b, second_expected);
        constrain_vec(vec_add(sigmaB, scalar_mul(p->grade_r, first.subject)),
                      second.subject_type, Stage::SubjectType, "pair", t->b->span);
        GradePair out{vec_add(first.subject, second.subject),
                      vec_add(dom.sigma, sigmaB)};
        if (opt.record_derivations) {
          Derivation d{"T-Pair",
                       typing_judgment(t, t_tensor(x, p->grade_r, p->a, second_ty),
                                       out.subject, out.subject_type),
                       {first.deriv, second.deriv, codf.deriv}};
          d.g1 = p->grade_r;
          out.deriv = mk_deriv(std::move(d));
        }
        return out;
      }

      case TermKind::BoxIntro: {
        TermPtr p = whnf(expected, defs, fuel);
        if (p->kind != TermKind::BoxTy)
          throw GertyError(ErrorCode::TypeMismatch,
                           "checking a boxed term against non-box type '" +
                               pretty(expected) + "'",
                           t->span);
        validate_grade(p->grade_s);
        GradePair body = check(t->a, p->a);
        GradePair out{scalar_mul(p->grade_s, body.subject), body.subject_type};
        if (opt.record_derivations) {
          Derivation d{"T-BoxI",
                       typing_judgment(t, p, out.subject, out.subject_type),
                       {body.deriv}};
          d.g1 = p->grade_s;
          out.deriv = mk_deriv(std::move(d));
        }
        return out;
      }

      case TermKind::LetPair: {
        GradedType g = elim_letpair(t, &expected);
        return {g.subject, g.subject_type, g.deriv};
      }
      case TermKind::LetBox: {
        GradedType g = elim_letbox(t, &expected);
        return {g.subject, g.subject_type, g.deriv};
      }

      default: {
        GradedType g = infer(t);
        if (!subtype(eval_env(t->span), g.type, expected))
          throw GertyError(ErrorCode::TypeMismatch,
                           "type mismatch: expected '" + pretty(expected) +
                               "' but the term has type '" + pretty(g.type) + "'",
                           t->span);
        GradePair out{g.subject, g.subject_type};
        if (opt.record_derivations) {
          Derivation d{"T-Conv",
                       typing_judgment(t, expected, out.subject, out.subject_type),
                       {g.deriv}};
          out.deriv = mk_deriv(std::move(d));
        }
        return out;
      }
    }
  }

  // Dependent tensor elimination; `expected` null means infer mode.
  GradedType elim_letpair(const TermPtr& t, const TermPtr* expected) {
    GradedType sc = infer(t->a);
    long fuel = opt.fuel;
    TermPtr p = whnf(sc.type, defs, fuel);
    if (p->kind != TermKind::Tensor)
      throw GertyError(ErrorCode::NotATensor,
                       "case-of-pair scrutinee has non-tensor type '" +
                           pretty(sc.type) + "'",
                       t->a->span);
    Formation dom = infer_formation(p->a, "letpair");
    std::string x = fresh_in_ctx(t->name);
    TermPtr second_ty = align(p->b, p->name, x);
    push(x, p->a, dom.sigma, dom.deriv);
    Formation codf = infer_formation(second_ty, "letpair");
    GradeVec sigmaB(codf.sigma.begin(), codf.sigma.end() - 1);
    constrain(p->grade_r, codf.sigma.back(),
              {t->span, display(p->name), Stage::SubjectType, "letpair"});
    constrain_vec(vec_add(dom.sigma, sigmaB), sc.subject_type, Stage::SubjectType,
                  "letpair", t->a->span);
    std::string y = x == t->name2 ? fresh_name(t->name2) : fresh_in_ctx(t->name2);
    TermPtr body = align(align(t->b, t->name, x), t->name2, y);
    push(y, second_ty, codf.sigma, codf.deriv);
    GradedType out;
    DerivPtr body_deriv;
    GradeVec bs, bt;
    if (expected) {
      GradePair b = check(body, *expected);
      bs = b.subject;
      bt = b.subject_type;
      body_deriv = b.deriv;
      out.type = *expected;
    } else {
      GradedType b = infer(body);
      bs = b.subject;
      bt = b.subject_type;
      body_deriv = b.deriv;
      if (occurs_free(x, b.type) || occurs_free(y, b.type))
        throw GertyError(ErrorCode::CannotInfer,
                         "result type of case-of-pair depends on the bound components",
                         t->span);
      out.type = b.type;
    }
    pop();
    pop();
    GradePtr s_x = bs[bs.size() - 2], s_y = bs.back();
    GradePtr r_x = bt[bt.size() - 2], r_y = bt.back();
    constrain(s_x, s_y, {t->span, display(t->name2), Stage::Subject, "letpair"});
    constrain(g_zero(), r_x, {t->span, display(t->name), Stage::SubjectType, "letpair"});
    constrain(g_zero(), r_y, {t->span, display(t->name2), Stage::SubjectType, "letpair"});
    GradeVec sigma3(bs.begin(), bs.end() - 2);
    GradeVec sigma5(bt.begin(), bt.end() - 2);
    out.subject = vec_add(sigma3, scalar_mul(s_x, sc.subject));
    out.subject_type = sigma5;
    if (opt.record_derivations) {
      Derivation d{"T-TenCut",
                   typing_judgment(t, out.type, out.subject, out.subject_type),
                   {sc.deriv, dom.deriv, codf.deriv, body_deriv}};
      d.g1 = s_x;      // the common component grade
      d.g2 = g_zero(); // non-dependent result
      out.deriv = mk_deriv(std::move(d));
    }
    return out;
  }

  GradedType elim_letbox(const TermPtr& t, const TermPtr* expected) {
    GradedType sc = infer(t->a);
    long fuel = opt.fuel;
    TermPtr p = whnf(sc.type, defs, fuel);
    if (p->kind != TermKind::BoxTy)
      throw GertyError(ErrorCode::NotABox,
                       "let-box scrutinee has non-box type '" + pretty(sc.type) + "'",
                       t->a->span);
    Formation dom = infer_formation(p->a, "letbox");
    constrain_vec(dom.sigma, sc.subject_type, Stage::SubjectType, "letbox", t->a->span);
    std::string x = fresh_in_ctx(t->name);
    TermPtr body = align(t->b, t->name, x);
    push(x, p->a, dom.sigma, dom.deriv);
    GradedType out;
    DerivPtr body_deriv;
    GradeVec bs, bt;
    if (expected) {
      GradePair b = check(body, *expected);
      bs = b.subject;
      bt = b.subject_type;
      body_deriv = b.deriv;
      out.type = *expected;
    } else {
      GradedType b = infer(body);
      bs = b.subject;
      bt = b.subject_type;
      body_deriv = b.deriv;
      if (occurs_free(x, b.type))
        throw GertyError(ErrorCode::CannotInfer,
                         "result type of let-box depends on the unboxed variable",
                         t->span);
      out.type = b.type;
    }
    pop();
    GradePtr s_actual = bs.back();
    GradePtr r_actual = bt.back();
    constrain(p->grade_s, s_actual,
              {t->span, display(t->name), Stage::Subject, "letbox"});
    constrain(g_zero(), r_actual,
              {t->span, display(t->name), Stage::SubjectType, "letbox"});
    GradeVec sigma3(bs.begin(), bs.end() - 1);
    GradeVec sigma4(bt.begin(), bt.end() - 1);
    out.subject = vec_add(sigma3, sc.subject);
    out.subject_type = sigma4;
    if (opt.record_derivations) {
      Derivation d{"T-BoxE",
                   typing_judgment(t, out.type, out.subject, out.subject_type),
                   {sc.deriv, dom.deriv, body_deriv}};
      d.g1 = p->grade_s;
      d.g2 = g_zero();  // non-dependent result
      out.deriv = mk_deriv(std::move(d));
    }
    return out;
  }

  // The grade-directed optimisation: substitutions into a 0-graded
  // variable are elided when the semiring is quantitative. The variable
  // may still occur syntactically under a 0-scaled position, so the
  // elision also requires it to be absent from the codomain.
  TermPtr apply_or_elide(const TermPtr& pi, const TermPtr& arg) {
    if (opt.optimise && sr->quantitative && grade_is_syntactic_zero(pi->grade_r) &&
        !occurs_free(pi->name, pi->b)) {
      if (opt.debug_elision) {
        TermPtr substituted = subst(pi->b, pi->name, arg);
        EvalEnv env;
        env.defs = defs;
        env.fuel = opt.fuel;
        if (!def_equal(env, substituted, pi->b))
          throw GertyError(ErrorCode::TypeMismatch,
                           "elision debug check failed: '" + pretty(substituted) +
                               "' differs from '" + pretty(pi->b) + "'",
                           arg->span);
      }
      return pi->b;
    }
    return subst(pi->b, pi->name, arg);
  }

  void solve() {
    solved = true;
    if (store.empty() && minted.empty()) return;
    if (opt.backend == EqualityBackend::Smt) {
      std::string cmd = resolve_solver(opt.solver_cmd);
      // The whole batch goes to the solver in one invocation.
      Solution sol = solve_smt(store, *sr, cmd, minted);
      for (auto& [k, v] : sol.assignment) assignment[k] = v;
    } else {
      std::vector<Constraint> pending;
      pending.reserve(store.size());
      for (const auto& c : store)
        pending.push_back({apply_assignment(c.left, assignment),
                           apply_assignment(c.right, assignment), c.prov});
      Solution sol = solve_syntactic(pending, *sr, {});
      for (auto& [k, v] : sol.assignment)
        assignment[k] = normalize_grade(apply_assignment(v, assignment));
      // A metavariable no constraint ever touched defaults to 0.
      for (int m : minted)
        if (!assignment.count(m)) assignment[m] = g_zero();
    }
    store.clear();
  }
};

Checker::Checker(const CheckOptions& opt, const DefEnv* defs)
    : impl_(std::make_unique<Impl>(opt, defs)) {}
Checker::~Checker() = default;

const Context& Checker::ctx() const { return impl_->ctx; }
const CtxGradeVec& Checker::delta() const { return impl_->delta; }
const SemiringSpec& Checker::semiring() const { return *impl_->sr; }

void Checker::wf_extend(const std::string& x, const TermPtr& type) {
  if (ctx_lookup(impl_->ctx, x) >= 0)
    throw GertyError(ErrorCode::PreconditionViolated,
                     "context already binds '" + display(x) + "'", type->span);
  try {
    Checker::Impl::Formation f = impl_->infer_formation(type, "wf");
    impl_->push(x, type, f.sigma, f.deriv);
  } catch (GertyError& e) {
    if (e.code == ErrorCode::GradeMismatch)
      throw GertyError(ErrorCode::NonZeroTypeUse, e.what(), e.span);
    throw;
  }
}

void Checker::extend_given(const std::string& x, const TermPtr& type,
                           const GradeVec& row) {
  impl_->ctx.push_back({x, type});
  impl_->delta.push_back(row);
}

GradedType Checker::infer(const TermPtr& t) { return impl_->infer(t); }
GradePair Checker::check(const TermPtr& t, const TermPtr& type) {
  return impl_->check(t, type);
}
void Checker::solve() { impl_->solve(); }
const std::map<int, GradePtr>& Checker::assignment() const { return impl_->assignment; }
int Checker::mint_meta() { return impl_->mint(); }
size_t Checker::constraints_emitted() const { return impl_->store.size(); }

GradePtr Checker::zonk(const GradePtr& g) const { return impl_->zonk_grade(g); }

TermPtr Checker::zonk(const TermPtr& t) const {
  if (!t) return t;
  auto zg = [this](const GradePtr& g) { return g ? impl_->zonk_grade(g) : g; };
  TermPtr a = zonk(t->a), b = zonk(t->b);
  switch (t->kind) {
    case TermKind::Pi: return t_pi(t->name, zg(t->grade_s), zg(t->grade_r), a, b, t->span);
    case TermKind::Tensor: return t_tensor(t->name, zg(t->grade_r), a, b, t->span);
    case TermKind::BoxTy: return t_boxty(zg(t->grade_s), a, t->span);
    default: {
      if (a == t->a && b == t->b) return t;
      Term copy = *t;
      copy.a = a;
      copy.b = b;
      return std::make_shared<const Term>(std::move(copy));
    }
  }
}

// ---------------------------------------------------------------------------
// Declaration driver
// ---------------------------------------------------------------------------

FileReport check_declarations(const ParsedFile& file, const CheckOptions& opt,
                              DefEnv& defs) {
  FileReport report;
  for (const auto& d : file.decls) {
    DeclReport r;
    r.name = d.name;
    try {
      // One checker (one constraint batch) per declaration: implicit
      // grades in the signature are pinned down by the body check.
      Checker checker(opt, &defs);
      GradedType sig_ty = checker.infer(d.signature);
      long fuel = opt.fuel;
      TermPtr u = whnf(sig_ty.type, &defs, fuel);
      if (u->kind != TermKind::Universe)
        throw GertyError(ErrorCode::NotAType,
                         "signature of '" + d.name + "' is not a type", d.span);
      GradePair body = checker.check(d.body, d.signature);
      checker.solve();
      TermPtr signature = checker.zonk(d.signature);

      r.ok = true;
      r.signature = signature;
      r.signature_deriv = sig_ty.deriv;
      r.body_deriv = body.deriv;
      defs.add(d.name, signature, d.body);
    } catch (const GertyError& e) {
      r.ok = false;
      r.error = e.render();
      r.code = e.code;
    }
    report.decls.push_back(std::move(r));
  }
  return report;
}

}  // namespace gerty
