#include "gerty/oracle.hpp"

#include <cassert>

#include "gerty/parse.hpp"

namespace gerty {

DerivPtr mk_deriv(Derivation d) {
  return std::make_shared<const Derivation>(std::move(d));
}

// ---------------------------------------------------------------------------
// Derivation validation
// ---------------------------------------------------------------------------

namespace {

struct Validator {
  const SemiringSpec& sr;
  const DefEnv* defs;
  std::string error;
  const Derivation* failing = nullptr;

  bool fail(const Derivation& d, const std::string& why) {
    if (!failing) {
      failing = &d;
      error = d.rule + ": " + why;
    }
    return false;
  }

  GradeEq val_eq() {
    return [this](const GradePtr& a, const GradePtr& b) {
      return eval_grade(a, sr) == eval_grade(b, sr);
    };
  }

  bool teq(const TermPtr& a, const TermPtr& b) {
    return alpha_eq_graded(a, b, val_eq());
  }

  bool veq(const GradeVec& a, const GradeVec& b) { return vec_equal(a, b, sr); }

  bool zeros(const GradeVec& v) {
    for (const auto& g : v)
      if (!(eval_grade(g, sr) == sr.zero)) return false;
    return true;
  }

  bool ctx_eq(const Context& a, const Context& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].name != b[i].name || !teq(a[i].type, b[i].type)) return false;
    return true;
  }

  bool well_sized(const Derivation& d) {
    const Judgment& j = d.conclusion;
    if (j.delta.size() != j.ctx.size()) return fail(d, "|Delta| != |Gamma|");
    for (size_t i = 0; i < j.delta.size(); ++i)
      if (j.delta[i].size() != i) return fail(d, "Delta row size " + std::to_string(i));
    if (j.form == JForm::Typing) {
      if (j.subject_use.size() != j.ctx.size() || j.type_use.size() != j.ctx.size())
        return fail(d, "grade vector sizing");
    }
    return true;
  }

  // Premise shares the conclusion's context block.
  bool same_block(const Derivation& d, const Judgment& prem, const Judgment& conc) {
    if (!ctx_eq(prem.ctx, conc.ctx)) return fail(d, "premise context mismatch");
    if (!ctx_equal(prem.delta, conc.delta, sr)) return fail(d, "premise Delta mismatch");
    return true;
  }

  // Premise context extends `base` with one assumption graded `row`.
  bool extended_block(const Derivation& d, const Judgment& prem, const Judgment& base,
                      const TermPtr& type, const GradeVec& row) {
    if (prem.ctx.size() != base.ctx.size() + 1) return fail(d, "extension arity");
    for (size_t i = 0; i < base.ctx.size(); ++i)
      if (prem.ctx[i].name != base.ctx[i].name ||
          !teq(prem.ctx[i].type, base.ctx[i].type))
        return fail(d, "extension context prefix");
    if (!teq(prem.ctx.back().type, type)) return fail(d, "extension assumption type");
    if (!ctx_equal(CtxGradeVec(prem.delta.begin(), prem.delta.end() - 1), base.delta, sr))
      return fail(d, "extension Delta prefix");
    if (!veq(prem.delta.back(), row)) return fail(d, "extension Delta row");
    return true;
  }

  bool is_formation(const Derivation& d, const Judgment& prem, uint64_t* level) {
    TermPtr ty = normalize(prem.type, defs);
    if (ty->kind != TermKind::Universe) return fail(d, "formation premise not at a universe");
    if (!zeros(prem.type_use)) return fail(d, "formation premise with type-level use");
    if (level) *level = normalize_level(ty->level);
    return true;
  }

  // Renames `inner`'s last-assumption occurrences so the binder of `t`
  // lines up, then compares.
  bool binder_eq(const TermPtr& t, const std::string& binder, const TermPtr& inner,
                 const std::string& inner_name) {
    return teq(subst(t, binder, t_var(inner_name)), inner);
  }

  bool check(const DerivPtr& dp) {
    const Derivation& d = *dp;
    if (!well_sized(d)) return false;
    const Judgment& c = d.conclusion;
    for (const auto& p : d.premises)
      if (p && !check(p)) return false;

    auto premise = [&](size_t i) -> const Judgment& { return d.premises[i]->conclusion; };

    if (d.rule == "Wf-Empty") {
      if (!c.ctx.empty() || !c.delta.empty()) return fail(d, "nonempty conclusion");
      return true;
    }

    if (d.rule == "Wf-Ext") {
      if (d.premises.size() != 1) return fail(d, "premise count");
      const Judgment& p = premise(0);
      if (p.form != JForm::Typing) return fail(d, "premise form");
      if (!is_formation(d, p, nullptr)) return false;
      if (c.ctx.size() != p.ctx.size() + 1) return fail(d, "context extension");
      for (size_t i = 0; i < p.ctx.size(); ++i)
        if (c.ctx[i].name != p.ctx[i].name || !teq(c.ctx[i].type, p.ctx[i].type))
          return fail(d, "context prefix");
      if (!teq(c.ctx.back().type, p.subject)) return fail(d, "extended type");
      if (!ctx_equal(CtxGradeVec(c.delta.begin(), c.delta.end() - 1), p.delta, sr))
        return fail(d, "Delta prefix");
      if (!veq(c.delta.back(), p.subject_use)) return fail(d, "Delta extension row");
      return true;
    }

    if (d.rule == "T-Var") {
      if (d.premises.size() != 1 || premise(0).form != JForm::Wf)
        return fail(d, "premise");
      if (!same_block(d, premise(0), c)) return false;
      size_t i = d.index;
      if (i >= c.ctx.size()) return fail(d, "index out of range");
      if (c.subject->kind != TermKind::Var || c.subject->name != c.ctx[i].name)
        return fail(d, "subject is not the indexed variable");
      if (!teq(c.type, c.ctx[i].type)) return fail(d, "type mismatch");
      GradeVec unit = zero_vec(c.ctx.size());
      unit[i] = g_one();
      if (!veq(c.subject_use, unit)) return fail(d, "subject grading not 0..1..0");
      GradeVec expect = c.delta[i];
      expect.resize(c.ctx.size(), g_zero());
      if (!veq(c.type_use, expect)) return fail(d, "subject-type grading not sigma,0,0");
      return true;
    }

    if (d.rule == "T-Type") {
      if (d.premises.size() != 1 || premise(0).form != JForm::Wf)
        return fail(d, "premise");
      if (!same_block(d, premise(0), c)) return false;
      if (c.subject->kind != TermKind::Universe || c.type->kind != TermKind::Universe)
        return fail(d, "not universes");
      if (normalize_level(c.type->level) != normalize_level(c.subject->level) + 1)
        return fail(d, "level not suc");
      if (!zeros(c.subject_use) || !zeros(c.type_use)) return fail(d, "nonzero grading");
      return true;
    }

    if (d.rule == "T-Arrow" || d.rule == "T-Ten") {
      bool pi = d.rule == "T-Arrow";
      if (d.premises.size() != 2) return fail(d, "premise count");
      const Judgment& pa = premise(0);
      const Judgment& pb = premise(1);
      uint64_t l1, l2;
      if (!is_formation(d, pa, &l1) || !is_formation(d, pb, &l2)) return false;
      if (!same_block(d, pa, c)) return false;
      const TermPtr& sub = c.subject;
      if (sub->kind != (pi ? TermKind::Pi : TermKind::Tensor))
        return fail(d, "subject shape");
      if (!teq(sub->a, pa.subject)) return fail(d, "domain mismatch");
      if (!extended_block(d, pb, c, sub->a, pa.subject_use)) return false;
      if (!binder_eq(sub->b, sub->name, pb.subject, pb.ctx.back().name))
        return fail(d, "codomain mismatch");
      if (pb.subject_use.empty()) return fail(d, "empty codomain grading");
      GradePtr r_actual = pb.subject_use.back();
      if (!(eval_grade(r_actual, sr) == eval_grade(sub->grade_r, sr)))
        return fail(d, "binder type-grade differs from actual usage");
      GradeVec sigma2(pb.subject_use.begin(), pb.subject_use.end() - 1);
      if (!veq(c.subject_use, vec_add(pa.subject_use, sigma2)))
        return fail(d, "conclusion subject grading");
      if (!zeros(c.type_use)) return fail(d, "conclusion type grading");
      if (c.type->kind != TermKind::Universe ||
          normalize_level(c.type->level) != std::max(l1, l2))
        return fail(d, "conclusion universe level");
      return true;
    }

    if (d.rule == "T-Box") {
      if (d.premises.size() != 1) return fail(d, "premise count");
      const Judgment& pa = premise(0);
      uint64_t l;
      if (!is_formation(d, pa, &l)) return false;
      if (!same_block(d, pa, c)) return false;
      if (c.subject->kind != TermKind::BoxTy) return fail(d, "subject shape");
      if (!teq(c.subject->a, pa.subject)) return fail(d, "payload mismatch");
      if (!veq(c.subject_use, pa.subject_use)) return fail(d, "subject grading");
      if (!zeros(c.type_use)) return fail(d, "type grading");
      if (c.type->kind != TermKind::Universe || normalize_level(c.type->level) != l)
        return fail(d, "universe level");
      return true;
    }

    if (d.rule == "T-Fun") {
      if (d.premises.size() != 2) return fail(d, "premise count");
      const Judgment& pa = premise(0);
      const Judgment& pt = premise(1);
      if (!is_formation(d, pa, nullptr)) return false;
      if (!same_block(d, pa, c)) return false;
      if (c.subject->kind != TermKind::Lam || c.type->kind != TermKind::Pi)
        return fail(d, "shapes");
      const TermPtr& pity = c.type;
      if (!teq(pity->a, pa.subject)) return fail(d, "domain mismatch");
      if (!extended_block(d, pt, c, pity->a, pa.subject_use)) return false;
      const std::string& x = pt.ctx.back().name;
      if (!binder_eq(c.subject->a, c.subject->name, pt.subject, x))
        return fail(d, "body mismatch");
      if (!binder_eq(pity->b, pity->name, pt.type, x)) return fail(d, "codomain mismatch");
      GradePtr s_actual = pt.subject_use.back();
      GradePtr r_actual = pt.type_use.back();
      if (!(eval_grade(s_actual, sr) == eval_grade(pity->grade_s, sr)))
        return fail(d, "subject binder grade");
      if (!(eval_grade(r_actual, sr) == eval_grade(pity->grade_r, sr)))
        return fail(d, "type binder grade");
      GradeVec sigma2(pt.subject_use.begin(), pt.subject_use.end() - 1);
      GradeVec sigma3(pt.type_use.begin(), pt.type_use.end() - 1);
      if (!veq(c.subject_use, sigma2)) return fail(d, "conclusion subject grading");
      if (!veq(c.type_use, vec_add(pa.subject_use, sigma3)))
        return fail(d, "conclusion type grading");
      return true;
    }

    if (d.rule == "T-App") {
      if (d.premises.size() != 4) return fail(d, "premise count");
      const Judgment& pf = premise(0);
      const Judgment& pa = premise(1);
      const Judgment& px = premise(2);
      const Judgment& pb = premise(3);
      if (!same_block(d, pf, c) || !same_block(d, pa, c) || !same_block(d, px, c))
        return false;
      if (!is_formation(d, pa, nullptr) || !is_formation(d, pb, nullptr)) return false;
      TermPtr pity = normalize(pf.type, defs);
      if (pity->kind != TermKind::Pi) return fail(d, "function premise not at a Pi");
      if (!teq(pity->a, pa.subject)) return fail(d, "domain formation mismatch");
      if (!teq(px.type, pity->a)) return fail(d, "argument type");
      if (!veq(px.type_use, pa.subject_use)) return fail(d, "argument type grading");
      if (!extended_block(d, pb, c, pity->a, pa.subject_use)) return false;
      const std::string& x = pb.ctx.back().name;
      if (!binder_eq(pity->b, pity->name, pb.subject, x))
        return fail(d, "codomain formation mismatch");
      GradePtr r_actual = pb.subject_use.back();
      if (!(eval_grade(r_actual, sr) == eval_grade(pity->grade_r, sr)))
        return fail(d, "codomain binder grade");
      GradeVec sigma3(pb.subject_use.begin(), pb.subject_use.end() - 1);
      if (!veq(pf.type_use, vec_add(pa.subject_use, sigma3)))
        return fail(d, "function type grading is not sigma1+sigma3");
      if (c.subject->kind != TermKind::App || !teq(c.subject->a, pf.subject) ||
          !teq(c.subject->b, px.subject))
        return fail(d, "subject shape");
      if (!teq(c.type, subst(pity->b, pity->name, px.subject)))
        return fail(d, "conclusion type is not [t2/x]B");
      if (!veq(c.subject_use,
               vec_add(pf.subject_use, scalar_mul(pity->grade_s, px.subject_use))))
        return fail(d, "conclusion subject grading");
      if (!veq(c.type_use, vec_add(sigma3, scalar_mul(pity->grade_r, px.subject_use))))
        return fail(d, "conclusion type grading");
      return true;
    }

    if (d.rule == "T-Pair") {
      if (d.premises.size() != 3) return fail(d, "premise count");
      const Judgment& p1 = premise(0);
      const Judgment& p2 = premise(1);
      const Judgment& pb = premise(2);
      if (!same_block(d, p1, c) || !same_block(d, p2, c)) return false;
      if (!is_formation(d, pb, nullptr)) return false;
      if (c.subject->kind != TermKind::Pair || c.type->kind != TermKind::Tensor)
        return fail(d, "shapes");
      const TermPtr& ten = c.type;
      if (!teq(p1.type, ten->a)) return fail(d, "first component type");
      if (!extended_block(d, pb, c, ten->a, p1.type_use)) return false;
      const std::string& x = pb.ctx.back().name;
      if (!binder_eq(ten->b, ten->name, pb.subject, x)) return fail(d, "second type");
      GradePtr r_actual = pb.subject_use.back();
      if (!(eval_grade(r_actual, sr) == eval_grade(ten->grade_r, sr)))
        return fail(d, "tensor grade");
      GradeVec sigma4(pb.subject_use.begin(), pb.subject_use.end() - 1);
      if (!teq(p2.type, subst(ten->b, ten->name, c.subject->a)))
        return fail(d, "second component type is not [t1/x]B");
      if (!veq(p2.type_use,
               vec_add(sigma4, scalar_mul(ten->grade_r, p1.subject_use))))
        return fail(d, "second component type grading");
      if (!teq(c.subject->a, p1.subject) || !teq(c.subject->b, p2.subject))
        return fail(d, "components");
      if (!veq(c.subject_use, vec_add(p1.subject_use, p2.subject_use)))
        return fail(d, "conclusion subject grading");
      if (!veq(c.type_use, vec_add(p1.type_use, sigma4)))
        return fail(d, "conclusion type grading");
      return true;
    }

    if (d.rule == "T-TenCut") {
      if (d.premises.size() != 4) return fail(d, "premise count");
      const Judgment& ps = premise(0);   // scrutinee
      const Judgment& pa = premise(1);   // A formation
      const Judgment& pb = premise(2);   // B formation over x:A
      const Judgment& pt = premise(3);   // body over x:A, y:B
      if (!same_block(d, ps, c) || !same_block(d, pa, c)) return false;
      if (!is_formation(d, pa, nullptr) || !is_formation(d, pb, nullptr)) return false;
      TermPtr ten = normalize(ps.type, defs);
      if (ten->kind != TermKind::Tensor) return fail(d, "scrutinee not at a tensor");
      if (!teq(ten->a, pa.subject)) return fail(d, "component A formation");
      if (!extended_block(d, pb, c, ten->a, pa.subject_use)) return false;
      const std::string& x = pb.ctx.back().name;
      if (!binder_eq(ten->b, ten->name, pb.subject, x)) return fail(d, "component B");
      GradePtr r_actual = pb.subject_use.back();
      if (!(eval_grade(r_actual, sr) == eval_grade(ten->grade_r, sr)))
        return fail(d, "tensor grade");
      GradeVec sigmaB(pb.subject_use.begin(), pb.subject_use.end() - 1);
      if (!veq(ps.type_use, vec_add(pa.subject_use, sigmaB)))
        return fail(d, "scrutinee type grading is not sigmaA+sigmaB");
      // Body context: Gamma, x:A, y:B.
      if (pt.ctx.size() != c.ctx.size() + 2) return fail(d, "body context arity");
      if (!teq(pt.ctx[c.ctx.size()].type, ten->a)) return fail(d, "body x type");
      if (!binder_eq(ten->b, ten->name, pt.ctx.back().type, pt.ctx[c.ctx.size()].name))
        return fail(d, "body y type");
      if (!veq(pt.delta[c.ctx.size()], pa.subject_use)) return fail(d, "body x row");
      GradeVec yrow = sigmaB;
      yrow.push_back(ten->grade_r);
      if (!veq(pt.delta.back(), yrow)) return fail(d, "body y row");
      size_t n = c.ctx.size();
      GradePtr s1 = pt.subject_use[n], s2 = pt.subject_use[n + 1];
      if (!(eval_grade(s1, sr) == eval_grade(s2, sr)))
        return fail(d, "components used at different grades");
      if (d.g1 && !(eval_grade(d.g1, sr) == eval_grade(s1, sr)))
        return fail(d, "recorded component grade");
      GradePtr rx = pt.type_use[n], ry = pt.type_use[n + 1];
      GradePtr rprime = d.g2 ? d.g2 : g_zero();
      if (!(eval_grade(rx, sr) == eval_grade(rprime, sr)) ||
          !(eval_grade(ry, sr) == eval_grade(rprime, sr)))
        return fail(d, "result-type component grades");
      if (!(eval_grade(rprime, sr) == sr.zero))
        return fail(d, "dependent tensor elimination requires a C-formation premise");
      const std::string& xn = pt.ctx[n].name;
      const std::string& yn = pt.ctx[n + 1].name;
      if (occurs_free(xn, pt.type) || occurs_free(yn, pt.type))
        return fail(d, "result type mentions the bound components");
      if (!teq(c.type, pt.type)) return fail(d, "conclusion type");
      if (c.subject->kind != TermKind::LetPair || !teq(c.subject->a, ps.subject))
        return fail(d, "subject shape");
      TermPtr body_aligned = subst(subst(c.subject->b, c.subject->name, t_var(xn)),
                                   c.subject->name2, t_var(yn));
      if (!teq(body_aligned, pt.subject)) return fail(d, "body mismatch");
      GradeVec sigma3(pt.subject_use.begin(), pt.subject_use.begin() + n);
      GradeVec sigma5(pt.type_use.begin(), pt.type_use.begin() + n);
      if (!veq(c.subject_use, vec_add(sigma3, scalar_mul(s1, ps.subject_use))))
        return fail(d, "conclusion subject grading");
      if (!veq(c.type_use, vec_add(sigma5, scalar_mul(rprime, ps.subject_use))))
        return fail(d, "conclusion type grading");
      return true;
    }

    if (d.rule == "T-BoxI") {
      if (d.premises.size() != 1) return fail(d, "premise count");
      const Judgment& p = premise(0);
      if (!same_block(d, p, c)) return false;
      if (c.subject->kind != TermKind::BoxIntro || c.type->kind != TermKind::BoxTy)
        return fail(d, "shapes");
      if (!teq(c.subject->a, p.subject) || !teq(c.type->a, p.type))
        return fail(d, "payload");
      if (!veq(c.subject_use, scalar_mul(c.type->grade_s, p.subject_use)))
        return fail(d, "promotion scaling");
      if (!veq(c.type_use, p.type_use)) return fail(d, "type grading");
      return true;
    }

    if (d.rule == "T-BoxE") {
      if (d.premises.size() != 3) return fail(d, "premise count");
      const Judgment& ps = premise(0);
      const Judgment& pa = premise(1);
      const Judgment& pt = premise(2);
      if (!same_block(d, ps, c) || !same_block(d, pa, c)) return false;
      if (!is_formation(d, pa, nullptr)) return false;
      TermPtr box = normalize(ps.type, defs);
      if (box->kind != TermKind::BoxTy) return fail(d, "scrutinee not at a box");
      if (!teq(box->a, pa.subject)) return fail(d, "payload formation");
      if (!veq(ps.type_use, pa.subject_use)) return fail(d, "scrutinee type grading");
      if (!extended_block(d, pt, c, box->a, pa.subject_use)) return false;
      GradePtr s_actual = pt.subject_use.back();
      if (!(eval_grade(s_actual, sr) == eval_grade(box->grade_s, sr)))
        return fail(d, "unboxed variable grade differs from the box grade");
      GradePtr rprime = d.g2 ? d.g2 : g_zero();
      GradePtr r_actual = pt.type_use.back();
      if (!(eval_grade(r_actual, sr) ==
            eval_grade(g_mul(rprime, box->grade_s), sr)))
        return fail(d, "result-type grade on the unboxed variable");
      if (!(eval_grade(rprime, sr) == sr.zero))
        return fail(d, "dependent box elimination requires a B-formation premise");
      const std::string& x = pt.ctx.back().name;
      if (occurs_free(x, pt.type)) return fail(d, "result type mentions the variable");
      if (!teq(c.type, pt.type)) return fail(d, "conclusion type");
      if (c.subject->kind != TermKind::LetBox || !teq(c.subject->a, ps.subject))
        return fail(d, "subject shape");
      if (!binder_eq(c.subject->b, c.subject->name, pt.subject, x))
        return fail(d, "body mismatch");
      GradeVec sigma3(pt.subject_use.begin(), pt.subject_use.end() - 1);
      GradeVec sigma4(pt.type_use.begin(), pt.type_use.end() - 1);
      if (!veq(c.subject_use, vec_add(sigma3, ps.subject_use)))
        return fail(d, "conclusion subject grading");
      if (!veq(c.type_use, vec_add(sigma4, scalar_mul(rprime, ps.subject_use))))
        return fail(d, "conclusion type grading");
      return true;
    }

    if (d.rule == "T-Conv") {
      if (d.premises.size() != 1) return fail(d, "premise count");
      const Judgment& p = premise(0);
      if (!same_block(d, p, c)) return false;
      if (!teq(c.subject, p.subject)) return fail(d, "subject");
      if (!veq(c.subject_use, p.subject_use) || !veq(c.type_use, p.type_use))
        return fail(d, "grading");
      EvalEnv env;
      env.defs = defs;
      env.grade_eq = val_eq();
      if (!subtype(env, p.type, c.type)) return fail(d, "subtyping side condition");
      return true;
    }

    if (d.rule == "T-Def") {
      if (d.premises.size() != 1 || premise(0).form != JForm::Wf)
        return fail(d, "premise");
      if (!same_block(d, premise(0), c)) return false;
      if (c.subject->kind != TermKind::Var) return fail(d, "subject");
      const auto* def = defs ? defs->find(c.subject->name) : nullptr;
      if (!def) return fail(d, "unknown definition");
      if (!teq(c.type, def->signature)) return fail(d, "signature mismatch");
      if (!zeros(c.subject_use) || !zeros(c.type_use)) return fail(d, "grading");
      return true;
    }

    return fail(d, "unknown rule");
  }
};

}  // namespace

OracleResult check_derivation(const DerivPtr& d, const SemiringSpec& s,
                              const DefEnv* defs) {
  Validator v{s, defs};
  OracleResult res;
  try {
    res.ok = v.check(d);
  } catch (const GertyError& e) {
    res.ok = false;
    v.error = v.error.empty() ? e.what() : v.error + " (" + e.what() + ")";
  }
  res.error = v.error;
  res.failing = v.failing;
  return res;
}

// ---------------------------------------------------------------------------
// Hand assembly of derivations
// ---------------------------------------------------------------------------

DerivCtx deriv_ctx_empty() {
  DerivCtx c;
  Judgment j;
  j.form = JForm::Wf;
  c.wf = mk_deriv({"Wf-Empty", j, {}});
  return c;
}

Judgment typing_in(const DerivCtx& c, const TermPtr& subject, const TermPtr& type,
                   GradeVec subject_use, GradeVec type_use) {
  Judgment j;
  j.form = JForm::Typing;
  j.delta = c.delta;
  j.ctx = c.ctx;
  j.subject = subject;
  j.type = type;
  j.subject_use = std::move(subject_use);
  j.type_use = std::move(type_use);
  return j;
}

void deriv_ctx_extend(DerivCtx& c, const std::string& x, const TermPtr& type,
                      const DerivPtr& form) {
  c.ctx.push_back({x, type});
  c.delta.push_back(form->conclusion.subject_use);
  Judgment j;
  j.form = JForm::Wf;
  j.ctx = c.ctx;
  j.delta = c.delta;
  c.wf = mk_deriv({"Wf-Ext", j, {form}});
}

DerivPtr derive_type_node(const DerivCtx& c, uint64_t l) {
  return mk_deriv({"T-Type",
                   typing_in(c, t_universe(l), t_universe(l + 1),
                             zero_vec(c.ctx.size()), zero_vec(c.ctx.size())),
                   {c.wf}});
}

DerivPtr derive_var_node(const DerivCtx& c, size_t i) {
  GradeVec unit = zero_vec(c.ctx.size());
  unit[i] = g_one();
  GradeVec tyuse = c.delta[i];
  tyuse.resize(c.ctx.size(), g_zero());
  Derivation d{"T-Var",
               typing_in(c, t_var(c.ctx[i].name), c.ctx[i].type, unit, tyuse),
               {c.wf}};
  d.index = i;
  return mk_deriv(std::move(d));
}

DerivPtr derive_formation(const DerivCtx& c, const TermPtr& a) {
  switch (a->kind) {
    case TermKind::Universe: return derive_type_node(c, normalize_level(a->level));
    case TermKind::Var: {
      int i = ctx_lookup(c.ctx, a->name);
      assert(i >= 0);
      return derive_var_node(c, (size_t)i);
    }
    case TermKind::Pi:
    case TermKind::Tensor: {
      DerivPtr dom = derive_formation(c, a->a);
      DerivCtx inner = c;
      std::string x = fresh_name(a->name);
      deriv_ctx_extend(inner, x, a->a, dom);
      DerivPtr cod = derive_formation(inner, subst(a->b, a->name, t_var(x)));
      GradeVec s2(cod->conclusion.subject_use.begin(),
                  cod->conclusion.subject_use.end() - 1);
      uint64_t l1 = normalize_level(normalize(dom->conclusion.type)->level);
      uint64_t l2 = normalize_level(normalize(cod->conclusion.type)->level);
      return mk_deriv({a->kind == TermKind::Pi ? "T-Arrow" : "T-Ten",
                       typing_in(c, a, t_universe(std::max(l1, l2)),
                                 vec_add(dom->conclusion.subject_use, s2),
                                 zero_vec(c.ctx.size())),
                       {dom, cod}});
    }
    case TermKind::BoxTy: {
      DerivPtr dom = derive_formation(c, a->a);
      return mk_deriv({"T-Box",
                       typing_in(c, a, dom->conclusion.type,
                                 dom->conclusion.subject_use, zero_vec(c.ctx.size())),
                       {dom}});
    }
    default:
      assert(false && "formation of a non-type shape");
      return nullptr;
  }
}

// ---------------------------------------------------------------------------
// Generator
// ---------------------------------------------------------------------------

struct Generator::Impl {
  const SemiringSpec& sr;
  std::mt19937_64* rng = nullptr;
  // When set, generated subjects stay inside the bidirectionally
  // checkable fragment: application heads and eliminator scrutinees are
  // context variables or boxed terms, never bare lambdas or pairs. The
  // declarative system types those too, but the algorithmic checker
  // cannot infer them, and several suites re-check generated judgments.
  bool checkable = false;

  explicit Impl(const SemiringSpec& s) : sr(s) {}

  int pick(int n) { return (int)((*rng)() % (uint64_t)n); }
  bool coin(double p) {
    return std::uniform_real_distribution<double>(0, 1)(*rng) < p;
  }
  GradePtr small_grade() { return g_num((unsigned long)pick(3)); }

  using Ctx = DerivCtx;

  Ctx empty_ctx() { return deriv_ctx_empty(); }

  Judgment typing(const Ctx& c, const TermPtr& subject, const TermPtr& type,
                  GradeVec s1, GradeVec s2) {
    return typing_in(c, subject, type, std::move(s1), std::move(s2));
  }

  void extend(Ctx& c, const std::string& x, const TermPtr& type, const DerivPtr& form) {
    deriv_ctx_extend(c, x, type, form);
  }

  DerivPtr t_type_node(const Ctx& c, uint64_t l) { return derive_type_node(c, l); }

  DerivPtr t_var_node(const Ctx& c, size_t i) { return derive_var_node(c, i); }

  DerivPtr derive_formation(const Ctx& c, const TermPtr& a) {
    return gerty::derive_formation(c, a);
  }

  // A type formation derivation (subject : Type_l, zero type use).
  DerivPtr gen_type(Ctx& c, int budget) {
    std::vector<int> options;  // 0 = Type0, 1 = var, 2 = pi, 3 = tensor, 4 = box
    options.push_back(0);
    for (size_t i = 0; i < c.ctx.size(); ++i)
      if (c.ctx[i].type->kind == TermKind::Universe) { options.push_back(1); break; }
    if (budget > 1) { options.push_back(2); options.push_back(2); options.push_back(3);
                      options.push_back(4); }
    switch (options[pick((int)options.size())]) {
      case 0: return t_type_node(c, (uint64_t)pick(2));
      case 1: {
        std::vector<size_t> is;
        for (size_t i = 0; i < c.ctx.size(); ++i)
          if (c.ctx[i].type->kind == TermKind::Universe) is.push_back(i);
        return t_var_node(c, is[pick((int)is.size())]);
      }
      case 2:
      case 3: {
        bool pi = coin(0.6);
        DerivPtr dom = gen_type(c, budget / 2);
        Ctx inner = c;
        std::string x = fresh_name("v");
        extend(inner, x, dom->conclusion.subject, dom);
        DerivPtr cod = gen_type(inner, budget / 2);
        GradePtr r = cod->conclusion.subject_use.back();
        GradeVec s2(cod->conclusion.subject_use.begin(),
                    cod->conclusion.subject_use.end() - 1);
        TermPtr ty =
            pi ? t_pi(x, small_grade(), r, dom->conclusion.subject,
                      cod->conclusion.subject)
               : t_tensor(x, r, dom->conclusion.subject, cod->conclusion.subject);
        uint64_t l1 = normalize_level(dom->conclusion.type->level);
        uint64_t l2 = normalize_level(cod->conclusion.type->level);
        return mk_deriv({pi ? "T-Arrow" : "T-Ten",
                         typing(c, ty, t_universe(std::max(l1, l2)),
                                vec_add(dom->conclusion.subject_use, s2),
                                zero_vec(c.ctx.size())),
                         {dom, cod}});
      }
      default: {
        DerivPtr dom = gen_type(c, budget - 1);
        TermPtr ty = t_boxty(small_grade(), dom->conclusion.subject);
        return mk_deriv({"T-Box",
                         typing(c, ty, dom->conclusion.type,
                                dom->conclusion.subject_use, zero_vec(c.ctx.size())),
                         {dom}});
      }
    }
  }

  // Inhabit a (generated-shape) type; nullptr when no easy inhabitant.
  DerivPtr inhabit(Ctx& c, const TermPtr& type, int budget) {
    switch (type->kind) {
      case TermKind::Universe: {
        uint64_t l = normalize_level(type->level);
        std::vector<size_t> vars;
        for (size_t i = 0; i < c.ctx.size(); ++i)
          if (c.ctx[i].type->kind == TermKind::Universe &&
              normalize_level(c.ctx[i].type->level) == l)
            vars.push_back(i);
        if (!vars.empty() && coin(0.5)) return t_var_node(c, vars[pick((int)vars.size())]);
        if (l >= 1) return t_type_node(c, l - 1);
        if (!vars.empty()) return t_var_node(c, vars[pick((int)vars.size())]);
        return nullptr;
      }
      case TermKind::Var: {
        std::vector<size_t> vars;
        for (size_t i = 0; i < c.ctx.size(); ++i)
          if (c.ctx[i].type->kind == TermKind::Var && c.ctx[i].type->name == type->name)
            vars.push_back(i);
        if (vars.empty()) return nullptr;
        return t_var_node(c, vars[pick((int)vars.size())]);
      }
      case TermKind::BoxTy: {
        DerivPtr body = inhabit(c, type->a, budget - 1);
        if (!body) return nullptr;
        Derivation d{"T-BoxI",
                     typing(c, t_boxintro(body->conclusion.subject),
                            t_boxty(type->grade_s, body->conclusion.type),
                            scalar_mul(type->grade_s, body->conclusion.subject_use),
                            body->conclusion.type_use),
                     {body}};
        d.g1 = type->grade_s;
        return mk_deriv(std::move(d));
      }
      default: return nullptr;
    }
  }

  // T-Fun over the given domain with a generated body.
  DerivPtr fun_over(const Ctx& c, const DerivPtr& dom, int budget, DerivPtr* body_out,
                    std::string* binder_out) {
    Ctx inner = c;
    std::string x = fresh_name("x");
    extend(inner, x, dom->conclusion.subject, dom);
    DerivPtr body = gen_subject(inner, budget);
    GradePtr s = body->conclusion.subject_use.back();
    GradePtr r = body->conclusion.type_use.back();
    GradeVec s2(body->conclusion.subject_use.begin(),
                body->conclusion.subject_use.end() - 1);
    GradeVec s3(body->conclusion.type_use.begin(),
                body->conclusion.type_use.end() - 1);
    TermPtr lam = t_lam(x, body->conclusion.subject);
    TermPtr pity =
        t_pi(x, s, r, dom->conclusion.subject, body->conclusion.type);
    if (body_out) *body_out = body;
    if (binder_out) *binder_out = x;
    return mk_deriv({"T-Fun",
                     typing(c, lam, pity, s2,
                            vec_add(dom->conclusion.subject_use, s3)),
                     {dom, body}});
  }

  // T-App given a function derivation whose type is (syntactically) a Pi
  // and an argument derivation at the domain.
  DerivPtr apply(const Ctx& c, const DerivPtr& fn, const DerivPtr& dom,
                 const DerivPtr& arg) {
    TermPtr pity = normalize(fn->conclusion.type);
    Ctx innerf = c;
    std::string xf = fresh_name(pity->name);
    extend(innerf, xf, pity->a, dom);
    DerivPtr codf = derive_formation(innerf, subst(pity->b, pity->name, t_var(xf)));
    GradeVec s3(codf->conclusion.subject_use.begin(),
                codf->conclusion.subject_use.end() - 1);
    Derivation appd{
        "T-App",
        typing(c, t_app(fn->conclusion.subject, arg->conclusion.subject),
               subst(pity->b, pity->name, arg->conclusion.subject),
               vec_add(fn->conclusion.subject_use,
                       scalar_mul(pity->grade_s, arg->conclusion.subject_use)),
               vec_add(s3, scalar_mul(pity->grade_r, arg->conclusion.subject_use))),
        {fn, dom, arg, codf}};
    appd.g1 = pity->grade_s;
    appd.g2 = pity->grade_r;
    return mk_deriv(std::move(appd));
  }

  // Beta redex: (\x -> body) arg over an inhabitable domain.
  DerivPtr redex_app(Ctx& c, int budget) {
    DerivPtr dom = gen_type(c, 1);  // Type_l or a context type variable
    TermPtr domty = dom->conclusion.subject;
    DerivPtr arg = inhabit(c, domty, budget / 3);
    if (!arg) return nullptr;
    DerivPtr fn = fun_over(c, dom, budget / 3, nullptr, nullptr);
    return apply(c, fn, dom, arg);
  }

  // Neutral application of a Pi-typed context variable.
  DerivPtr var_app(Ctx& c, int budget) {
    std::vector<size_t> fns;
    for (size_t i = 0; i < c.ctx.size(); ++i)
      if (c.ctx[i].type->kind == TermKind::Pi) fns.push_back(i);
    while (!fns.empty()) {
      size_t at = (size_t)pick((int)fns.size());
      size_t i = fns[at];
      fns.erase(fns.begin() + (long)at);
      const TermPtr& pity = c.ctx[i].type;
      DerivPtr arg = inhabit(c, pity->a, budget / 3);
      if (!arg) continue;
      DerivPtr dom = derive_formation(c, pity->a);
      return apply(c, derive_var_node(c, i), dom, arg);
    }
    return nullptr;
  }

  // let [x] = [payload] in body; the promotion grade matches the body's
  // usage of x (body first).
  DerivPtr box_elim(Ctx& c, int budget) {
    DerivPtr payload_form = gen_type(c, budget / 3);
    TermPtr a = payload_form->conclusion.subject;
    Ctx inner = c;
    std::string x = fresh_name("x");
    extend(inner, x, a, payload_form);
    DerivPtr body = gen_subject(inner, budget / 3);
    if (occurs_free(x, body->conclusion.type)) return nullptr;
    GradePtr s = body->conclusion.subject_use.back();
    DerivPtr payload = inhabit(c, a, budget / 3);
    if (!payload) return nullptr;
    Derivation boxi{"T-BoxI",
                    typing(c, t_boxintro(payload->conclusion.subject),
                           t_boxty(s, payload->conclusion.type),
                           scalar_mul(s, payload->conclusion.subject_use),
                           payload->conclusion.type_use),
                    {payload}};
    boxi.g1 = s;
    DerivPtr scrut = mk_deriv(std::move(boxi));
    GradeVec s3(body->conclusion.subject_use.begin(),
                body->conclusion.subject_use.end() - 1);
    GradeVec s4(body->conclusion.type_use.begin(),
                body->conclusion.type_use.end() - 1);
    Derivation d{"T-BoxE",
                 typing(c,
                        t_letbox(x, scrut->conclusion.subject,
                                 body->conclusion.subject),
                        body->conclusion.type,
                        vec_add(s3, scrut->conclusion.subject_use), s4),
                 {scrut, payload_form, body}};
    d.g1 = s;
    d.g2 = g_zero();
    return mk_deriv(std::move(d));
  }

  // Tensor elimination over a given scrutinee derivation (at a tensor
  // type) with formation derivations for its components.
  DerivPtr ten_elim_over(Ctx& c, const DerivPtr& scrut, const DerivPtr& aform,
                         const DerivPtr& bform, int budget) {
    TermPtr ten = normalize(scrut->conclusion.type);
    TermPtr a = ten->a;
    Ctx inner = c;
    std::string x = fresh_name("x");
    extend(inner, x, a, aform);
    std::string y = fresh_name("y");
    // The extension's well-formedness premise must live over the actual
    // inner context (x), not over the tensor binder used by `bform`.
    TermPtr btype = subst(ten->b, ten->name, t_var(x));
    DerivPtr bform_inner = derive_formation(inner, btype);
    extend(inner, y, btype, bform_inner);
    DerivPtr body = gen_subject(inner, budget / 3);
    size_t n = c.ctx.size();
    GradeValue sx = eval_grade(body->conclusion.subject_use[n], sr);
    GradeValue sy = eval_grade(body->conclusion.subject_use[n + 1], sr);
    GradeValue rx = eval_grade(body->conclusion.type_use[n], sr);
    GradeValue ry = eval_grade(body->conclusion.type_use[n + 1], sr);
    if (!(sx == sy) || !(rx == sr.zero) || !(ry == sr.zero) ||
        occurs_free(x, body->conclusion.type) ||
        occurs_free(y, body->conclusion.type))
      return nullptr;
    GradeVec s3(body->conclusion.subject_use.begin(),
                body->conclusion.subject_use.begin() + n);
    GradeVec s5(body->conclusion.type_use.begin(),
                body->conclusion.type_use.begin() + n);
    Derivation d{"T-TenCut",
                 typing(c,
                        t_letpair(x, y, scrut->conclusion.subject,
                                  body->conclusion.subject),
                        body->conclusion.type,
                        vec_add(s3, scalar_mul(body->conclusion.subject_use[n],
                                               scrut->conclusion.subject_use)),
                        s5),
                 {scrut, aform, bform, body}};
    d.g1 = body->conclusion.subject_use[n];
    d.g2 = g_zero();
    return mk_deriv(std::move(d));
  }

  // case <Type_0, t2> of <x, y> -> body over a tensor with a universe
  // first component.
  DerivPtr pair_ten_elim(Ctx& c, int budget) {
    DerivPtr aform = t_type_node(c, 1);
    TermPtr a = t_universe(1);
    Ctx innerb = c;
    std::string xt = fresh_name("v");
    extend(innerb, xt, a, aform);
    DerivPtr bform = gen_type(innerb, 1);
    TermPtr b = bform->conclusion.subject;
    GradePtr r = bform->conclusion.subject_use.back();
    GradeVec sigmaB(bform->conclusion.subject_use.begin(),
                    bform->conclusion.subject_use.end() - 1);
    TermPtr tensor_ty = t_tensor(xt, r, a, b);
    DerivPtr first = t_type_node(c, 0);
    TermPtr b_inst = subst(b, xt, t_universe(0));
    DerivPtr second = inhabit(c, normalize(b_inst), budget / 3);
    if (!second) return nullptr;
    Derivation paird{
        "T-Pair",
        typing(c, t_pair(first->conclusion.subject, second->conclusion.subject),
               tensor_ty,
               vec_add(first->conclusion.subject_use,
                       second->conclusion.subject_use),
               vec_add(first->conclusion.type_use, sigmaB)),
        {first, second, bform}};
    paird.g1 = r;
    return ten_elim_over(c, mk_deriv(std::move(paird)), aform, bform, budget);
  }

  // case v of <x, y> -> body for a tensor-typed context variable.
  DerivPtr var_ten_elim(Ctx& c, int budget) {
    for (size_t i = 0; i < c.ctx.size(); ++i) {
      if (c.ctx[i].type->kind != TermKind::Tensor) continue;
      const TermPtr& ten = c.ctx[i].type;
      DerivPtr aform = derive_formation(c, ten->a);
      Ctx innerb = c;
      std::string xt = fresh_name(ten->name);
      extend(innerb, xt, ten->a, aform);
      DerivPtr bform = derive_formation(innerb, subst(ten->b, ten->name, t_var(xt)));
      return ten_elim_over(c, derive_var_node(c, i), aform, bform, budget);
    }
    return nullptr;
  }

  // Forward generation of a typing derivation; the type comes out.
  DerivPtr gen_subject(Ctx& c, int budget) {
    enum { Var, Type, Fun, AppR, BoxI, BoxE, TenCut, PairR, Conv };
    std::vector<int> options = {Type};
    if (!c.ctx.empty()) { options.push_back(Var); options.push_back(Var); }
    if (budget > 1) { options.push_back(Fun); options.push_back(BoxI); }
    if (budget > 2) {
      options.push_back(AppR); options.push_back(BoxE);
      options.push_back(TenCut); options.push_back(PairR); options.push_back(Conv);
    }
    switch (options[pick((int)options.size())]) {
      case Var: return t_var_node(c, (size_t)pick((int)c.ctx.size()));
      case Type: return t_type_node(c, (uint64_t)pick(2));

      case Fun: {
        DerivPtr dom = gen_type(c, budget / 3);
        Ctx inner = c;
        std::string x = fresh_name("x");
        extend(inner, x, dom->conclusion.subject, dom);
        DerivPtr body = gen_subject(inner, budget / 2);
        GradePtr s = body->conclusion.subject_use.back();
        GradePtr r = body->conclusion.type_use.back();
        GradeVec s2(body->conclusion.subject_use.begin(),
                    body->conclusion.subject_use.end() - 1);
        GradeVec s3(body->conclusion.type_use.begin(),
                    body->conclusion.type_use.end() - 1);
        TermPtr lam = t_lam(x, body->conclusion.subject);
        TermPtr pity = t_pi(x, s, r, dom->conclusion.subject, body->conclusion.type);
        return mk_deriv({"T-Fun",
                         typing(c, lam, pity, s2,
                                vec_add(dom->conclusion.subject_use, s3)),
                         {dom, body}});
      }

      case AppR: {
        DerivPtr app = checkable ? var_app(c, budget) : redex_app(c, budget);
        if (!app) return gen_subject(c, budget / 2);
        return app;
      }

      case BoxI: {
        DerivPtr body = gen_subject(c, budget / 2);
        GradePtr s = small_grade();
        Derivation d{"T-BoxI",
                     typing(c, t_boxintro(body->conclusion.subject),
                            t_boxty(s, body->conclusion.type),
                            scalar_mul(s, body->conclusion.subject_use),
                            body->conclusion.type_use),
                     {body}};
        d.g1 = s;
        return mk_deriv(std::move(d));
      }

      case BoxE: {
        DerivPtr e = box_elim(c, budget);
        if (!e) return gen_subject(c, budget / 2);
        return e;
      }

      case TenCut: {
        DerivPtr e = checkable ? var_ten_elim(c, budget) : pair_ten_elim(c, budget);
        if (!e) return gen_subject(c, budget / 2);
        return e;
      }

      case PairR: {
        DerivPtr aform = t_type_node(c, 1);
        Ctx innerb = c;
        std::string xt = fresh_name("v");
        extend(innerb, xt, t_universe(1), aform);
        DerivPtr bform = gen_type(innerb, 1);
        TermPtr b = bform->conclusion.subject;
        GradePtr r = bform->conclusion.subject_use.back();
        GradeVec sigmaB(bform->conclusion.subject_use.begin(),
                        bform->conclusion.subject_use.end() - 1);
        DerivPtr first = t_type_node(c, 0);
        DerivPtr second = inhabit(c, normalize(subst(b, xt, t_universe(0))), budget / 3);
        if (!second) return gen_subject(c, budget / 2);
        Derivation d{
            "T-Pair",
            typing(c, t_pair(first->conclusion.subject, second->conclusion.subject),
                   t_tensor(xt, r, t_universe(1), b),
                   vec_add(first->conclusion.subject_use,
                           second->conclusion.subject_use),
                   vec_add(first->conclusion.type_use, sigmaB)),
            {first, second, bform}};
        d.g1 = r;
        return mk_deriv(std::move(d));
      }

      default: {  // Conv: level-normalization subtype wrap
        DerivPtr inner = gen_subject(c, budget - 1);
        if (inner->conclusion.type->kind != TermKind::Universe) return inner;
        LevelPtr l = inner->conclusion.type->level;
        Judgment j = inner->conclusion;
        j.type = t_universe(lvl_lub(l, lvl_const(0)));
        return mk_deriv({"T-Conv", j, {inner}});
      }
    }
  }
};

Generator::Generator(uint64_t seed, const SemiringSpec& s)
    : impl(std::make_shared<Impl>(s)), rng_(seed) {
  impl->rng = &rng_;
}

DerivPtr Generator::gen_derivation(int budget) {
  auto c = impl->empty_ctx();
  int entries = impl->pick(3);
  for (int i = 0; i < entries; ++i) {
    DerivPtr form = impl->gen_type(c, 2);
    impl->extend(c, fresh_name("g"), form->conclusion.subject, form);
  }
  return impl->gen_subject(c, budget);
}

DerivPtr Generator::gen_closed(int budget, bool want_redex) {
  auto c = impl->empty_ctx();
  if (!want_redex) return impl->gen_subject(c, budget);
  // Redex at the top, body and argument inside the checkable fragment so
  // the contractum re-checks bidirectionally.
  bool saved = impl->checkable;
  impl->checkable = true;
  DerivPtr out;
  for (int attempt = 0; attempt < 40 && !out; ++attempt) {
    auto cc = impl->empty_ctx();
    switch (impl->pick(3)) {
      case 0: {
        DerivPtr dom = impl->t_type_node(cc, 1);
        DerivPtr arg = impl->t_type_node(cc, 0);
        DerivPtr fn = impl->fun_over(cc, dom, std::max(2, budget / 2), nullptr, nullptr);
        out = impl->apply(cc, fn, dom, arg);
        break;
      }
      case 1: out = impl->box_elim(cc, std::max(3, budget)); break;
      default: out = impl->pair_ten_elim(cc, std::max(3, budget)); break;
    }
    if (out && !step(out->conclusion.subject).stepped) out = nullptr;
  }
  impl->checkable = saved;
  if (out) return out;
  // Guaranteed fallback: (\x -> x) Type_0 at Type_1.
  auto cc = impl->empty_ctx();
  DerivPtr dom = impl->t_type_node(cc, 1);
  Impl::Ctx inner = cc;
  std::string x = fresh_name("x");
  impl->extend(inner, x, t_universe(1), dom);
  DerivPtr body = impl->t_var_node(inner, 0);
  DerivPtr fn = mk_deriv(
      {"T-Fun",
       impl->typing(cc, t_lam(x, t_var(x)),
                    t_pi(x, g_one(), g_zero(), t_universe(1), t_universe(1)), {}, {}),
       {dom, body}});
  DerivPtr arg = impl->t_type_node(cc, 0);
  return impl->apply(cc, fn, dom, arg);
}

DerivPtr Generator::gen_wf(int entries) {
  auto c = impl->empty_ctx();
  for (int i = 0; i < entries; ++i) {
    DerivPtr form = impl->gen_type(c, 3);
    impl->extend(c, fresh_name("g"), form->conclusion.subject, form);
  }
  return c.wf;
}

// ---------------------------------------------------------------------------
// Re-checking and suites
// ---------------------------------------------------------------------------

bool recheck_judgment(const Judgment& j, const CheckOptions& opt, const DefEnv* defs,
                      std::string* error) {
  try {
    Checker checker(opt, defs);
    for (size_t i = 0; i < j.ctx.size(); ++i)
      checker.extend_given(j.ctx[i].name, j.ctx[i].type, j.delta[i]);
    GradePair got = checker.check(j.subject, j.type);
    checker.solve();
    for (auto& g : got.subject) g = checker.zonk(g);
    for (auto& g : got.subject_type) g = checker.zonk(g);
    const SemiringSpec& sr = checker.semiring();
    if (!vec_equal(got.subject, j.subject_use, sr)) {
      if (error)
        *error = "subject grading: got " + show_vec(got.subject, sr) + " wanted " +
                 show_vec(j.subject_use, sr);
      return false;
    }
    if (!vec_equal(got.subject_type, j.type_use, sr)) {
      if (error)
        *error = "type grading: got " + show_vec(got.subject_type, sr) + " wanted " +
                 show_vec(j.type_use, sr);
      return false;
    }
    return true;
  } catch (const GertyError& e) {
    if (error) *error = e.render();
    return false;
  }
}

namespace {

CheckOptions suite_options(const SemiringSpec& s) {
  CheckOptions opt;
  opt.semiring = &s;
  return opt;
}

void record(SuiteResult& res, bool ok, const std::string& msg) {
  res.cases++;
  if (!ok) {
    res.failures++;
    if (res.messages.size() < 10) res.messages.push_back(msg);
  }
}

}  // namespace

SuiteResult agreement_suite(uint64_t seed, int cases, const SemiringSpec& s) {
  SuiteResult res;
  Generator gen(seed, s);
  gen.impl->checkable = true;
  for (int i = 0; i < cases; ++i) {
    DerivPtr d = gen.gen_derivation(8);
    OracleResult oracle = check_derivation(d, s);
    if (!oracle.ok) {
      record(res, false, "oracle rejected generated derivation: " + oracle.error);
      continue;
    }
    std::string err;
    bool ok = recheck_judgment(d->conclusion, suite_options(s), nullptr, &err);
    record(res, ok, "algorithm disagreed on case " + std::to_string(i) + ": " + err);
  }
  return res;
}

SuiteResult wf_assumption_suite(uint64_t seed, int cases, const SemiringSpec& s) {
  SuiteResult res;
  Generator gen(seed, s);
  while (res.cases < cases) {
    // The last Wf-Ext premise is exactly the lemma's extracted judgment
    // (Delta_1 | sigma | 0) . Gamma_1 |- A : Type_l; context lengths vary
    // across samples so every index gets exercised.
    DerivPtr wf = gen.gen_wf(1 + (int)(gen.rng()() % 3));
    if (wf->rule != "Wf-Ext") continue;
    const Judgment& form = wf->premises[0]->conclusion;
    std::string err;
    bool ok = recheck_judgment(form, suite_options(s), nullptr, &err);
    record(res, ok, "assumption formation re-check failed: " + err);
  }
  return res;
}

SuiteResult preservation_suite(uint64_t seed, int cases, const SemiringSpec& s) {
  SuiteResult res;
  Generator gen(seed, s);
  for (int i = 0; i < cases; ++i) {
    DerivPtr d = gen.gen_closed(8, true);
    const Judgment& j = d->conclusion;
    StepResult r = step(j.subject);
    if (!r.stepped) {
      record(res, false, "generated closed subject did not step");
      continue;
    }
    Judgment stepped = j;
    stepped.subject = r.term;
    std::string err;
    bool ok = recheck_judgment(stepped, suite_options(s), nullptr, &err);
    record(res, ok,
           "preservation failed after " + std::string(r.rule) + ": " + err + " for " +
               pretty(j.subject));
  }
  return res;
}

SuiteResult termination_suite(uint64_t seed, int cases, const SemiringSpec& s,
                              long fuel) {
  SuiteResult res;
  Generator gen(seed, s);
  for (int i = 0; i < cases; ++i) {
    DerivPtr d = gen.gen_derivation(10);
    try {
      normalize(d->conclusion.subject, nullptr, fuel);
      record(res, true, "");
    } catch (const GertyError& e) {
      record(res, false, "did not normalize: " + std::string(e.what()));
    }
  }
  return res;
}

SuiteResult subst_lemma_suite(uint64_t seed, int cases, const SemiringSpec& s) {
  SuiteResult res;
  Generator gen(seed, s);
  auto& impl = *gen.impl;
  impl.checkable = true;
  long attempts = 0;
  while (res.cases < cases) {
    if (++attempts > 60L * cases) {
      record(res, false, "generator failed to produce enough lemma instances");
      break;
    }
    // Gamma1, then t : A over Gamma1, then x : A, then Gamma2, then t' : B.
    auto c1 = impl.empty_ctx();
    int n1 = impl.pick(2);
    for (int i = 0; i < n1; ++i) {
      DerivPtr form = impl.gen_type(c1, 2);
      impl.extend(c1, fresh_name("g"), form->conclusion.subject, form);
    }
    DerivPtr dt = impl.gen_subject(c1, 5);
    // Substituting a bare lambda or pair for a variable in head position
    // would leave a redex the bidirectional re-check cannot infer.
    if (dt->conclusion.subject->kind == TermKind::Lam ||
        dt->conclusion.subject->kind == TermKind::Pair)
      continue;
    const Judgment& jt = dt->conclusion;
    // The extension row for x is A's formation grading = t's subject-type
    // vector.
    auto cfull = c1;
    std::string x = fresh_name("x");
    TermPtr a = jt.type;
    DerivPtr aform;
    try {
      aform = impl.derive_formation(cfull, normalize(a));
    } catch (...) {
      continue;  // type shape outside the formation grammar (e.g. substituted)
    }
    if (!vec_equal(aform->conclusion.subject_use, jt.type_use, s)) continue;
    impl.extend(cfull, x, normalize(a), aform);
    int n2 = impl.pick(2);
    for (int i = 0; i < n2; ++i) {
      DerivPtr form = impl.gen_type(cfull, 2);
      impl.extend(cfull, fresh_name("h"), form->conclusion.subject, form);
    }
    DerivPtr dtp = impl.gen_subject(cfull, 5);
    const Judgment& jtp = dtp->conclusion;

    size_t k = c1.ctx.size();  // |Gamma1| = |Delta|
    // Split the vectors at x's position.
    GradeVec s3(jtp.subject_use.begin(), jtp.subject_use.begin() + k);
    GradePtr sg = jtp.subject_use[k];
    GradeVec s4(jtp.subject_use.begin() + k + 1, jtp.subject_use.end());
    GradeVec s5(jtp.type_use.begin(), jtp.type_use.begin() + k);
    GradePtr rg = jtp.type_use[k];
    GradeVec s6(jtp.type_use.begin() + k + 1, jtp.type_use.end());

    // New context grading: Delta, (Delta' \ |Delta|  +  (Delta'/|Delta|) * sigma2).
    CtxGradeVec delta2(jtp.delta.begin() + k + 1, jtp.delta.end());
    CtxGradeVec transformed =
        ctx_add(discard(delta2, k), ctx_scale(choose(delta2, k), jt.subject_use));

    Judgment out;
    out.form = JForm::Typing;
    out.ctx = c1.ctx;
    out.delta = c1.delta;
    for (size_t i = k + 1; i < jtp.ctx.size(); ++i) {
      out.ctx.push_back(
          {jtp.ctx[i].name, subst(jtp.ctx[i].type, x, jt.subject)});
      out.delta.push_back(transformed[i - (k + 1)]);
    }
    out.subject = subst(jtp.subject, x, jt.subject);
    out.type = subst(jtp.type, x, jt.subject);
    GradeVec new_subject = vec_add(s3, scalar_mul(sg, jt.subject_use));
    new_subject.insert(new_subject.end(), s4.begin(), s4.end());
    GradeVec new_type = vec_add(s5, scalar_mul(rg, jt.subject_use));
    new_type.insert(new_type.end(), s6.begin(), s6.end());
    out.subject_use = new_subject;
    out.type_use = new_type;

    std::string err;
    bool ok = recheck_judgment(out, suite_options(s), nullptr, &err);
    record(res, ok, "substitution lemma re-check failed: " + err);
  }
  return res;
}

SuiteResult structural_suite(uint64_t seed, int cases, const SemiringSpec& s) {
  SuiteResult res;
  Generator gen(seed, s);
  auto& impl = *gen.impl;
  impl.checkable = true;
  int which = 0;
  while (res.cases < cases) {
    int kind = which++ % 3;  // 0 contraction, 1 exchange, 2 weakening
    auto c1 = impl.empty_ctx();
    int n1 = impl.pick(2);
    for (int i = 0; i < n1; ++i) {
      DerivPtr form = impl.gen_type(c1, 2);
      impl.extend(c1, fresh_name("g"), form->conclusion.subject, form);
    }

    if (kind == 0) {
      // Gamma1, x:A, y:A, Gamma2 |- t : B  ~~>  contract x,y to z.
      DerivPtr aform = impl.gen_type(c1, 2);
      TermPtr a = aform->conclusion.subject;
      auto cfull = c1;
      std::string x = fresh_name("x");
      impl.extend(cfull, x, a, aform);
      DerivPtr aform2 = impl.derive_formation(cfull, a);
      std::string y = fresh_name("y");
      impl.extend(cfull, y, a, aform2);
      int n2 = impl.pick(2);
      for (int i = 0; i < n2; ++i) {
        DerivPtr form = impl.gen_type(cfull, 2);
        impl.extend(cfull, fresh_name("h"), form->conclusion.subject, form);
      }
      DerivPtr d = impl.gen_subject(cfull, 5);
      const Judgment& j = d->conclusion;
      size_t k = c1.ctx.size();
      std::string z = fresh_name("z");
      auto sub2 = [&](const TermPtr& t) {
        return subst(subst(t, x, t_var(z)), y, t_var(z));
      };
      Judgment out;
      out.form = JForm::Typing;
      out.ctx = c1.ctx;
      out.delta = c1.delta;
      out.ctx.push_back({z, a});
      out.delta.push_back(j.delta[k]);
      CtxGradeVec delta2(j.delta.begin() + k + 2, j.delta.end());
      CtxGradeVec contracted = contr(k, delta2);
      for (size_t i = k + 2; i < j.ctx.size(); ++i) {
        out.ctx.push_back({j.ctx[i].name, sub2(j.ctx[i].type)});
        out.delta.push_back(contracted[i - (k + 2)]);
      }
      out.subject = sub2(j.subject);
      out.type = sub2(j.type);
      out.subject_use = GradeVec(j.subject_use.begin(), j.subject_use.begin() + k);
      out.subject_use.push_back(g_add(j.subject_use[k], j.subject_use[k + 1]));
      out.subject_use.insert(out.subject_use.end(), j.subject_use.begin() + k + 2,
                             j.subject_use.end());
      out.type_use = GradeVec(j.type_use.begin(), j.type_use.begin() + k);
      out.type_use.push_back(g_add(j.type_use[k], j.type_use[k + 1]));
      out.type_use.insert(out.type_use.end(), j.type_use.begin() + k + 2,
                          j.type_use.end());
      std::string err;
      bool ok = recheck_judgment(out, suite_options(s), nullptr, &err);
      record(res, ok, "contraction re-check failed: " + err);
      continue;
    }

    if (kind == 1) {
      // Gamma1, x:A, y:B (x not in B), Gamma2 |- t : C  ~~>  swap x and y.
      DerivPtr aform = impl.gen_type(c1, 2);
      DerivPtr bform0 = impl.gen_type(c1, 2);  // B formed over Gamma1 only
      TermPtr a = aform->conclusion.subject;
      TermPtr b = bform0->conclusion.subject;
      auto cfull = c1;
      std::string x = fresh_name("x");
      impl.extend(cfull, x, a, aform);
      DerivPtr bform = impl.derive_formation(cfull, b);
      std::string y = fresh_name("y");
      impl.extend(cfull, y, b, bform);
      int n2 = impl.pick(2);
      for (int i = 0; i < n2; ++i) {
        DerivPtr form = impl.gen_type(cfull, 2);
        impl.extend(cfull, fresh_name("h"), form->conclusion.subject, form);
      }
      DerivPtr d = impl.gen_subject(cfull, 5);
      const Judgment& j = d->conclusion;
      size_t k = c1.ctx.size();
      Judgment out = j;
      out.ctx[k] = {y, b};
      out.ctx[k + 1] = {x, a};
      // Delta rows: B's formation over Gamma1 (sigma2), then A's padded.
      GradeVec arow = j.delta[k];           // sigma1 over Gamma1
      GradeVec brow_over_g1 = bform0->conclusion.subject_use;
      out.delta[k] = brow_over_g1;
      GradeVec arow_padded = arow;
      arow_padded.push_back(g_zero());
      out.delta[k + 1] = arow_padded;
      CtxGradeVec delta2(j.delta.begin() + k + 2, j.delta.end());
      CtxGradeVec exchanged = exch(k, delta2);
      for (size_t i = k + 2; i < j.ctx.size(); ++i) out.delta[i] = exchanged[i - (k + 2)];
      std::swap(out.subject_use[k], out.subject_use[k + 1]);
      std::swap(out.type_use[k], out.type_use[k + 1]);
      std::string err;
      bool ok = recheck_judgment(out, suite_options(s), nullptr, &err);
      record(res, ok, "exchange re-check failed: " + err);
      continue;
    }

    // Weakening: judgment over Gamma1, Gamma2; insert fresh x : A at k.
    auto cfull = c1;
    int n2 = impl.pick(2);
    for (int i = 0; i < n2; ++i) {
      DerivPtr form = impl.gen_type(cfull, 2);
      impl.extend(cfull, fresh_name("h"), form->conclusion.subject, form);
    }
    DerivPtr d = impl.gen_subject(cfull, 5);
    const Judgment& j = d->conclusion;
    size_t k = c1.ctx.size();
    DerivPtr aform = impl.gen_type(c1, 2);
    TermPtr a = aform->conclusion.subject;
    std::string x = fresh_name("w");
    Judgment out;
    out.form = JForm::Typing;
    out.ctx = Context(j.ctx.begin(), j.ctx.begin() + k);
    out.delta = CtxGradeVec(j.delta.begin(), j.delta.begin() + k);
    out.ctx.push_back({x, a});
    out.delta.push_back(aform->conclusion.subject_use);
    CtxGradeVec delta2(j.delta.begin() + k, j.delta.end());
    CtxGradeVec inserted = ins(k, g_zero(), delta2);
    for (size_t i = k; i < j.ctx.size(); ++i) {
      out.ctx.push_back(j.ctx[i]);
      out.delta.push_back(inserted[i - k]);
    }
    out.subject = j.subject;
    out.type = j.type;
    out.subject_use = GradeVec(j.subject_use.begin(), j.subject_use.begin() + k);
    out.subject_use.push_back(g_zero());
    out.subject_use.insert(out.subject_use.end(), j.subject_use.begin() + k,
                           j.subject_use.end());
    out.type_use = GradeVec(j.type_use.begin(), j.type_use.begin() + k);
    out.type_use.push_back(g_zero());
    out.type_use.insert(out.type_use.end(), j.type_use.begin() + k, j.type_use.end());
    std::string err;
    bool ok = recheck_judgment(out, suite_options(s), nullptr, &err);
    record(res, ok, "weakening re-check failed: " + err);
  }
  return res;
}

}  // namespace gerty
