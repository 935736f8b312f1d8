#include "gerty/vectors.hpp"

namespace gerty {

GradeVec zero_vec(size_t n) { return GradeVec(n, g_zero()); }

GradeVec vec_add(const GradeVec& a, const GradeVec& b) {
  GradeVec out;
  size_t n = std::max(a.size(), b.size());
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    GradePtr x = i < a.size() ? a[i] : g_zero();
    GradePtr y = i < b.size() ? b[i] : g_zero();
    // Keep vector entries in normal form so closed grades stay small.
    out.push_back(normalize_grade(g_add(x, y)));
  }
  return out;
}

GradeVec scalar_mul(const GradePtr& s, const GradeVec& v) {
  GradeVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(normalize_grade(g_mul(s, x)));
  return out;
}

CtxGradeVec ctx_scale(const GradeVec& g, const GradeVec& v) {
  CtxGradeVec out;
  out.reserve(g.size());
  for (const auto& s : g) out.push_back(scalar_mul(s, v));
  return out;
}

CtxGradeVec ctx_add(const CtxGradeVec& a, const CtxGradeVec& b) {
  CtxGradeVec out;
  size_t n = std::max(a.size(), b.size());
  out.reserve(n);
  static const GradeVec empty;
  for (size_t i = 0; i < n; ++i)
    out.push_back(vec_add(i < a.size() ? a[i] : empty, i < b.size() ? b[i] : empty));
  return out;
}

CtxGradeVec discard(const CtxGradeVec& d, size_t i) {
  CtxGradeVec out;
  out.reserve(d.size());
  for (const auto& row : d) {
    if (row.size() <= i) {
      out.push_back(row);
      continue;
    }
    GradeVec r;
    r.reserve(row.size() - 1);
    for (size_t k = 0; k < row.size(); ++k)
      if (k != i) r.push_back(row[k]);
    out.push_back(std::move(r));
  }
  return out;
}

GradeVec choose(const CtxGradeVec& d, size_t i) {
  GradeVec out;
  for (const auto& row : d)
    if (row.size() > i) out.push_back(row[i]);
  return out;
}

CtxGradeVec contr(size_t pi, const CtxGradeVec& d) {
  // Rowwise application of  d \ (pi+1) + (d / (pi+1)) * (0^pi, 1),
  // keeping rows too short for the chosen column untouched.
  CtxGradeVec out;
  out.reserve(d.size());
  for (const auto& row : d) {
    if (row.size() <= pi + 1) {
      out.push_back(row);
      continue;
    }
    GradeVec unit = zero_vec(pi);
    unit.push_back(g_one());
    CtxGradeVec dropped = discard({row}, pi + 1);
    CtxGradeVec scaled = ctx_scale(choose({row}, pi + 1), unit);
    out.push_back(ctx_add(dropped, scaled)[0]);
  }
  return out;
}

CtxGradeVec exch(size_t pi, const CtxGradeVec& d) {
  CtxGradeVec out;
  out.reserve(d.size());
  for (const auto& row : d) {
    if (row.size() == pi + 1)
      throw GertyError(ErrorCode::MalformedExchange,
                       "cannot exchange at index " + std::to_string(pi) +
                           ": a grade vector ends between the swapped positions");
    if (row.size() <= pi + 1) {
      out.push_back(row);
      continue;
    }
    GradeVec r = row;
    std::swap(r[pi], r[pi + 1]);
    out.push_back(std::move(r));
  }
  return out;
}

CtxGradeVec ins(size_t pi, const GradePtr& s, const CtxGradeVec& d) {
  CtxGradeVec out;
  out.reserve(d.size());
  for (const auto& row : d) {
    if (row.size() < pi) {
      out.push_back(row);
      continue;
    }
    GradeVec r;
    r.reserve(row.size() + 1);
    for (size_t k = 0; k < pi; ++k) r.push_back(row[k]);
    r.push_back(s);
    for (size_t k = pi; k < row.size(); ++k) r.push_back(row[k]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GradeValue> eval_vec(const GradeVec& v, const SemiringSpec& s) {
  std::vector<GradeValue> out;
  out.reserve(v.size());
  for (const auto& g : v) out.push_back(eval_grade(g, s));
  return out;
}

bool vec_equal(const GradeVec& a, const GradeVec& b, const SemiringSpec& s) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (eval_grade(a[i], s) != eval_grade(b[i], s)) return false;
  return true;
}

bool ctx_equal(const CtxGradeVec& a, const CtxGradeVec& b, const SemiringSpec& s) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!vec_equal(a[i], b[i], s)) return false;
  return true;
}

std::string show_vec(const GradeVec& v, const SemiringSpec& s) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += s.show(eval_grade(v[i], s));
  }
  return out + ")";
}

std::string show_ctx(const CtxGradeVec& d, const SemiringSpec& s) {
  std::string out = "(";
  for (size_t i = 0; i < d.size(); ++i) {
    if (i) out += ", ";
    out += show_vec(d[i], s);
  }
  return out + ")";
}

}  // namespace gerty
