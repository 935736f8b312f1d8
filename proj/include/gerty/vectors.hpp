#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gerty/grade.hpp"

namespace gerty {

// Grade vectors (sigma) and context grade vectors (Delta). In a judgment
// over a context of length n, a well-sized Delta has n rows and row i has
// length i; operations here are nonetheless total on ragged inputs, with
// rows too short to reach the operated index passed through untouched.
using GradeVec = std::vector<GradePtr>;
using CtxGradeVec = std::vector<GradeVec>;

GradeVec zero_vec(size_t n);

// Pointwise semiring addition; the shorter vector is right-padded with
// zeroes.
GradeVec vec_add(const GradeVec& a, const GradeVec& b);

// Pointwise s * v.
GradeVec scalar_mul(const GradePtr& s, const GradeVec& v);

// result[i] = g[i] * v  (scaling v by each element of g).
CtxGradeVec ctx_scale(const GradeVec& g, const GradeVec& v);

// Rowwise vec_add; the shorter of the two row lists is padded with empty
// rows.
CtxGradeVec ctx_add(const CtxGradeVec& a, const CtxGradeVec& b);

// Removes the element at index i from every row long enough to have one.
CtxGradeVec discard(const CtxGradeVec& d, size_t i);

// Collects the element at index i from every row long enough to have one.
GradeVec choose(const CtxGradeVec& d, size_t i);

// contr(pi; d) = d \ (pi+1)  +  (d / (pi+1)) * (0^pi, 1)
CtxGradeVec contr(size_t pi, const CtxGradeVec& d);

// Swaps the elements at indices pi and pi+1 in every row of length >
// pi+1. A row of length exactly pi+1 would end between the swapped pair;
// that is a MalformedExchange error.
CtxGradeVec exch(size_t pi, const CtxGradeVec& d);

// Inserts s at index pi in every row of length >= pi, shifting later
// elements one index later.
CtxGradeVec ins(size_t pi, const GradePtr& s, const CtxGradeVec& d);

// Evaluated forms, for value-level comparison and printing.
std::vector<GradeValue> eval_vec(const GradeVec& v, const SemiringSpec& s);
bool vec_equal(const GradeVec& a, const GradeVec& b, const SemiringSpec& s);
bool ctx_equal(const CtxGradeVec& a, const CtxGradeVec& b, const SemiringSpec& s);

// (0,1,0) — bare carrier values, no spaces.
std::string show_vec(const GradeVec& v, const SemiringSpec& s);
// ((), (1), (1,0)) — rows separated by comma-space.
std::string show_ctx(const CtxGradeVec& d, const SemiringSpec& s);

}  // namespace gerty
