#pragma once
// Exact rational scalars (GMP-backed) and small dense vector helpers.
// All arithmetic in this library is exact; there is no floating point anywhere.

#include <gmpxx.h>

#include <string>
#include <vector>

namespace natree {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

/// Canonical rational from an integer pair (reduced, positive denominator).
inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Parse "p" or "p/q" exactly. Throws std::invalid_argument on malformed input
/// or zero denominator.
Rat parse_rat(const std::string& s);

/// Canonical string form: "p" when the denominator is 1, else "p/q".
std::string rat_str(const Rat& r);

Rat dot(const RatVec& a, const RatVec& b);
Rat l1_norm(const RatVec& v);  // sum of absolute values
bool is_zero_vec(const RatVec& v);

RatVec scaled(const RatVec& v, const Rat& s);
RatVec vec_sum(const RatVec& a, const RatVec& b);
RatVec vec_diff(const RatVec& a, const RatVec& b);
RatVec zeros(std::size_t n);

/// -1 / 0 / +1 componentwise lexicographic comparison.
int lex_compare(const RatVec& a, const RatVec& b);

/// Positive scaling so the first nonzero coordinate becomes +1 or -1.
RatVec unit_leading(RatVec v);

/// Positive scaling to a coprime integer vector (direction preserved).
RatVec primitive(RatVec v);

std::string vec_str(const RatVec& v);

}  // namespace natree
