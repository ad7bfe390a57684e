#include "natree/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace natree {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slashes = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '/') {
      ++slashes;
      continue;
    }
    if (c == '-') {
      // leading sign of numerator or denominator only
      if (i != 0 && s[i - 1] != '/') throw std::invalid_argument("bad rational literal: " + s);
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("bad rational literal: " + s);
  }
  if (slashes > 1) throw std::invalid_argument("bad rational literal: " + s);
  mpq_class q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  Rat acc = 0;
  Rat tmp;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0 || sgn(b[i]) == 0) continue;
    tmp = a[i] * b[i];
    acc += tmp;
  }
  return acc;
}

Rat l1_norm(const RatVec& v) {
  Rat acc = 0;
  for (const auto& x : v) acc += abs(x);
  return acc;
}

bool is_zero_vec(const RatVec& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

RatVec scaled(const RatVec& v, const Rat& s) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
  return out;
}

RatVec vec_sum(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_sum: dimension mismatch");
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RatVec vec_diff(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_diff: dimension mismatch");
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RatVec zeros(std::size_t n) { return RatVec(n, Rat(0)); }

int lex_compare(const RatVec& a, const RatVec& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

RatVec unit_leading(RatVec v) {
  for (const auto& x : v) {
    if (sgn(x) != 0) {
      Rat s = abs(x);
      for (auto& y : v) y /= s;
      return v;
    }
  }
  return v;  // zero vector
}

RatVec primitive(RatVec v) {
  mpz_class den_lcm = 1;
  for (const auto& x : v) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
  mpz_class num_gcd = 0;
  std::vector<mpz_class> ints(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    mpz_class scaled_num = v[i].get_num() * (den_lcm / v[i].get_den());
    ints[i] = scaled_num;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled_num.get_mpz_t());
  }
  if (num_gcd == 0) return zeros(v.size());
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(ints[i] / num_gcd);
  return out;
}

std::string vec_str(const RatVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << rat_str(v[i]);
  }
  os << ')';
  return os.str();
}

}  // namespace natree
