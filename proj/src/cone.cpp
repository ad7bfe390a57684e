#include "natree/cone.hpp"

#include <algorithm>

namespace natree {

BidAskMatrix BidAskMatrix::uniform(int d, const Rat& rate) {
  BidAskMatrix m;
  m.d = d;
  m.pi.assign(d, RatVec(d, rate));
  for (int i = 0; i < d; ++i) m.pi[i][i] = 1;
  return m;
}

void BidAskMatrix::validate() const {
  if (d < 2) throw std::invalid_argument("bid-ask matrix: need at least two assets");
  if (static_cast<int>(pi.size()) != d) throw std::invalid_argument("bid-ask matrix: row count");
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(pi[i].size()) != d) throw std::invalid_argument("bid-ask matrix: row length");
    if (pi[i][i] != 1) throw std::invalid_argument("bid-ask matrix: diagonal must be 1");
    for (int j = 0; j < d; ++j)
      if (i != j && sgn(pi[i][j]) <= 0)
        throw std::invalid_argument("bid-ask matrix: entries must be positive");
  }
}

PolyCone PolyCone::from_generators(int dim, std::vector<RatVec> gens) {
  PolyCone c;
  c.dim = dim;
  c.generators = std::move(gens);
  return c;
}

PolyCone PolyCone::from_normals(int dim, std::vector<RatVec> normals) {
  PolyCone c;
  c.dim = dim;
  c.normals = std::move(normals);
  return c;
}

PolyCone solvency_cone(const BidAskMatrix& pi) {
  pi.validate();
  const int d = pi.d;
  std::vector<RatVec> gens;
  gens.reserve(d + d * (d - 1));
  for (int i = 0; i < d; ++i) {
    RatVec e = zeros(d);
    e[i] = 1;
    gens.push_back(std::move(e));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      RatVec g = zeros(d);
      g[i] = pi.at(i, j);
      g[j] = -1;
      gens.push_back(std::move(g));
    }
  return PolyCone::from_generators(d, std::move(gens));
}

PolyCone dual_cone_hrep(const BidAskMatrix& pi) {
  pi.validate();
  const int d = pi.d;
  std::vector<RatVec> normals;
  normals.reserve(d + d * (d - 1));
  for (int i = 0; i < d; ++i) {
    RatVec e = zeros(d);
    e[i] = 1;
    normals.push_back(std::move(e));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      RatVec n = zeros(d);
      n[i] = pi.at(i, j);
      n[j] = -1;
      normals.push_back(std::move(n));
    }
  return PolyCone::from_normals(d, std::move(normals));
}

// ---------------------------------------------------------------------------
// exact Gaussian elimination helpers

int rank_of(const std::vector<RatVec>& rows, int dim) {
  RatMat m;
  m.reserve(rows.size());
  for (const auto& r : rows) m.push_back(r);
  int rank = 0;
  for (int col = 0; col < dim && rank < static_cast<int>(m.size()); ++col) {
    int p = -1;
    for (int i = rank; i < static_cast<int>(m.size()); ++i)
      if (sgn(m[i][col]) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[rank], m[p]);
    for (int i = rank + 1; i < static_cast<int>(m.size()); ++i) {
      if (sgn(m[i][col]) == 0) continue;
      Rat f = m[i][col] / m[rank][col];
      for (int j = col; j < dim; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::optional<RatVec> null_vector(const std::vector<RatVec>& rows, int dim) {
  // Reduced row echelon form, then read one free-variable solution.
  RatMat m;
  for (const auto& r : rows) m.push_back(r);
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < dim && rank < static_cast<int>(m.size()); ++col) {
    int p = -1;
    for (int i = rank; i < static_cast<int>(m.size()); ++i)
      if (sgn(m[i][col]) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[rank], m[p]);
    Rat inv = 1 / m[rank][col];
    for (int j = col; j < dim; ++j) m[rank][j] *= inv;
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (i == rank || sgn(m[i][col]) == 0) continue;
      Rat f = m[i][col];
      for (int j = col; j < dim; ++j) m[i][j] -= f * m[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank >= dim) return std::nullopt;
  std::vector<char> is_pivot(dim, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  int free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  RatVec v = zeros(dim);
  v[free_col] = 1;
  for (int i = 0; i < rank; ++i) v[pivot_col[i]] = -m[i][free_col];
  return v;
}

namespace {

RatMat invert(const RatMat& a) {
  const int n = static_cast<int>(a.size());
  RatMat m = a, inv(n, RatVec(n, Rat(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int p = -1;
    for (int i = col; i < n; ++i)
      if (sgn(m[i][col]) != 0) {
        p = i;
        break;
      }
    if (p < 0) throw std::logic_error("invert: singular matrix");
    std::swap(m[col], m[p]);
    std::swap(inv[col], inv[p]);
    Rat s = 1 / m[col][col];
    for (int j = 0; j < n; ++j) {
      m[col][j] *= s;
      inv[col][j] *= s;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || sgn(m[i][col]) == 0) continue;
      Rat f = m[i][col];
      for (int j = 0; j < n; ++j) {
        m[i][j] -= f * m[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

struct RayRec {
  RatVec v;
  std::vector<char> tight;  // indexed by normal position; valid for processed normals
};

}  // namespace

std::vector<RatVec> extreme_rays(const PolyCone& cone) {
  if (!cone.has_hrep()) throw std::invalid_argument("extreme_rays: H-representation required");
  const auto& normals = *cone.normals;
  const int d = cone.dim;
  if (auto line = null_vector(normals, d)) throw NonPointedCone(*line);

  // greedy independent subset, input order
  std::vector<int> base;
  {
    std::vector<RatVec> picked;
    for (int k = 0; k < static_cast<int>(normals.size()) && static_cast<int>(base.size()) < d; ++k) {
      picked.push_back(normals[k]);
      if (rank_of(picked, d) == static_cast<int>(picked.size()))
        base.push_back(k);
      else
        picked.pop_back();
    }
  }
  RatMat basemat;
  for (int k : base) basemat.push_back(normals[k]);
  RatMat binv = invert(basemat);

  std::vector<char> in_base(normals.size(), 0);
  for (int k : base) in_base[k] = 1;
  std::vector<int> processed = base;

  auto make_ray = [&](RatVec v) {
    RayRec r;
    r.v = unit_leading(std::move(v));
    r.tight.assign(normals.size(), 0);
    for (int k : processed) r.tight[k] = sgn(dot(normals[k], r.v)) == 0;
    return r;
  };

  std::vector<RayRec> rays;
  for (int j = 0; j < d; ++j) {
    RatVec col(d);
    for (int i = 0; i < d; ++i) col[i] = binv[i][j];
    rays.push_back(make_ray(std::move(col)));
  }

  auto adjacent = [&](const RayRec& p, const RayRec& q) {
    std::vector<RatVec> tight_rows;
    for (int k : processed)
      if (p.tight[k] && q.tight[k]) tight_rows.push_back(normals[k]);
    return rank_of(tight_rows, d) == d - 2;
  };

  for (int k = 0; k < static_cast<int>(normals.size()); ++k) {
    if (in_base[k]) continue;
    std::vector<Rat> s(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) s[i] = dot(normals[k], rays[i].v);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (sgn(s[i]) > 0) pos.push_back(i);
      if (sgn(s[i]) < 0) neg.push_back(i);
    }
    if (!neg.empty()) {
      std::vector<RayRec> combos;
      for (std::size_t ip : pos)
        for (std::size_t in : neg) {
          if (!adjacent(rays[ip], rays[in])) continue;
          RatVec v(d);
          for (int c = 0; c < d; ++c) v[c] = s[ip] * rays[in].v[c] - s[in] * rays[ip].v[c];
          combos.push_back(make_ray(std::move(v)));
        }
      std::vector<RayRec> next;
      next.reserve(rays.size() - neg.size() + combos.size());
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (sgn(s[i]) >= 0) next.push_back(std::move(rays[i]));
      for (auto& r : combos) next.push_back(std::move(r));
      rays = std::move(next);
    }
    processed.push_back(k);
    for (auto& r : rays) r.tight[k] = sgn(dot(normals[k], r.v)) == 0;
  }

  std::vector<RatVec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  std::sort(out.begin(), out.end(), [](const RatVec& a, const RatVec& b) { return lex_compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const RatVec& a, const RatVec& b) { return lex_compare(a, b) == 0; }),
            out.end());
  return out;
}

bool member_cone(const RatVec& x, const PolyCone& cone) {
  if (static_cast<int>(x.size()) != cone.dim) throw std::invalid_argument("member_cone: dimension mismatch");
  if (cone.has_hrep()) {
    for (const auto& n : *cone.normals)
      if (sgn(dot(n, x)) < 0) return false;
    return true;
  }
  if (!cone.has_vrep()) throw std::invalid_argument("member_cone: cone has no representation");
  const auto& gens = *cone.generators;
  LinearProgram lp;
  lp.objective = Objective::Minimize;
  lp.cost = zeros(gens.size());
  lp.bounds.assign(gens.size(), VarBound::NonNeg);
  lp.rows.assign(cone.dim, zeros(gens.size()));
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (int i = 0; i < cone.dim; ++i) lp.rows[i][g] = gens[g][i];
  lp.senses.assign(cone.dim, Sense::Eq);
  lp.rhs = x;
  return lp_feasible(lp).feasible;
}

Rat interior_margin(const RatVec& y, const PolyCone& cone) {
  if (!cone.has_hrep()) throw std::invalid_argument("interior_margin: H-representation required");
  if (static_cast<int>(y.size()) != cone.dim) throw std::invalid_argument("interior_margin: dimension mismatch");
  if (is_zero_vec(y)) throw std::invalid_argument("interior_margin: zero vector");
  const Rat norm = l1_norm(y);
  bool first = true;
  Rat best;
  for (const auto& n : *cone.normals) {
    Rat v = dot(n, y) / norm;
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  if (first) throw std::invalid_argument("interior_margin: cone has no normals");
  return best;
}

MarginOpt max_interior_margin(const PolyCone& cone) {
  if (!cone.has_hrep()) throw std::invalid_argument("max_interior_margin: H-representation required");
  const int d = cone.dim;
  const auto& normals = *cone.normals;
  // variables: y (free, d entries), margin (free)
  LinearProgram lp;
  lp.objective = Objective::Maximize;
  lp.cost = zeros(d + 1);
  lp.cost[d] = 1;
  lp.bounds.assign(d + 1, VarBound::Free);
  for (const auto& n : normals) {
    RatVec row(d + 1);
    for (int i = 0; i < d; ++i) row[i] = n[i];
    row[d] = -1;
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(Sense::Ge);
    lp.rhs.push_back(0);
  }
  RatVec one(d + 1, Rat(1));
  one[d] = 0;
  lp.rows.push_back(std::move(one));
  lp.senses.push_back(Sense::Eq);
  lp.rhs.push_back(1);

  LpOutcome o = lp_solve(lp);
  if (o.status == LpStatus::Unbounded)
    throw std::invalid_argument("max_interior_margin: unbounded margin (cone slice is unbounded)");
  if (o.status == LpStatus::Infeasible) throw std::logic_error("max_interior_margin: margin LP infeasible");
  MarginOpt m;
  m.margin = o.value;
  m.point.assign(o.point.begin(), o.point.begin() + d);
  return m;
}

bool efficient_friction(const BidAskMatrix& pi) {
  pi.validate();
  for (int i = 0; i < pi.d; ++i)
    for (int j = 0; j < pi.d; ++j) {
      if (i == j) continue;
      if (pi.at(i, j) * pi.at(j, i) <= 1) return false;
    }
  return true;
}

Rat roundtrip_bound(const BidAskMatrix& pi) {
  pi.validate();
  Rat best = 0;
  for (int i = 0; i < pi.d; ++i)
    for (int j = 0; j < pi.d; ++j) {
      if (i == j) continue;
      Rat p = pi.at(i, j) * pi.at(j, i);
      if (p > best) best = p;
    }
  return best;
}

FrictionDecomposition frictionless_decompose(const BidAskMatrix& pi, const RatVec& quote) {
  pi.validate();
  if (static_cast<int>(quote.size()) != pi.d)
    throw std::invalid_argument("frictionless_decompose: quote dimension mismatch");
  for (const auto& s : quote)
    if (sgn(s) <= 0) throw std::invalid_argument("frictionless_decompose: quote must be strictly positive");
  FrictionDecomposition f;
  f.quote = scaled(quote, 1 / quote[0]);
  f.lambda.assign(pi.d, RatVec(pi.d, Rat(0)));
  for (int i = 0; i < pi.d; ++i)
    for (int j = 0; j < pi.d; ++j) {
      if (i == j) continue;
      f.lambda[i][j] = pi.at(i, j) * f.quote[i] / f.quote[j] - 1;
      if (sgn(f.lambda[i][j]) < 0)
        throw std::invalid_argument("frictionless_decompose: quote not consistent (lambda[" +
                                    std::to_string(i) + "][" + std::to_string(j) + "] < 0)");
    }
  return f;
}

RatVec pick_interior_point(const PolyCone& cone) {
  MarginOpt m = max_interior_margin(cone);
  if (sgn(m.margin) <= 0) throw EmptyInterior(m.margin, m.point);
  if (sgn(m.point[0]) > 0) return scaled(m.point, 1 / m.point[0]);
  return primitive(m.point);
}

std::vector<std::string> solvency_cone_defects(const PolyCone& vrep) {
  std::vector<std::string> defects;
  if (!vrep.has_vrep()) {
    defects.push_back("generator representation required");
    return defects;
  }
  const int d = vrep.dim;
  for (const auto& g : *vrep.generators)
    if (static_cast<int>(g.size()) != d) {
      defects.push_back("generator dimension mismatch");
      return defects;
    }
  for (int i = 0; i < d; ++i) {
    RatVec e = zeros(d);
    e[i] = 1;
    if (!member_cone(e, vrep))
      defects.push_back("basis vector " + std::to_string(i) + " is not solvent");
  }
  PolyCone dual = PolyCone::from_normals(d, *vrep.generators);
  try {
    for (const auto& r : extreme_rays(dual))
      for (int i = 0; i < d; ++i)
        if (sgn(r[i]) <= 0) {
          defects.push_back("dual ray " + vec_str(r) + " is not strictly positive");
          break;
        }
  } catch (const NonPointedCone& e) {
    defects.push_back(std::string("cone does not span the space: ") + e.what());
  }
  try {
    if (sgn(max_interior_margin(dual).margin) <= 0)
      defects.push_back("dual cone has empty interior (cone is not pointed)");
  } catch (const std::invalid_argument&) {
    defects.push_back("dual margin is unbounded (cone is degenerate)");
  }
  return defects;
}

PolyCone cone_intersection(const std::vector<PolyCone>& cones) {
  if (cones.empty()) throw std::invalid_argument("cone_intersection: empty input");
  const int d = cones.front().dim;
  std::vector<RatVec> normals;
  for (const auto& c : cones) {
    if (c.dim != d) throw std::invalid_argument("cone_intersection: dimension mismatch");
    if (!c.has_hrep()) throw std::invalid_argument("cone_intersection: H-representation required");
    for (const auto& n : *c.normals) {
      bool dup = false;
      for (const auto& m : normals)
        if (lex_compare(n, m) == 0) {
          dup = true;
          break;
        }
      if (!dup) normals.push_back(n);
    }
  }
  return PolyCone::from_normals(d, std::move(normals));
}

}  // namespace natree
