#include "natree/na2.hpp"

#include <algorithm>

namespace natree {

namespace {

// All extreme rays of the duals of the reachable successors' cones.
std::vector<RatVec> successor_dual_rays(const MarketInstance& inst, int node) {
  std::vector<RatVec> rays;
  for (int b : inst.reachable[node]) {
    const int c = inst.tree.nodes[node].children[b];
    for (const auto& r : *inst.geom(c).Kstar.generators) {
      bool dup = false;
      for (const auto& seen : rays)
        if (lex_compare(seen, r) == 0) {
          dup = true;
          break;
        }
      if (!dup) rays.push_back(r);
    }
  }
  return rays;
}

bool in_conic_hull(const std::vector<RatVec>& gens, const RatVec& x) {
  LinearProgram lp;
  lp.objective = Objective::Minimize;
  lp.cost = zeros(gens.size());
  lp.bounds.assign(gens.size(), VarBound::NonNeg);
  lp.rows.assign(x.size(), zeros(gens.size()));
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t i = 0; i < x.size(); ++i) lp.rows[i][g] = gens[g][i];
  lp.senses.assign(x.size(), Sense::Eq);
  lp.rhs = x;
  return lp_feasible(lp).feasible;
}

// Find zeta with <g, zeta> >= 0 for all g and <r, zeta> = -1.
RatVec separate(const std::vector<RatVec>& gens, const RatVec& r) {
  const int d = static_cast<int>(r.size());
  LinearProgram lp;
  lp.objective = Objective::Minimize;
  lp.cost = zeros(d);
  lp.bounds.assign(d, VarBound::Free);
  for (const auto& g : gens) {
    lp.rows.push_back(g);
    lp.senses.push_back(Sense::Ge);
    lp.rhs.push_back(0);
  }
  lp.rows.push_back(r);
  lp.senses.push_back(Sense::Eq);
  lp.rhs.push_back(-1);
  Feasibility f = lp_feasible(lp);
  if (!f.feasible) throw std::logic_error("na2: separation LP infeasible for a non-member ray");
  return f.point;
}

}  // namespace

Na2Verdict na2_local(const MarketInstance& inst, int node) {
  if (inst.tree.is_terminal(node))
    throw std::invalid_argument("na2_local: terminal node " + inst.tree.path_str(node));
  if (inst.is_polar(node)) throw PolarNodeError(inst.tree.path_str(node));

  const auto dual_rays = *inst.geom(node).Kstar.generators;
  const auto gens = successor_dual_rays(inst, node);
  for (const auto& r : dual_rays) {
    if (in_conic_hull(gens, r)) continue;
    ArbitrageCertificate cert;
    cert.time = inst.tree.nodes[node].time;
    cert.node = node;
    cert.separating_ray = r;
    cert.zeta = primitive(separate(gens, r));
    Na2Verdict v;
    v.holds = false;
    v.certificate = std::move(cert);
    return v;
  }
  Na2Verdict v;
  v.holds = true;
  return v;
}

GlobalVerdict na2_global(const MarketInstance& inst) {
  GlobalVerdict g;
  g.holds = true;
  for (int v = 0; v < inst.tree.size(); ++v) {
    if (inst.tree.is_terminal(v) || inst.is_polar(v)) continue;
    Na2Verdict local = na2_local(inst, v);
    if (!local.holds) {
      g.holds = false;
      g.failing.push_back(*local.certificate);
    }
  }
  return g;
}

bool validate_certificate(const MarketInstance& inst, const ArbitrageCertificate& cert) {
  const int node = cert.node;
  if (node < 0 || node >= inst.tree.size()) return false;
  if (inst.tree.is_terminal(node) || inst.is_polar(node)) return false;
  if (cert.time != inst.tree.nodes[node].time) return false;
  if (static_cast<int>(cert.zeta.size()) != inst.d) return false;
  // zeta lies in the support cone: every row of the intersection H-rep is >= 0
  for (const auto& n : *support_cone(inst, node).normals)
    if (sgn(dot(n, cert.zeta)) < 0) return false;
  // separating ray is one of the node's dual extreme rays
  bool found = false;
  for (const auto& r : *inst.geom(node).Kstar.generators)
    if (lex_compare(r, cert.separating_ray) == 0) {
      found = true;
      break;
    }
  if (!found) return false;
  if (sgn(dot(cert.separating_ray, cert.zeta)) >= 0) return false;
  // and zeta is outside the node's cone (implied by the ray, checked directly)
  return !member_cone(cert.zeta, inst.geom(node).K);
}

Strategy arbitrage_to_global(const MarketInstance& inst, const ArbitrageCertificate& cert) {
  if (!validate_certificate(inst, cert))
    throw std::invalid_argument("arbitrage_to_global: invalid certificate");
  Strategy s;
  RatVec neg = scaled(cert.zeta, Rat(-1));
  for (int b : inst.reachable[cert.node]) {
    const int c = inst.tree.nodes[cert.node].children[b];
    s.xi[c] = neg;
  }
  return s;
}

bool verify_global_certificate(const MarketInstance& inst, const RatVec& zeta,
                               const Strategy& xi, int t, int node) {
  for (const auto& [v, inc] : xi.xi) {
    if (static_cast<int>(inc.size()) != inst.d)
      throw std::invalid_argument("verify_global_certificate: increment dimension mismatch");
    if (!member_cone(scaled(inc, Rat(-1)), inst.geom(v).K))
      throw std::invalid_argument("verify_global_certificate: inadmissible increment at node " +
                                  inst.tree.path_str(v));
  }
  if (inst.tree.nodes[node].time != t)
    throw std::invalid_argument("verify_global_certificate: node/time mismatch");

  if (member_cone(zeta, inst.geom(node).K)) return false;

  // accumulate zeta + sum of increments strictly after t down to each leaf
  std::vector<int> stack{node};
  std::vector<RatVec> acc{zeta};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    RatVec pos = std::move(acc.back());
    acc.pop_back();
    if (inst.tree.is_terminal(v)) {
      if (!inst.is_polar(v) && !member_cone(pos, inst.geom(v).K)) return false;
      continue;
    }
    for (int c : inst.tree.nodes[v].children) {
      RatVec next = pos;
      auto it = xi.xi.find(c);
      if (it != xi.xi.end()) next = vec_sum(next, it->second);
      stack.push_back(c);
      acc.push_back(std::move(next));
    }
  }
  return true;
}

}  // namespace natree
