#include "natree/cps.hpp"

#include <algorithm>

namespace natree {

namespace {

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    if (!std::binary_search(b.begin(), b.end(), x)) return false;
  return true;
}

// The decomposition LP in normalized units: one nonnegative weight per
// successor dual ray plus one free interior weight on the summed deep
// interior directions, meeting the d equality rows sum = y/|y|_1.
OneStepOutcome solve_one_step(const MarketInstance& inst, int node, const RatVec& y) {
  const auto& tree = inst.tree;
  const auto& children = tree.nodes[node].children;
  const auto& reach = inst.reachable[node];
  const int d = inst.d;

  struct Col {
    int child;      // node id
    const RatVec* ray;
  };
  std::vector<Col> cols;
  RatVec udir = zeros(d);  // sum of per-successor interior points
  std::vector<std::pair<int, const RatVec*>> interior;
  for (int b : reach) {
    const int c = children[b];
    for (const auto& r : *inst.geom(c).Kstar.generators) cols.push_back({c, &r});
    interior.emplace_back(c, &inst.geom(c).interior);
    udir = vec_sum(udir, inst.geom(c).interior);
  }

  const Rat norm = l1_norm(y);
  RatVec yhat = scaled(y, 1 / norm);

  LinearProgram lp;
  lp.objective = Objective::Maximize;
  lp.cost = zeros(cols.size() + 1);
  lp.cost[cols.size()] = 1;
  lp.bounds.assign(cols.size(), VarBound::NonNeg);
  lp.bounds.push_back(VarBound::Free);
  lp.rows.assign(d, zeros(cols.size() + 1));
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (int i = 0; i < d; ++i) lp.rows[i][k] = (*cols[k].ray)[i];
  for (int i = 0; i < d; ++i) lp.rows[i][cols.size()] = udir[i];
  lp.senses.assign(d, Sense::Eq);
  lp.rhs = yhat;

  LpOutcome o = lp_solve(lp);
  OneStepOutcome out;
  if (o.status == LpStatus::Infeasible) {
    RatVec sep = scaled(o.farkas, Rat(-1));
    out.extended = false;
    out.separator = primitive(std::move(sep));
    return out;
  }
  if (o.status != LpStatus::Optimal) throw std::logic_error("one_step: margin LP unbounded");
  out.margin = o.value;
  if (sgn(o.value) <= 0) {
    out.extended = false;
    return out;
  }

  // w per reachable child, in original units
  std::map<int, RatVec> w;
  for (const auto& [c, u] : interior) w[c] = scaled(*u, o.value);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (sgn(o.point[k]) == 0) continue;
    RatVec& acc = w[cols[k].child];
    for (int i = 0; i < d; ++i) acc[i] += o.point[k] * (*cols[k].ray)[i];
  }
  out.extended = true;
  out.kernel = zeros(children.size());
  for (int b : reach) {
    const int c = children[b];
    RatVec wc = scaled(w[c], norm);
    Rat qc = wc[0] / y[0];
    out.kernel[b] = qc;
    out.z[c] = scaled(wc, 1 / qc);
  }
  return out;
}

}  // namespace

OneStepOutcome one_step_extend(const MarketInstance& inst, int node, const RatVec& y,
                               const std::vector<int>& mandatory_support) {
  if (inst.tree.is_terminal(node))
    throw std::invalid_argument("one_step_extend: terminal node " + inst.tree.path_str(node));
  if (sgn(interior_margin(y, inst.geom(node).Kstar)) <= 0)
    throw std::invalid_argument("one_step_extend: y is not strictly interior at node " +
                                inst.tree.path_str(node));
  if (!subset_of(mandatory_support, inst.reachable[node]))
    throw std::invalid_argument("one_step_extend: mandatory support exceeds the reachable set");
  return solve_one_step(inst, node, y);
}

bool theta_membership(const MarketInstance& inst, int node, const RatVec& p_kernel,
                      const RatVec& z) {
  (void)p_kernel;  // the extension always carries the full reachable support
  if (inst.tree.is_terminal(node)) return false;
  if (is_zero_vec(z)) return false;
  return solve_one_step(inst, node, z).extended;
}

PriceSystem build_pce(const MarketInstance& inst, const ExtensionRequest& req) {
  const auto& tree = inst.tree;
  if (req.time < 0 || req.time >= tree.horizon)
    throw std::invalid_argument("build_pce: start time out of range");
  if (static_cast<int>(req.P.size()) != tree.size())
    throw std::invalid_argument("build_pce: measure must cover every node");
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_terminal(v)) continue;
    if (!kernel_in_hull(inst, v, req.P[v]))
      throw std::invalid_argument("build_pce: P kernel outside the model family at node " +
                                  tree.path_str(v));
  }
  for (int v : tree.nodes_at(req.time)) {
    if (inst.is_polar(v)) continue;
    auto it = req.Y.find(v);
    if (it == req.Y.end())
      throw std::invalid_argument("build_pce: Y missing at non-polar node " + tree.path_str(v));
    if (sgn(interior_margin(it->second, inst.geom(v).Kstar)) <= 0)
      throw std::invalid_argument("build_pce: Y not strictly interior at node " + tree.path_str(v));
  }

  PriceSystem ps;
  ps.start_time = req.time;
  ps.q = req.P;
  ps.z.assign(tree.size(), std::nullopt);
  ps.r_weights.assign(tree.size(), RatVec{});
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_terminal(v)) continue;
    ps.r_weights[v].assign(inst.kernels[v].size(),
                           Rat(1) / Rat(static_cast<long>(inst.kernels[v].size())));
  }

  std::vector<int> stack;
  for (int v : tree.nodes_at(req.time))
    if (!inst.is_polar(v)) {
      ps.z[v] = req.Y.at(v);
      stack.push_back(v);
    }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (tree.is_terminal(v)) continue;
    std::vector<int> mandatory;
    for (std::size_t b = 0; b < req.P[v].size(); ++b)
      if (sgn(req.P[v][b]) > 0) mandatory.push_back(static_cast<int>(b));
    OneStepOutcome step = one_step_extend(inst, v, *ps.z[v], mandatory);
    if (!step.extended) throw NoExtension(tree.path_str(v), v, std::move(step));
    ps.q[v] = step.kernel;
    for (auto& [c, zc] : step.z) {
      ps.z[c] = std::move(zc);
      stack.push_back(c);
    }
  }
  return ps;
}

std::vector<std::string> verify_pce(const MarketInstance& inst, const PriceSystem& ps,
                                    const ExtensionRequest& req) {
  std::vector<std::string> bad;
  const auto& tree = inst.tree;
  const int t = ps.start_time;
  if (t != req.time) bad.push_back("start time differs from the request");
  if (static_cast<int>(ps.q.size()) != tree.size() ||
      static_cast<int>(ps.z.size()) != tree.size()) {
    bad.push_back("price system does not cover the tree");
    return bad;
  }

  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_terminal(v)) continue;
    const std::string where = tree.path_str(v);
    const auto& qv = ps.q[v];
    const auto& pv = req.P[v];
    if (qv.size() != tree.nodes[v].children.size()) {
      bad.push_back("(i) kernel length mismatch at node " + where);
      continue;
    }
    // supp(P) subset of supp(Q) subset of reachable
    for (std::size_t b = 0; b < qv.size(); ++b) {
      if (sgn(pv[b]) > 0 && sgn(qv[b]) <= 0)
        bad.push_back("(i) P-support not dominated by Q at node " + where);
      if (sgn(qv[b]) > 0 &&
          !std::binary_search(inst.reachable[v].begin(), inst.reachable[v].end(),
                              static_cast<int>(b)))
        bad.push_back("(i) Q charges an unreachable successor at node " + where);
    }
    // Q dominated by the witness mixture
    const auto& wts = ps.r_weights[v];
    if (wts.size() != inst.kernels[v].size()) {
      bad.push_back("(i) witness weights missing at node " + where);
    } else {
      Rat total = 0;
      bool neg = false;
      for (const auto& w : wts) {
        total += w;
        if (sgn(w) < 0) neg = true;
      }
      if (neg || total != 1) bad.push_back("(i) witness weights are not convex at node " + where);
      RatVec rker = zeros(qv.size());
      for (std::size_t k = 0; k < wts.size(); ++k)
        for (std::size_t b = 0; b < qv.size(); ++b) rker[b] += wts[k] * inst.kernels[v][k][b];
      for (std::size_t b = 0; b < qv.size(); ++b)
        if (sgn(qv[b]) > 0 && sgn(rker[b]) <= 0)
          bad.push_back("(i) Q not dominated by the witness mixture at node " + where);
    }
    // kernel sums to one
    Rat total = 0;
    for (const auto& p : qv) {
      total += p;
      if (sgn(p) < 0) bad.push_back("(i) negative kernel entry at node " + where);
    }
    if (total != 1) bad.push_back("(i) Q kernel does not sum to 1 at node " + where);
  }

  // (ii) agreement with P strictly before t, and Z_t = Y on the P-support
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_terminal(v) || tree.nodes[v].time >= t) continue;
    if (ps.q[v] != req.P[v])
      bad.push_back("(ii) kernel differs from P before the start time at node " + tree.path_str(v));
  }
  auto pmass = node_probabilities(inst, req.P);
  for (int v : tree.nodes_at(t)) {
    if (sgn(pmass[v]) <= 0) continue;
    auto it = req.Y.find(v);
    if (it == req.Y.end()) {
      bad.push_back("(ii) request lacks Y at P-charged node " + tree.path_str(v));
      continue;
    }
    if (!ps.z[v] || *ps.z[v] != it->second)
      bad.push_back("(ii) Z differs from Y at node " + tree.path_str(v));
  }

  // (iii) strict interiority and (iv) martingale identity on the Q-supported tree
  auto qmass = node_probabilities(inst, ps.q);
  for (int v = 0; v < tree.size(); ++v) {
    const int s = tree.nodes[v].time;
    if (s < t || sgn(qmass[v]) <= 0) continue;
    const std::string where = tree.path_str(v);
    if (!ps.z[v]) {
      bad.push_back("(iii) Z missing at supported node " + where);
      continue;
    }
    if (sgn(interior_margin(*ps.z[v], inst.geom(v).Kstar)) <= 0)
      bad.push_back("(iii) not strictly interior at node " + where);
    if (tree.is_terminal(v)) continue;
    RatVec expect = zeros(inst.d);
    bool complete = true;
    for (std::size_t b = 0; b < ps.q[v].size(); ++b) {
      if (sgn(ps.q[v][b]) == 0) continue;
      const int c = tree.nodes[v].children[b];
      if (!ps.z[c]) {
        bad.push_back("(iv) Z missing at supported node " + tree.path_str(c));
        complete = false;
        break;
      }
      for (int i = 0; i < inst.d; ++i) expect[i] += ps.q[v][b] * (*ps.z[c])[i];
    }
    if (complete && expect != *ps.z[v])
      bad.push_back("(iv) martingale identity fails at node " + where);
  }
  return bad;
}

bool easy_direction_check(const MarketInstance& inst, const PriceSystem& ps, const RatVec& zeta,
                          int t) {
  const auto& tree = inst.tree;
  if (t < ps.start_time || t >= tree.horizon)
    throw std::invalid_argument("easy_direction_check: time out of range");
  if (static_cast<int>(zeta.size()) != inst.d)
    throw std::invalid_argument("easy_direction_check: dimension mismatch");
  auto qmass = node_probabilities(inst, ps.q);
  for (int v : tree.nodes_at(t)) {
    if (sgn(qmass[v]) <= 0) continue;
    if (!ps.z[v]) return false;
    for (std::size_t b = 0; b < ps.q[v].size(); ++b) {
      if (sgn(ps.q[v][b]) == 0) continue;
      const int c = tree.nodes[v].children[b];
      if (!member_cone(zeta, inst.geom(c).K))
        throw std::invalid_argument("easy_direction_check: zeta not solvent at node " +
                                    tree.path_str(c));
    }
    Rat lhs = 0;
    for (std::size_t b = 0; b < ps.q[v].size(); ++b) {
      if (sgn(ps.q[v][b]) == 0) continue;
      const int c = tree.nodes[v].children[b];
      if (!ps.z[c]) return false;
      lhs += ps.q[v][b] * dot(*ps.z[c], zeta);
    }
    const Rat rhs = dot(*ps.z[v], zeta);
    if (lhs != rhs || sgn(rhs) < 0) return false;
  }
  return true;
}

}  // namespace natree
