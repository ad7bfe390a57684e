#include "natree/market.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace natree {

std::vector<int> EventTree::nodes_at(int t) const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (nodes[v].time == t) out.push_back(v);
  return out;
}

std::string EventTree::path_str(int v) const {
  if (v == 0) return "root";
  std::vector<int> branches;
  for (int cur = v; cur != 0; cur = nodes[cur].parent) branches.push_back(nodes[cur].branch);
  std::reverse(branches.begin(), branches.end());
  std::ostringstream os;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (i) os << '/';
    os << branches[i];
  }
  return os.str();
}

int EventTree::node_at_path(const std::vector<int>& branches) const {
  int cur = 0;
  for (int b : branches) {
    if (b < 0 || b >= static_cast<int>(nodes[cur].children.size())) return -1;
    cur = nodes[cur].children[b];
  }
  return cur;
}

std::vector<int> reachable_set(const MarketInstance& inst, int node) {
  if (inst.tree.is_terminal(node))
    throw std::invalid_argument("reachable_set: terminal node " + inst.tree.path_str(node));
  std::set<int> acc;
  for (const auto& kernel : inst.kernels[node])
    for (std::size_t b = 0; b < kernel.size(); ++b)
      if (sgn(kernel[b]) > 0) acc.insert(static_cast<int>(b));
  return std::vector<int>(acc.begin(), acc.end());
}

void MarketInstance::finalize() {
  const int n = tree.size();
  geometry.clear();
  geometry.resize(n);
  for (int v = 0; v < n; ++v) {
    NodeGeometry g;
    PolyCone kv = solvency_cone(bidask[v]);
    PolyCone ks = dual_cone_hrep(bidask[v]);
    ks.generators = extreme_rays(ks);
    kv.normals = *ks.generators;  // H-rep of K is the extreme-ray list of K*
    g.K = std::move(kv);
    g.Kstar = std::move(ks);
    g.interior = pick_interior_point(g.Kstar);
    geometry[v] = std::move(g);
  }
  reachable.assign(n, {});
  for (int v = 0; v < n; ++v)
    if (!tree.is_terminal(v)) reachable[v] = reachable_set(*this, v);
  polar_flag.assign(n, 0);
  for (int v = 1; v < n; ++v) {
    const int p = tree.nodes[v].parent;
    if (polar_flag[p]) {
      polar_flag[v] = 1;
      continue;
    }
    const auto& rs = reachable[p];
    if (!std::binary_search(rs.begin(), rs.end(), tree.nodes[v].branch)) polar_flag[v] = 1;
  }
  lambda.assign(n, PolyCone{});
  for (int v = 0; v < n; ++v) {
    if (tree.is_terminal(v)) continue;
    std::vector<PolyCone> parts;
    for (int b : reachable[v]) {
      const int c = tree.nodes[v].children[b];
      parts.push_back(PolyCone::from_normals(d, *geometry[c].K.normals));
    }
    lambda[v] = cone_intersection(parts);
  }
  finalized = true;
}

Validation validate_instance(const MarketInstance& inst) {
  Validation val;
  auto flag = [&](const std::string& msg) { val.violations.push_back(msg); };
  const auto& tree = inst.tree;
  if (inst.d < 2) flag("instance: asset count must be at least 2");
  if (tree.horizon < 1) flag("instance: horizon must be at least 1");
  if (tree.size() == 0 || tree.nodes[0].time != 0) {
    flag("instance: missing root");
    return val;
  }
  if (static_cast<int>(inst.bidask.size()) != tree.size()) {
    flag("instance: bid-ask process must cover every node");
    return val;
  }
  if (static_cast<int>(inst.kernels.size()) != tree.size()) {
    flag("instance: kernel table must cover every node");
    return val;
  }
  for (int v = 0; v < tree.size(); ++v) {
    const std::string where = tree.path_str(v);
    const auto& node = tree.nodes[v];
    if (node.time < tree.horizon && node.children.empty())
      flag("node " + where + ": non-terminal node without successors");
    if (node.time > tree.horizon) flag("node " + where + ": beyond the horizon");

    const auto& pi = inst.bidask[v];
    if (pi.d != inst.d) {
      flag("node " + where + ": bid-ask matrix has wrong asset count");
      continue;
    }
    try {
      pi.validate();
    } catch (const std::invalid_argument& e) {
      flag("node " + where + ": " + e.what());
      continue;
    }
    for (int i = 0; i < pi.d; ++i)
      for (int j = 0; j < pi.d; ++j) {
        if (i == j) continue;
        if (pi.at(i, j) * pi.at(j, i) <= 1)
          flag("node " + where + ": efficient friction fails, round-trip " + std::to_string(i) +
               "<->" + std::to_string(j) + " costs nothing");
      }
    // Pairwise costs alone do not rule out profitable longer cycles; the
    // standing assumption is a nonempty dual interior, checked exactly.
    if (sgn(max_interior_margin(dual_cone_hrep(pi)).margin) <= 0)
      flag("node " + where + ": dual cone has empty interior");
    for (int i = 0; i < pi.d; ++i)
      for (int j = 0; j < pi.d; ++j)
        for (int k = 0; k < pi.d; ++k) {
          if (i == j || j == k || i == k) continue;
          if (pi.at(i, j) > pi.at(i, k) * pi.at(k, j)) {
            val.warnings.push_back("node " + where + ": direct exchange " + std::to_string(i) +
                                   "->" + std::to_string(j) + " dearer than via " + std::to_string(k));
          }
        }

    if (tree.is_terminal(v)) {
      if (!inst.kernels[v].empty()) flag("node " + where + ": terminal node carries kernels");
      continue;
    }
    if (inst.kernels[v].empty()) flag("node " + where + ": no extreme kernels");
    for (std::size_t ki = 0; ki < inst.kernels[v].size(); ++ki) {
      const auto& kernel = inst.kernels[v][ki];
      if (kernel.size() != node.children.size()) {
        flag("node " + where + ": kernel " + std::to_string(ki) + " has wrong length");
        continue;
      }
      Rat total = 0;
      bool neg = false;
      for (const auto& p : kernel) {
        if (sgn(p) < 0) neg = true;
        total += p;
      }
      if (neg) flag("node " + where + ": kernel " + std::to_string(ki) + " has a negative entry");
      if (total != 1) flag("node " + where + ": kernel " + std::to_string(ki) + " does not sum to 1");
    }
  }
  return val;
}

const PolyCone& support_cone(const MarketInstance& inst, int node) {
  if (inst.tree.is_terminal(node))
    throw std::invalid_argument("support_cone: terminal node " + inst.tree.path_str(node));
  return inst.lambda[node];
}

std::vector<RatVec> lambda_extreme_rays(const MarketInstance& inst, int node) {
  return extreme_rays(support_cone(inst, node));
}

bool kernel_in_hull(const MarketInstance& inst, int node, const RatVec& kernel) {
  const auto& extremes = inst.kernels[node];
  if (extremes.empty()) return false;
  if (kernel.size() != inst.tree.nodes[node].children.size()) return false;
  LinearProgram lp;
  lp.objective = Objective::Minimize;
  lp.cost = zeros(extremes.size());
  lp.bounds.assign(extremes.size(), VarBound::NonNeg);
  const std::size_t nc = kernel.size();
  lp.rows.assign(nc + 1, zeros(extremes.size()));
  for (std::size_t k = 0; k < extremes.size(); ++k) {
    for (std::size_t b = 0; b < nc; ++b) lp.rows[b][k] = extremes[k][b];
    lp.rows[nc][k] = 1;
  }
  lp.senses.assign(nc + 1, Sense::Eq);
  lp.rhs = kernel;
  lp.rhs.push_back(1);
  return lp_feasible(lp).feasible;
}

TreeMeasure product_measure(const MarketInstance& inst, const std::vector<RatVec>& selection) {
  if (selection.size() != inst.kernels.size())
    throw std::invalid_argument("product_measure: one kernel per node required");
  TreeMeasure out(selection.size());
  for (int v = 0; v < inst.tree.size(); ++v) {
    if (inst.tree.is_terminal(v)) continue;
    if (!kernel_in_hull(inst, v, selection[v]))
      throw std::invalid_argument("product_measure: not a model selection at node " +
                                  inst.tree.path_str(v));
    out[v] = selection[v];
  }
  return out;
}

std::vector<Rat> node_probabilities(const MarketInstance& inst, const TreeMeasure& measure) {
  std::vector<Rat> mass(inst.tree.size(), Rat(0));
  mass[0] = 1;
  for (int v = 0; v < inst.tree.size(); ++v) {
    if (inst.tree.is_terminal(v) || sgn(mass[v]) == 0) continue;
    const auto& kernel = measure[v];
    const auto& children = inst.tree.nodes[v].children;
    for (std::size_t b = 0; b < children.size(); ++b) mass[children[b]] = mass[v] * kernel[b];
  }
  return mass;
}

std::map<int, Rat> leaf_probabilities(const MarketInstance& inst, const TreeMeasure& measure) {
  auto mass = node_probabilities(inst, measure);
  std::map<int, Rat> out;
  for (int v = 0; v < inst.tree.size(); ++v)
    if (inst.tree.is_terminal(v)) out[v] = mass[v];
  return out;
}

RatVec uniform_mixture_kernel(const MarketInstance& inst, int node) {
  const auto& extremes = inst.kernels[node];
  if (extremes.empty()) throw std::invalid_argument("uniform_mixture_kernel: no kernels");
  RatVec mix = zeros(inst.tree.nodes[node].children.size());
  const Rat w = Rat(1) / Rat(static_cast<long>(extremes.size()));
  for (const auto& k : extremes)
    for (std::size_t b = 0; b < mix.size(); ++b) mix[b] += w * k[b];
  return mix;
}

TreeMeasure uniform_tree_measure(const MarketInstance& inst) {
  TreeMeasure out(inst.tree.size());
  for (int v = 0; v < inst.tree.size(); ++v)
    if (!inst.tree.is_terminal(v)) out[v] = uniform_mixture_kernel(inst, v);
  return out;
}

}  // namespace natree
