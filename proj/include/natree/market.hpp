#pragma once
// Finite event tree with an adapted bid-ask process and per-node model
// families (finite sets of extreme one-step kernels). Immutable after
// finalize(); node-level queries are pure.

#include "natree/cone.hpp"
#include "natree/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace natree {

struct EventTree {
  int horizon = 0;
  struct Node {
    int time = 0;
    int parent = -1;
    int branch = -1;  // index within the parent's child list
    std::vector<int> children;
  };
  std::vector<Node> nodes;  // id 0 is the root; ids are level-ordered

  int size() const { return static_cast<int>(nodes.size()); }
  bool is_terminal(int v) const { return nodes[v].time == horizon; }
  std::vector<int> nodes_at(int t) const;
  std::string path_str(int v) const;  // "root", "1/0", ...
  /// Node id for a path of branch indices, -1 when absent.
  int node_at_path(const std::vector<int>& branches) const;
};

/// Cached exact geometry for one node's solvency cone.
struct NodeGeometry {
  PolyCone K;          // V-rep: solvency generators; H-rep: extreme rays of K*
  PolyCone Kstar;      // H-rep: solvency generators; V-rep: extreme rays
  RatVec interior;     // deterministic strictly interior point of K*
};

/// One probability kernel per non-terminal node (entries over its children).
using TreeMeasure = std::vector<RatVec>;

struct InstanceMeta {
  std::string name;
  std::string mode;  // generator mode, empty for hand-written instances
  unsigned long long seed = 0;
  bool has_seed = false;
};

struct Validation {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

struct MarketInstance {
  int d = 0;
  EventTree tree;
  std::vector<BidAskMatrix> bidask;          // per node
  std::vector<std::vector<RatVec>> kernels;  // per node; empty at terminal nodes
  InstanceMeta meta;

  // caches built by finalize()
  std::vector<NodeGeometry> geometry;
  std::vector<std::vector<int>> reachable;  // per node: reachable child branch indices
  std::vector<char> polar_flag;
  std::vector<PolyCone> lambda;  // per non-terminal node: support cone H-rep
  bool finalized = false;

  /// Builds all geometric caches. Requires a structurally valid instance
  /// (validate_instance clean); throws on defects that break the geometry.
  void finalize();

  const NodeGeometry& geom(int v) const { return geometry[v]; }
  bool is_polar(int v) const { return polar_flag[v] != 0; }
};

/// Structural validation; violations and warnings name node and condition.
/// Pure data check, callable before finalize().
Validation validate_instance(const MarketInstance& inst);

/// Union of the supports of a node's extreme kernels, as sorted child branch
/// indices. Throws std::invalid_argument at terminal nodes.
std::vector<int> reachable_set(const MarketInstance& inst, int node);

/// Support cone: intersection of the solvency cones of all reachable
/// successors, as a concatenated H-rep.
const PolyCone& support_cone(const MarketInstance& inst, int node);

/// Extreme rays of the support cone (double description, computed on demand).
std::vector<RatVec> lambda_extreme_rays(const MarketInstance& inst, int node);

/// Validates that every chosen kernel lies in the convex hull of the node's
/// extreme kernels (feasibility LP); throws std::invalid_argument otherwise.
TreeMeasure product_measure(const MarketInstance& inst, const std::vector<RatVec>& selection);

/// Leaf probabilities of a tree measure: forward products along paths.
std::map<int, Rat> leaf_probabilities(const MarketInstance& inst, const TreeMeasure& measure);

/// Node probabilities (mass at every node) of a tree measure.
std::vector<Rat> node_probabilities(const MarketInstance& inst, const TreeMeasure& measure);

/// Is `kernel` a convex combination of the node's extreme kernels?
bool kernel_in_hull(const MarketInstance& inst, int node, const RatVec& kernel);

/// Uniform mixture of the node's extreme kernels (full reachable support).
RatVec uniform_mixture_kernel(const MarketInstance& inst, int node);

/// Tree measure taking the uniform mixture at every non-terminal node.
TreeMeasure uniform_tree_measure(const MarketInstance& inst);

}  // namespace natree
