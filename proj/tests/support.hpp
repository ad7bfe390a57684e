#pragma once
// Shared fixtures for the test suites.

#include "natree/market.hpp"

#include <doctest.h>

namespace natree::testkit {

/// Uniform tree: same matrix and kernel set at every level, fixed branching.
inline MarketInstance level_instance(int d, int horizon, const std::vector<BidAskMatrix>& levels,
                                     const std::vector<std::vector<RatVec>>& level_kernels,
                                     int branching = 2) {
  MarketInstance inst;
  inst.d = d;
  inst.tree.horizon = horizon;
  struct Pending {
    int parent, branch;
  };
  std::vector<Pending> queue{{-1, -1}};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto [parent, branch] = queue[qi];
    const int v = inst.tree.size();
    EventTree::Node node;
    node.parent = parent;
    node.branch = branch;
    node.time = parent < 0 ? 0 : inst.tree.nodes[parent].time + 1;
    inst.tree.nodes.push_back(node);
    if (parent >= 0) inst.tree.nodes[parent].children.push_back(v);
    inst.bidask.push_back(levels[node.time]);
    if (node.time < horizon) {
      inst.kernels.push_back(level_kernels[node.time]);
      for (int b = 0; b < branching; ++b) queue.push_back({v, b});
    } else {
      inst.kernels.emplace_back();
    }
  }
  return inst;
}

/// Binary tree, every matrix pi = 2, one uniform kernel per node. Finalized.
inline MarketInstance flat2(int horizon = 2) {
  auto pi = BidAskMatrix::uniform(2, rat(2));
  std::vector<RatVec> uniform{{rat(1, 2), rat(1, 2)}};
  MarketInstance inst = level_instance(2, horizon, std::vector<BidAskMatrix>(horizon + 1, pi),
                                       std::vector<std::vector<RatVec>>(horizon, uniform));
  inst.meta.name = "flat-2";
  REQUIRE(validate_instance(inst).ok());
  inst.finalize();
  return inst;
}

/// One period, pi = 8 at the root over two pi = 2 successors, extreme point
/// masses on both branches. The root violates the one-step condition.
inline MarketInstance drop82() {
  MarketInstance inst = level_instance(
      2, 1, {BidAskMatrix::uniform(2, rat(8)), BidAskMatrix::uniform(2, rat(2))},
      {{{rat(1), rat(0)}, {rat(0), rat(1)}}}, 2);
  inst.meta.name = "drop-8-over-2";
  REQUIRE(validate_instance(inst).ok());
  inst.finalize();
  return inst;
}

}  // namespace natree::testkit
