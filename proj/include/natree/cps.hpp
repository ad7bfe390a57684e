#pragma once
// Construction and verification of strictly consistent price system
// extensions. The one-step move decomposes an interior dual vector into
// strictly interior contributions of all reachable successors; the kernel is
// read off the numeraire coordinate, so the first component of the dual
// process stays constant in every built extension.

#include "natree/market.hpp"

#include <map>
#include <optional>

namespace natree {

struct OneStepOutcome {
  bool extended = false;
  RatVec kernel;             // over the node's child branches; zero off the reachable set
  std::map<int, RatVec> z;   // child node id -> strictly interior dual vector
  std::optional<Rat> margin; // optimal interior weight; positive iff extended
  // When the decomposition system is infeasible: a vector in the support cone
  // with <separator, y> < 0, proving no extension exists (substitution check).
  std::optional<RatVec> separator;
};

/// Decompose y (strictly interior at the node) into one strictly interior
/// dual vector per reachable successor summing to y. mandatory_support must
/// be contained in the reachable set; the extension always uses the full
/// reachable set. Throws std::invalid_argument on precondition violations.
OneStepOutcome one_step_extend(const MarketInstance& inst, int node, const RatVec& y,
                               const std::vector<int>& mandatory_support);

/// Is z an expectation of strictly interior successor duals under some
/// kernel dominating P's support? Decided by the one-step LP.
bool theta_membership(const MarketInstance& inst, int node, const RatVec& p_kernel,
                      const RatVec& z);

struct ExtensionRequest {
  int time = 0;
  TreeMeasure P;               // kernels in the hull of each node's extremes
  std::map<int, RatVec> Y;     // non-polar time-t node id -> interior dual vector
};

struct PriceSystem {
  int start_time = 0;
  TreeMeasure q;                          // kernel per non-terminal node
  std::vector<std::optional<RatVec>> z;   // per node id; set on the built subtrees
  std::vector<RatVec> r_weights;          // per non-terminal node: hull weights of the
                                          // dominating mixture (uniform over extremes)
};

struct NoExtension : std::runtime_error {
  int node;
  OneStepOutcome detail;
  NoExtension(std::string where, int v, OneStepOutcome d)
      : std::runtime_error("no one-step extension at node " + where), node(v), detail(std::move(d)) {}
};

/// Forward construction from req.time to the horizon. Throws NoExtension when
/// a one-step move is impossible (which, by the equivalence, happens only if
/// the no-arbitrage condition fails at some reachable node).
PriceSystem build_pce(const MarketInstance& inst, const ExtensionRequest& req);

/// Exact check of the extension properties: support domination, agreement
/// with P before the start time, strict interiority on the supported tree,
/// and the one-step martingale identities. Empty iff valid.
std::vector<std::string> verify_pce(const MarketInstance& inst, const PriceSystem& ps,
                                    const ExtensionRequest& req);

/// For every supported node at time t: zeta solvent at all supported children
/// (precondition, else std::invalid_argument), and the conditional one-step
/// expectation of <Z, zeta> equals <Z_t, zeta> exactly and is nonnegative.
bool easy_direction_check(const MarketInstance& inst, const PriceSystem& ps, const RatVec& zeta,
                          int t);

}  // namespace natree
