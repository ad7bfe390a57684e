#pragma once
// Local and global no-arbitrage checks with exact certificates.
//
// The local test at a node works in the dual: the support cone of the
// reachable successors contains the node's cone iff every extreme ray of the
// node's dual cone is a conic combination of the successors' dual rays. On
// failure a separating LP produces a position that is solvent tomorrow
// quasi-surely but not solvent today.

#include "natree/market.hpp"

#include <map>
#include <optional>

namespace natree {

struct ArbitrageCertificate {
  int time = 0;
  int node = 0;
  RatVec zeta;            // in the support cone, outside the node's cone; primitive integers
  RatVec separating_ray;  // extreme ray r of the node's dual cone with <r, zeta> < 0
};

struct Na2Verdict {
  bool holds = false;
  std::optional<ArbitrageCertificate> certificate;
};

/// Self-financing increments: xi[v] is the position acquired at node v
/// (time = v's time); -xi[v] must be solvent there. Absent nodes hold zero.
struct Strategy {
  std::map<int, RatVec> xi;
};

struct PolarNodeError : std::invalid_argument {
  explicit PolarNodeError(const std::string& where)
      : std::invalid_argument("verdict irrelevant: node " + where + " is polar") {}
};

/// Decide the one-step condition at a non-terminal, non-polar node.
Na2Verdict na2_local(const MarketInstance& inst, int node);

struct GlobalVerdict {
  bool holds = false;
  std::vector<ArbitrageCertificate> failing;  // all non-polar failures
};

GlobalVerdict na2_global(const MarketInstance& inst);

/// Soundness check of a certificate by substitution: zeta satisfies every
/// support-cone row, the separating ray is an extreme ray of the node's dual
/// cone, <r, zeta> < 0, and zeta is outside the node's cone.
bool validate_certificate(const MarketInstance& inst, const ArbitrageCertificate& cert);

/// One-shot liquidation: xi = -zeta at every reachable successor of the
/// certificate node, zero elsewhere.
Strategy arbitrage_to_global(const MarketInstance& inst, const ArbitrageCertificate& cert);

/// True iff (zeta, xi) violates the global condition at (t, node): the
/// terminal position zeta + sum of later increments is solvent at every
/// non-polar leaf below the node while zeta is not solvent at the node.
/// Throws std::invalid_argument when xi is not admissible.
bool verify_global_certificate(const MarketInstance& inst, const RatVec& zeta,
                               const Strategy& xi, int t, int node);

}  // namespace natree
