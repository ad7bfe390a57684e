#pragma once
// Seeded instance generation. Identical configuration produces an identical
// instance byte for byte: the engine is mt19937_64 (sequence fixed by the
// standard) and draws are reduced with plain modulo.

#include "natree/market.hpp"

#include <random>
#include <string>

namespace natree {

struct GeneratorConfig {
  std::string mode = "random";  // monotone | planted-arbitrage | random
  int d = 2;
  int horizon = 2;
  int branch_lo = 2, branch_hi = 2;
  int kernels_lo = 1, kernels_hi = 2;
  Rat cost_lo = rat(1, 2), cost_hi = rat(3);  // off-diagonal entry range
  int den_max = 4;                            // entry denominators up to this
  unsigned long long seed = 0;
  std::string name;

  void validate() const;  // throws std::invalid_argument on contradictory ranges
};

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(unsigned long long seed) : eng(seed) {}
  std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : eng() % n; }
  int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
  /// A rational in [lo, hi] with denominator at most den_max.
  Rat rational_in(const Rat& lo, const Rat& hi, int den_max);
};

/// Off-diagonal entries within the configured range, every round trip
/// strictly costly (each pi[i][j]*pi[j][i] > 1).
BidAskMatrix random_bidask(Rng& rng, int d, const GeneratorConfig& cfg);

/// Generated instance, finalized. Modes:
///  - monotone: child matrices dominate the parent entrywise, so solvency
///    cones shrink along every path and the no-arbitrage condition holds.
///  - planted-arbitrage: one non-polar internal node gets an entrywise drop
///    to its successors large enough that the local condition fails there.
///  - random: free sampling within the round-trip constraint.
MarketInstance gen_instance(const GeneratorConfig& cfg);

}  // namespace natree
