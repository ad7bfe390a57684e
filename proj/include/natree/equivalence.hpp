#pragma once
// Experiment harness: runs the no-arbitrage check against price-system
// construction on a batch of instances and writes a self-verifying report.
// Any disagreement between the two sides is a counterexample and signals an
// implementation bug.

#include "natree/cps.hpp"
#include "natree/generate.hpp"
#include "natree/jsonio.hpp"
#include "natree/market.hpp"

namespace natree {

/// Random strictly interior dual vector at a node: a convex combination of
/// the dual extreme rays pulled to the midpoint with the node's deterministic
/// interior point.
RatVec sample_interior_point(const MarketInstance& inst, int node, Rng& rng);

struct EquivConfig {
  int measure_probes = 20;  // product measures per instance
  int y_probes = 5;         // interior dual maps per start time
  bool exhaustive = false;  // enumerate all extreme-kernel products when small
  int workers = 1;
};

/// Instances must be validated and finalized. Deterministic for fixed inputs
/// and configuration, up to the elapsed_ms timing fields.
Json run_equivalence(const std::vector<MarketInstance>& instances, const EquivConfig& cfg);

int report_counterexamples(const Json& report);

/// Re-verify every embedded certificate, strategy, witness and price system
/// from the report document alone (no solver runs). Empty iff clean.
std::vector<std::string> verify_report(const Json& report);

/// Human-readable summary.
std::string summarize_report(const Json& report);

/// Same built extension as build_pce for a different measure in the same
/// family: kernels outside the built subtrees revert to the new measure.
PriceSystem reassign_measure(const MarketInstance& inst, const PriceSystem& built,
                             const TreeMeasure& P);

}  // namespace natree
