#pragma once
// Exact polyhedral cone geometry: solvency cones from bid-ask matrices, dual
// cones, extreme rays via double description, membership and interiority.

#include "natree/linprog.hpp"
#include "natree/rational.hpp"

#include <optional>
#include <stdexcept>

namespace natree {

/// Exchange-rate matrix: pi[i][j] units of asset i buy one unit of asset j,
/// transaction costs included. Diagonal fixed to 1, off-diagonal positive.
struct BidAskMatrix {
  int d = 0;
  RatMat pi;

  static BidAskMatrix uniform(int d, const Rat& rate);
  /// Throws std::invalid_argument on structural defects (size, signs, diagonal).
  void validate() const;
  const Rat& at(int i, int j) const { return pi[i][j]; }
};

/// Polyhedral cone carrying a generator (V) and/or inequality (H)
/// representation; normals are read as <normal, x> >= 0.
struct PolyCone {
  int dim = 0;
  std::optional<std::vector<RatVec>> generators;
  std::optional<std::vector<RatVec>> normals;

  static PolyCone from_generators(int dim, std::vector<RatVec> gens);
  static PolyCone from_normals(int dim, std::vector<RatVec> normals);
  bool has_vrep() const { return generators.has_value(); }
  bool has_hrep() const { return normals.has_value(); }
};

struct FrictionDecomposition {
  RatVec quote;  // strictly positive, first coordinate normalized to 1
  RatMat lambda; // proportional cost matrix, lambda[i][j] >= 0, diagonal 0
};

struct NonPointedCone : std::runtime_error {
  RatVec line;  // a nonzero direction contained in the cone together with its negative
  explicit NonPointedCone(RatVec l)
      : std::runtime_error("cone is not pointed; contains the line through " + vec_str(l)),
        line(std::move(l)) {}
};

struct EmptyInterior : std::runtime_error {
  Rat margin;    // the (nonpositive) optimal margin
  RatVec argmax; // the margin-maximizing point
  EmptyInterior(Rat m, RatVec p)
      : std::runtime_error("cone has empty interior (max margin " + rat_str(m) + ")"),
        margin(std::move(m)),
        argmax(std::move(p)) {}
};

/// Solvency cone K(pi): conic hull of {e_i} and {pi[i][j] e_i - e_j, i != j}.
PolyCone solvency_cone(const BidAskMatrix& pi);

/// Dual cone K*(pi) in H-form: y_i >= 0 and pi[i][j] y_i - y_j >= 0.
PolyCone dual_cone_hrep(const BidAskMatrix& pi);

/// Minimal extreme rays of a pointed H-represented cone via double
/// description (normals inserted in input order, adjacency tested by rank).
/// Rays are scaled so the leading nonzero coordinate is +1 or -1 and sorted
/// lexicographically. Throws NonPointedCone when a line is contained.
std::vector<RatVec> extreme_rays(const PolyCone& cone);

/// Membership: all H-rows nonnegative when an H-rep is present, otherwise a
/// conic-combination feasibility LP over the generators.
bool member_cone(const RatVec& x, const PolyCone& cone);

/// min over normals of <n, y/|y|_1>; strictly positive iff y is interior.
/// Throws std::invalid_argument for y = 0 or a missing H-rep.
Rat interior_margin(const RatVec& y, const PolyCone& cone);

struct MarginOpt {
  Rat margin;
  RatVec point;
};

/// Maximize the smallest H-row value over the slice sum(y) = 1.
MarginOpt max_interior_margin(const PolyCone& cone);

/// Round-trip products pi[i][j]*pi[j][i] all exceed 1.
bool efficient_friction(const BidAskMatrix& pi);

/// c = max over i != j of pi[i][j]*pi[j][i].
Rat roundtrip_bound(const BidAskMatrix& pi);

/// Split pi into a frictionless quote S (normalized S_1 = 1) and proportional
/// costs lambda via S_j (1 + lambda[i][j]) = pi[i][j] S_i. Throws
/// std::invalid_argument when S is not a consistent quote (some lambda < 0).
FrictionDecomposition frictionless_decompose(const BidAskMatrix& pi, const RatVec& quote);

/// Deterministic strictly interior point (margin-maximization LP, then the
/// first coordinate scaled to 1 when positive). Throws EmptyInterior.
RatVec pick_interior_point(const PolyCone& cone);

/// H-rep concatenation with duplicate normals removed.
PolyCone cone_intersection(const std::vector<PolyCone>& cones);

/// Structural defects of a generator-represented cone offered as a solvency
/// cone: every basis vector must be a member, the dual must have strictly
/// positive extreme rays and a nonempty interior (which also forces the cone
/// itself to be pointed). Empty iff the cone qualifies.
std::vector<std::string> solvency_cone_defects(const PolyCone& vrep);

/// Rank of a list of row vectors (exact Gaussian elimination).
int rank_of(const std::vector<RatVec>& rows, int dim);

/// A nonzero kernel vector of the row system, when the rank is below dim.
std::optional<RatVec> null_vector(const std::vector<RatVec>& rows, int dim);

}  // namespace natree
