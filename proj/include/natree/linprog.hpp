#pragma once
// Dense exact-rational linear programming over mpq.
//
// Two-phase primal simplex with Bland's rule (lowest index enters, ratio ties
// broken by lowest basic index), so identical inputs produce identical
// outcomes and cycling cannot occur. Every returned point, Farkas certificate
// and improving ray is exact and checkable by substitution.

#include "natree/rational.hpp"

namespace natree {

enum class Sense { Le, Eq, Ge };
enum class VarBound { Free, NonNeg };
enum class Objective { Maximize, Minimize };

struct LinearProgram {
  Objective objective = Objective::Maximize;
  RatVec cost;                   // one entry per variable
  RatMat rows;                   // constraint matrix, row major
  std::vector<Sense> senses;     // one per row
  RatVec rhs;                    // one per row
  std::vector<VarBound> bounds;  // one per variable

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  /// Throws std::invalid_argument on malformed dimensions.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  RatVec point;   // Optimal: an optimal basic solution; Unbounded: a feasible base point
  Rat value;      // Optimal: objective value at `point`
  RatVec farkas;  // Infeasible: one multiplier per row, see lp_valid_farkas
  RatVec ray;     // Unbounded: improving direction, see lp_valid_ray
};

LpOutcome lp_solve(const LinearProgram& lp);

struct Feasibility {
  bool feasible = false;
  RatVec point;   // a feasible point when feasible
  RatVec farkas;  // a Farkas certificate when infeasible
};

Feasibility lp_feasible(const LinearProgram& lp);

/// Exact constraint and bound satisfaction.
bool lp_satisfies(const LinearProgram& lp, const RatVec& x);

/// Certificate check by substitution: sign conditions per row sense
/// (y_i <= 0 for Le, y_i >= 0 for Ge, free for Eq), aggregated row yᵀA
/// nonpositive on nonnegative variables and zero on free ones, and yᵀb > 0.
/// Any y passing this proves the program infeasible.
bool lp_valid_farkas(const LinearProgram& lp, const RatVec& y);

/// Ray check by substitution: direction r is feasible for the recession cone
/// and strictly improves the objective.
bool lp_valid_ray(const LinearProgram& lp, const RatVec& r);

}  // namespace natree
