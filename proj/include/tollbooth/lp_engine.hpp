#pragma once

#include <optional>
#include <vector>

#include "tollbooth/graph.hpp"
#include "tollbooth/lp.hpp"

namespace tollbooth::engine {

// Exact extreme-point solution of the allocation LP
//   max sum v_j y_j   s.t.  sum_{j: e in Q_j} y_j <= 1 per edge,  y >= 0
// together with an optimal dual price vector (min sum p_e, p(Q_j) >= v_j).
// Construction checks primal/dual feasibility, strong duality and
// complementary slackness as exact rational identities.
struct LPSolution {
  std::vector<Rat> primal_y;  // per buyer
  std::vector<Rat> dual_p;    // per edge, 0-based internally
  Rat objective;
  std::vector<int> basis;  // vertex certificate of the simplex solve

  Rat dual_price(const DemandPath& q) const {
    Rat s(0);
    for (int e : q.edge_ids) s += dual_p.at(e - 1);
    return s;
  }
};

// Optional per-buyer objective shift (values become v_j + shift), used to
// single out integral optima of maximum cardinality on paths.
LPSolution solve_primal_dual(const Instance& inst, const std::optional<Rat>& objective_shift = {});

// Default shift 1/(n^2 * max denominator of the values).
Rat default_objective_shift(const Instance& inst);

bool check_complementary_slackness(const LPSolution& sol, const Instance& inst);

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integral optimum and a witness allocation. Dispatch: Path -> interval DP,
// Cycle -> per-split interval DP, Star/Spider/Tree -> bottom-up tree DP,
// anything else -> exact branch and bound over the conflict graph (General
// graphs are capped at `general_cap` buyers).
std::pair<Rat, Allocation> optimal_allocation(const Instance& inst, int general_cap = 24);

// Tie-resolved optimum used by the no-tie constructions: value first, then
// fewest covered edges, then most winners (all compared exactly).
// `order` picks which secondary criterion dominates.
enum class LexRefine { CoverThenCount, CountThenCover };
std::pair<Rat, Allocation> optimal_allocation_lex(const Instance& inst, LexRefine order);

struct HalfIntegralityViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Half-integral optimum for Star/Spider instances: primal in {0,1/2,1}^n.
// For stars, `half_pair_graph` lists the half-support buyers as edges of the
// auxiliary graph on demanded edge ids, verified to be vertex-disjoint odd
// cycles; the cycles are returned buyer-indexed.
struct HalfIntegralSolution {
  LPSolution lp;
  std::vector<int> ones;    // buyers with y = 1
  std::vector<int> halves;  // buyers with y = 1/2
  std::vector<std::vector<int>> odd_cycles;  // star case: cycles as buyer lists
};
HalfIntegralSolution half_integral_optimum(const Instance& inst);

// Rebuilds a half-integral optimum on a spider from any optimal solution by
// peeling edge-disjoint leg covers into a star-shaped relaxation. Used when
// a solved vertex is not half-integral; callable directly for verification.
LPSolution half_integral_from_optimum(const Instance& inst, const LPSolution& base);

}  // namespace tollbooth::engine
