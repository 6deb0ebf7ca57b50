#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tollbooth/graph.hpp"

namespace tollbooth::sim {

struct TooManyBuyers : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingTieDecision : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-copy price schedule: layer k prices the (k+1)-th copy of every edge.
// Single-supply selling is the one-layer special case.
struct SupplyPrices {
  int supply = 1;
  std::vector<PriceVector> per_copy;

  static SupplyPrices single(PriceVector p) {
    SupplyPrices sp;
    sp.supply = 1;
    sp.per_copy = {std::move(p)};
    return sp;
  }
  ExtPrice next_price(const DemandPath& q, const std::vector<int>& sold) const;
  bool available(const DemandPath& q, const std::vector<int>& sold) const;
};

struct SimOutcome {
  Rat welfare;
  Rat revenue;
  std::set<int> winners;
};

// Deterministic replay of one arrival order. Ties are resolved by the
// seller's intended-winner set (SellerBreaks) or by the per-buyer decision
// map (BuyerBreaks); a tie without a decision raises MissingTieDecision.
SimOutcome simulate(const Instance& inst, const SupplyPrices& prices,
                    const std::vector<int>& order, TieMode mode,
                    const std::set<int>* seller_winners,
                    const std::map<int, bool>* buyer_decisions);

inline SimOutcome simulate(const Instance& inst, const PriceVector& prices,
                           const std::vector<int>& order, TieMode mode,
                           const std::set<int>* seller_winners = nullptr,
                           const std::map<int, bool>* buyer_decisions = nullptr) {
  return simulate(inst, SupplyPrices::single(prices), order, mode, seller_winners,
                  buyer_decisions);
}

struct SimReport {
  Rat worst_welfare;
  std::vector<int> witness_order;
  std::map<int, bool> witness_ties;  // decisions taken at price==value events
  Rat revenue;                       // of the witness replay
  long states_explored = 0;
};

// Exact minimum welfare over all arrival orders. The adversary picks the next
// buyer adaptively; at an exact tie the seller maximizes (SellerBreaks) or
// the adversary also minimizes (BuyerBreaks). Memoized on
// (arrived, purchased): the value to go depends only on the remaining buyers
// and the copies consumed by the purchased set.
SimReport worst_case_welfare(const Instance& inst, const SupplyPrices& prices, TieMode mode,
                             int cap = 12);
inline SimReport worst_case_welfare(const Instance& inst, const PriceVector& prices, TieMode mode,
                                    int cap = 12) {
  return worst_case_welfare(inst, SupplyPrices::single(prices), mode, cap);
}

struct RatioReport {
  bool infinite = false;
  Rat ratio;  // valid when !infinite
  Rat opt;
  Rat worst_welfare;
};
RatioReport competitive_ratio(const Instance& inst, const PriceVector& prices, TieMode mode,
                              int cap = 12);

// Exhaustive max-value feasible subset: the independent oracle the DP and
// branch-and-bound allocators are tested against. Plain subset recursion
// with a remaining-sum bound, no shared machinery with the engine.
Rat optimal_allocation_bruteforce(const Instance& inst, int supply = 1, int cap = 24);

}  // namespace tollbooth::sim
