#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tollbooth/graph.hpp"
#include "tollbooth/lp_engine.hpp"

namespace tollbooth::pricing {

// Result of a pricing algorithm: the prices, the buyers the seller intends
// to serve (its tie policy under SellerBreaks), the welfare the construction
// certifies, and the class ratio the algorithm targets. `trace` records
// which branches fired.
struct PricedOutcome {
  PriceVector prices;
  std::set<int> intended_winners;
  Rat guaranteed_welfare;
  Rat ratio_bound;
  std::vector<std::string> trace;

  void note(std::string s) { trace.push_back(std::move(s)); }
};

struct SupportViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optimal dual prices plus the winner set of an integral solution supported
// inside the fractional optimum: under seller tie-breaking, every arrival
// order sells exactly to the winners.
PricedOutcome rounding_prices(const Instance& inst, const engine::LPSolution& y_star,
                              const Allocation& y_prime);

PricedOutcome price_path(const Instance& inst);
PricedOutcome price_star(const Instance& inst);
PricedOutcome price_spider(const Instance& inst);
PricedOutcome price_tree(const Instance& inst);
PricedOutcome price_cycle(const Instance& inst);
PricedOutcome price_outerplanar(const Instance& inst, TieMode mode = TieMode::SellerBreaks);
PricedOutcome price_general(const Instance& inst, uint64_t seed);
PricedOutcome price_setpacking_sqrt(const Instance& inst, int hitting_budget = 24);

struct NotATree : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Splits edge-disjoint paths whose union is a tree into two sides, each a
// union of vertex-disjoint spiders (layered by path adjacency from a root).
std::pair<std::vector<int>, std::vector<int>> tree_to_spiders(
    const Graph& graph, const std::vector<std::vector<int>>& paths);

struct HittingSetTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact minimum hitting set over item ids (branch and bound).
std::set<int> min_hitting_set(const std::vector<std::set<int>>& sets, int budget = 24);

// A cut produced on an outerplanar instance: either (S,T) with few crossing
// edges, or the hub vertex all balanced-separating edges share.
struct BalancedCut {
  bool found = false;
  std::set<int> side_s, side_t;       // vertex ids
  std::vector<int> crossing_edges;    // 1-based ids
  int hub = -1;                       // valid when !found
};
BalancedCut find_balanced_cut(const Instance& inst);

// Sub-instance extraction: buyers fully inside the edge subset, with edges
// renumbered; maps translate results back.
struct SubInstance {
  Instance inst;
  std::vector<int> edge_to_orig;   // sub id (1-based) -> original id
  std::vector<int> buyer_to_orig;  // sub index -> original index
};
SubInstance make_sub_instance(const Instance& inst, const std::set<int>& edge_subset,
                              GraphKind kind);

}  // namespace tollbooth::pricing
