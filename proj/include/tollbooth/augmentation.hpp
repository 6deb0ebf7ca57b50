#pragma once

#include <vector>

#include "tollbooth/graph.hpp"
#include "tollbooth/simulator.hpp"

namespace tollbooth::aug {

// Per-copy prices: copy k of an item sells at grid[k]; prices are
// nondecreasing in k for every item.
struct CopyPriceVector {
  int copies = 1;
  std::vector<PriceVector> grid;

  sim::SupplyPrices to_supply() const {
    sim::SupplyPrices sp;
    sp.supply = copies;
    sp.per_copy = grid;
    return sp;
  }
};

struct AugmentedPricing {
  CopyPriceVector prices;
  Rat certified_welfare;
  Rat opt;  // supply-one optimum, the benchmark
};

// Geometric per-copy ladder over the union of the supply-one optimum,
// blocked elsewhere. Certifies welfare >= OPT / (4 * ceil(m^{1/c})).
AugmentedPricing price_augmented(const Instance& inst, int copies);

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ground set of all (c+1)-subsets of [r]; one buyer wants everything, the
// small buyers pairwise overlap so heavily that c copies cannot help.
Instance gen_congestion_lb(int c, int r, long budget = 1 << 20);

// Arrival order under which the congestion instance sells at most
// c * binom(r-1, c) of value, for any price grid.
std::vector<int> adversary_congestion(const Instance& inst, int c, int r,
                                      const CopyPriceVector& prices);

// Parallel-path hardness instance for c-copy selling: identity paths of value
// one plus per-subset families that cover them c+1 times.
struct MulticopyLab {
  Instance inst;
  int c, a;
  long b;
  std::vector<std::vector<int>> admitted;      // subsets of [a]
  std::vector<std::vector<int>> family_buyers; // per subset, buyer ids
  std::vector<int> identity_buyers;            // r -> buyer id
};
MulticopyLab gen_multicopy_lab(int c, int a, uint64_t seed);

}  // namespace tollbooth::aug
