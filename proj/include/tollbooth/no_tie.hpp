#pragma once

#include <array>
#include <set>
#include <vector>

#include "tollbooth/pricing.hpp"

namespace tollbooth::notie {

using pricing::PricedOutcome;

struct SystemInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RepairLoopDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Feasible dual prices that are tight exactly on a controlled set of buyers,
// bounded away from zero on the covered edges, and bounded away from the
// values everywhere else. The slack drives strictly separating price
// perturbations.
struct DualCertificate {
  std::vector<Rat> p_star;  // per edge, 0-based
  Rat epsilon;              // > 0; p >= eps on covered edges
  std::set<int> tight;      // buyers with p*(Q_j) = v_j (duplicates deduped)
  std::set<int> covered;    // edges of the kept integral optimum (1-based)
  std::vector<int> winners; // the integral optimum the certificate binds
  bool margin_ok = false;   // every non-tight gap exceeds (m+1)*epsilon
};

// Certificate for a path instance (kinds Path; other kinds via sub-instances).
DualCertificate dual_with_margin(const Instance& inst);

// True iff no >=2-path edge-disjoint subset of the other tight buyers covers
// exactly the same edges as `kept` (which must be edge-disjoint and span a
// contiguous interval of the path).
bool is_good_set(const Instance& inst, const std::vector<int>& kept,
                 const DualCertificate& cert);

// Strictly separating prices: kept buyers afford with slack, every other
// buyer inside the kept span is priced strictly out, edges off the span are
// blocked. Raises SystemInfeasible when `kept` is not good.
PriceVector good_set_prices(const Instance& inst, const std::vector<int>& kept,
                            const DualCertificate& cert);

// Three edge-disjoint sets of tight buyers that together cover every covered
// edge exactly twice, with every connected component of every set good.
// Entries are buyer ids; a buyer appears in exactly two sets.
std::array<std::vector<int>, 3> double_cover_partition(const Instance& inst,
                                                       const DualCertificate& cert);

PricedOutcome price_path_no_tie(const Instance& inst);
PricedOutcome price_star_no_tie(const Instance& inst, const Rat& eps);
PricedOutcome price_spider_no_tie(const Instance& inst, const Rat& eps);
PricedOutcome price_tree_no_tie(const Instance& inst, const Rat& eps);
PricedOutcome price_cycle_no_tie(const Instance& inst);

}  // namespace tollbooth::notie
