#include "doctest.h"

#include "tollbooth/instances.hpp"
#include "tollbooth/rng.hpp"
#include "tollbooth/simulator.hpp"

using namespace tollbooth;

namespace {

// Unmemoized reference: explores every arrival sequence (and tie decision)
// directly. Ground truth for the memoized search.
Rat naive_worst(const Instance& inst, const PriceVector& prices, TieMode mode,
                std::vector<int>& sold, std::set<int>& arrived) {
  int n = inst.buyer_count();
  if (static_cast<int>(arrived.size()) == n) return Rat(0);
  std::optional<Rat> best;
  for (int j = 0; j < n; ++j) {
    if (arrived.count(j)) continue;
    const Buyer& b = inst.buyer(j);
    bool available = true;
    for (int e : b.demand.edge_ids)
      if (sold[e - 1]) available = false;
    arrived.insert(j);
    Rat result;
    if (!available) {
      result = naive_worst(inst, prices, mode, sold, arrived);
    } else {
      ExtPrice pq = prices.path_price(b.demand);
      if (pq.is_blocked() || pq.finite() > b.value) {
        result = naive_worst(inst, prices, mode, sold, arrived);
      } else if (pq.finite() < b.value) {
        for (int e : b.demand.edge_ids) sold[e - 1] = 1;
        result = b.value + naive_worst(inst, prices, mode, sold, arrived);
        for (int e : b.demand.edge_ids) sold[e - 1] = 0;
      } else {
        for (int e : b.demand.edge_ids) sold[e - 1] = 1;
        Rat take = b.value + naive_worst(inst, prices, mode, sold, arrived);
        for (int e : b.demand.edge_ids) sold[e - 1] = 0;
        Rat leave = naive_worst(inst, prices, mode, sold, arrived);
        result = mode == TieMode::SellerBreaks ? max(take, leave) : min(take, leave);
      }
    }
    arrived.erase(j);
    if (!best || result < *best) best = result;
  }
  return *best;
}

Rat naive_worst(const Instance& inst, const PriceVector& prices, TieMode mode) {
  std::vector<int> sold(inst.edge_count(), 0);
  std::set<int> arrived;
  return naive_worst(inst, prices, mode, sold, arrived);
}

PriceVector random_prices(Rng& rng, int m) {
  PriceVector p(m);
  for (int e = 1; e <= m; ++e) {
    if (rng.below(8) == 0) p.set(e, ExtPrice::blocked());
    else p.set(e, ExtPrice(Rat(rng.range(0, 8), 2)));
  }
  return p;
}

}  // namespace

TEST_CASE("replay of the hardness path instance") {
  Instance inst = gen::gen_path_no_tie_lb();
  PriceVector p(3);
  for (int e = 1; e <= 3; ++e) p.set(e, ExtPrice(Rat(1)));
  std::map<int, bool> ties = {{0, true}, {1, true}, {2, false}, {3, false}};
  auto out = sim::simulate(inst, p, {0, 1, 2, 3}, TieMode::BuyerBreaks, nullptr, &ties);
  CHECK(out.welfare == Rat(2));
  CHECK(out.winners == std::set<int>{0, 1});
}

TEST_CASE("all blocked prices sell nothing") {
  Instance inst = gen::gen_star_lb(Rat(1, 10));
  PriceVector p = PriceVector::all_blocked(inst.edge_count());
  auto rep = sim::worst_case_welfare(inst, p, TieMode::SellerBreaks);
  CHECK(rep.worst_welfare == Rat(0));
  CHECK(rep.revenue == Rat(0));
}

TEST_CASE("memoized worst case equals the naive enumeration") {
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    GraphKind kind = t % 2 ? GraphKind::Path : GraphKind::Star;
    auto inst = gen::gen_random(kind, 4, 5, 1, 6, 7000 + t);
    PriceVector p = random_prices(rng, inst.edge_count());
    for (TieMode mode : {TieMode::SellerBreaks, TieMode::BuyerBreaks}) {
      auto rep = sim::worst_case_welfare(inst, p, mode);
      CHECK(rep.worst_welfare == naive_worst(inst, p, mode));
    }
  }
}

TEST_CASE("seller ties dominate buyer ties") {
  Rng rng(23);
  for (int t = 0; t < 60; ++t) {
    auto inst = gen::gen_random(GraphKind::Path, 5, 5, 1, 6, 8000 + t);
    PriceVector p = random_prices(rng, inst.edge_count());
    auto seller = sim::worst_case_welfare(inst, p, TieMode::SellerBreaks);
    auto buyer = sim::worst_case_welfare(inst, p, TieMode::BuyerBreaks);
    CHECK(seller.worst_welfare >= buyer.worst_welfare);
  }
}

TEST_CASE("witness replay reproduces the reported welfare") {
  Rng rng(29);
  for (int t = 0; t < 40; ++t) {
    auto inst = gen::gen_random(GraphKind::Cycle, 5, 5, 1, 8, 9000 + t);
    PriceVector p = random_prices(rng, inst.edge_count());
    // worst_case_welfare already asserts replay soundness internally.
    auto rep = sim::worst_case_welfare(inst, p, TieMode::BuyerBreaks);
    CHECK(static_cast<int>(rep.witness_order.size()) == inst.buyer_count());
  }
}

TEST_CASE("worst welfare is monotone in supply") {
  Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    auto inst = gen::gen_random_sets(5, 5, 1, 6, 10000 + t);
    PriceVector p = random_prices(rng, inst.edge_count());
    Rat prev(-1);
    for (int supply = 1; supply <= 3; ++supply) {
      sim::SupplyPrices sp;
      sp.supply = supply;
      sp.per_copy.assign(supply, p);
      auto rep = sim::worst_case_welfare(inst, sp, TieMode::SellerBreaks);
      if (prev >= Rat(0)) CHECK(rep.worst_welfare >= prev);
      prev = rep.worst_welfare;
    }
  }
}

TEST_CASE("simulator caps and missing decisions error out") {
  auto inst = gen::gen_random(GraphKind::Path, 4, 6, 1, 5, 4);
  PriceVector p(4);
  CHECK_THROWS_AS(sim::worst_case_welfare(inst, p, TieMode::SellerBreaks, 5),
                  sim::TooManyBuyers);
  // A tie without a policy.
  Instance lb = gen::gen_path_no_tie_lb();
  PriceVector q(3);
  for (int e = 1; e <= 3; ++e) q.set(e, ExtPrice(Rat(1)));
  CHECK_THROWS_AS(sim::simulate(lb, q, {0, 1, 2, 3}, TieMode::BuyerBreaks, nullptr, nullptr),
                  sim::MissingTieDecision);
}

TEST_CASE("bruteforce allocator on disjoint buyers") {
  Graph g(GraphKind::Path, 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  std::vector<Buyer> buyers(2);
  buyers[0].demand.edge_ids = {1, 2};
  buyers[0].value = Rat(3);
  buyers[1].demand.edge_ids = {3, 4};
  buyers[1].value = Rat(4);
  Instance inst(std::move(g), std::move(buyers));
  CHECK(sim::optimal_allocation_bruteforce(inst) == Rat(7));
}
