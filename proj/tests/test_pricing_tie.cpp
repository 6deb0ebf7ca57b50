#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "tollbooth/instances.hpp"
#include "tollbooth/pricing.hpp"
#include "tollbooth/rng.hpp"
#include "tollbooth/simulator.hpp"

using namespace tollbooth;

namespace {

Instance path_instance(int m, std::vector<std::pair<std::pair<int, int>, Rat>> specs) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i) edges.push_back({i, i + 1});
  Graph g(GraphKind::Path, m + 1, std::move(edges));
  std::vector<Buyer> buyers;
  for (auto& [iv, v] : specs) {
    Buyer b;
    for (int e = iv.first; e <= iv.second; ++e) b.demand.edge_ids.push_back(e);
    b.value = v;
    buyers.push_back(b);
  }
  return Instance(std::move(g), std::move(buyers));
}

// Exhaustive simulation over every order under the seller's intended-winner
// tie rule; the minimum realized welfare.
Rat exhaustive_worst(const Instance& inst, const pricing::PricedOutcome& out) {
  std::vector<int> order(inst.buyer_count());
  for (int j = 0; j < inst.buyer_count(); ++j) order[j] = j;
  std::optional<Rat> worst;
  std::sort(order.begin(), order.end());
  do {
    auto res = sim::simulate(inst, out.prices, order, TieMode::SellerBreaks,
                             &out.intended_winners, nullptr);
    if (!worst || res.welfare < *worst) worst = res.welfare;
  } while (std::next_permutation(order.begin(), order.end()));
  return *worst;
}

}  // namespace

TEST_CASE("rounding prices sell exactly the intended winners") {
  auto inst = path_instance(5, {{{1, 2}, Rat(3)}, {{3, 5}, Rat(4)}, {{2, 4}, Rat(5)}});
  auto lp = engine::solve_primal_dual(inst);
  Allocation y_prime;
  for (int j = 0; j < inst.buyer_count(); ++j)
    if (lp.primal_y[j] == Rat(1)) y_prime.winners.insert(j);
  auto out = pricing::rounding_prices(inst, lp, y_prime);
  std::vector<int> order(inst.buyer_count());
  std::iota(order.begin(), order.end(), 0);
  do {
    auto res = sim::simulate(inst, out.prices, order, TieMode::SellerBreaks,
                             &out.intended_winners, nullptr);
    CHECK(res.winners == out.intended_winners);
  } while (std::next_permutation(order.begin(), order.end()));

  Allocation empty;
  auto zero = pricing::rounding_prices(inst, lp, empty);
  CHECK(zero.guaranteed_welfare == Rat(0));
  CHECK(zero.intended_winners.empty());

  Allocation bad;
  for (int j = 0; j < inst.buyer_count(); ++j)
    if (lp.primal_y[j] == Rat(0)) bad.winners.insert(j);
  if (!bad.winners.empty())
    CHECK_THROWS_AS(pricing::rounding_prices(inst, lp, bad), pricing::SupportViolation);
}

TEST_CASE("path pricing reaches the optimum under every order") {
  {
    auto inst = path_instance(4, {{{1, 2}, Rat(3)}, {{3, 4}, Rat(4)}});
    auto out = pricing::price_path(inst);
    CHECK(out.guaranteed_welfare == Rat(7));
    CHECK(exhaustive_worst(inst, out) == Rat(7));
  }
  {
    // A long buyer versus two halves worth more together.
    auto inst = path_instance(4, {{{1, 4}, Rat(5)}, {{1, 2}, Rat(3)}, {{3, 4}, Rat(3)}});
    auto out = pricing::price_path(inst);
    CHECK(out.guaranteed_welfare == Rat(6));
    CHECK(exhaustive_worst(inst, out) == Rat(6));
  }
  {
    // Seller ties rescue the optimum on the no-tie hardness instance.
    auto inst = gen::gen_path_no_tie_lb();
    auto out = pricing::price_path(inst);
    CHECK(out.guaranteed_welfare == Rat(3));
    CHECK(exhaustive_worst(inst, out) == Rat(3));
  }
  CHECK_THROWS_AS(pricing::price_path(gen::gen_star_lb(Rat(1, 10))), KindError);
}

TEST_CASE("star pricing guarantees two thirds of the relaxation") {
  {
    auto inst = gen::gen_star_lb(Rat(1, 10));
    CHECK(engine::optimal_allocation(inst).first == Rat(3));
    auto out = pricing::price_star(inst);
    CHECK(out.guaranteed_welfare >= Rat(2));
    CHECK(exhaustive_worst(inst, out) == out.guaranteed_welfare);
  }
  for (int t = 0; t < 30; ++t) {
    auto inst = gen::gen_random(GraphKind::Star, 6, 8, 1, 10, 600 + t);
    auto out = pricing::price_star(inst);
    auto lp = engine::solve_primal_dual(inst);
    CHECK(Rat(3) * out.guaranteed_welfare >= Rat(2) * lp.objective);
    auto worst = sim::worst_case_welfare(inst, out.prices, TieMode::SellerBreaks);
    CHECK(worst.worst_welfare >= out.guaranteed_welfare);
  }
}

TEST_CASE("spider pricing matches star behavior and the two thirds bound") {
  for (int t = 0; t < 30; ++t) {
    auto inst = gen::gen_random(GraphKind::Spider, 7, 7, 1, 10, 700 + t);
    auto out = pricing::price_spider(inst);
    auto lp = engine::solve_primal_dual(inst);
    CHECK(Rat(3) * out.guaranteed_welfare >= Rat(2) * lp.objective);
    auto worst = sim::worst_case_welfare(inst, out.prices, TieMode::SellerBreaks);
    CHECK(worst.worst_welfare >= out.guaranteed_welfare);
  }
}

TEST_CASE("tree to spiders splits layers into vertex disjoint spiders") {
  // All paths through one vertex land in the first layer.
  Graph star(GraphKind::Star, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  std::vector<std::vector<int>> through = {{1, 2}, {3, 4}};
  auto [p1, p2] = pricing::tree_to_spiders(star, through);
  CHECK(p1.size() == 2);
  CHECK(p2.empty());

  // A caterpillar of three chained paths alternates layers.
  Graph path(GraphKind::Path, 7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
  std::vector<std::vector<int>> chain = {{1, 2}, {3, 4}, {5, 6}};
  auto [q1, q2] = pricing::tree_to_spiders(path, chain);
  CHECK(q1.size() + q2.size() == 3);
  CHECK(((q1 == std::vector<int>{0, 2} && q2 == std::vector<int>{1}) ||
         (q2 == std::vector<int>{0, 2} && q1 == std::vector<int>{1})));

  // Structural check on random trees: each side forms vertex-disjoint
  // spiders and the heavier side carries at least half the value.
  for (int t = 0; t < 40; ++t) {
    auto inst = gen::gen_random(GraphKind::Tree, 10, 7, 1, 10, 4200 + t);
    auto [opt, alloc] = engine::optimal_allocation(inst);
    if (alloc.winners.empty()) continue;
    // Decompose each connected component of the union separately.
    std::vector<int> winners(alloc.winners.begin(), alloc.winners.end());
    std::vector<std::vector<int>> paths;
    std::set<int> comp_edges;
    for (int j : winners)
      for (int e : inst.buyer(j).demand.edge_ids) comp_edges.insert(e);
    // Only test when the union happens to be connected.
    std::map<int, std::vector<int>> at;
    const Graph& g = inst.graph();
    for (int e : comp_edges) {
      at[g.edge(e).first].push_back(e);
      at[g.edge(e).second].push_back(e);
    }
    std::set<int> seen;
    std::vector<int> stack = {*comp_edges.begin()};
    seen.insert(*comp_edges.begin());
    while (!stack.empty()) {
      int e = stack.back();
      stack.pop_back();
      for (int v : {g.edge(e).first, g.edge(e).second})
        for (int e2 : at[v])
          if (!seen.count(e2)) {
            seen.insert(e2);
            stack.push_back(e2);
          }
    }
    if (seen.size() != comp_edges.size()) continue;
    for (int j : winners) paths.push_back(inst.buyer(j).demand.edge_ids);
    auto [s1, s2] = pricing::tree_to_spiders(g, paths);
    for (const auto& side : {s1, s2}) {
      // Vertex-disjoint spiders: every vertex of the side union has at most
      // one component, and per component at most one vertex of degree >= 3.
      std::map<int, int> degree;
      for (int i : side)
        for (int e : paths[i]) {
          degree[g.edge(e).first]++;
          degree[g.edge(e).second]++;
        }
      std::set<int> side_edges;
      for (int i : side)
        for (int e : paths[i]) CHECK(side_edges.insert(e).second);
      //

      std::map<int, std::vector<int>> adj;
      for (int e : side_edges) {
        adj[g.edge(e).first].push_back(e);
        adj[g.edge(e).second].push_back(e);
      }
      std::set<int> done;
      for (int e0 : side_edges) {
        if (done.count(e0)) continue;
        int big = 0;
        std::vector<int> st = {e0};
        done.insert(e0);
        std::set<int> comp_vs;
        while (!st.empty()) {
          int e = st.back();
          st.pop_back();
          for (int v : {g.edge(e).first, g.edge(e).second}) {
            comp_vs.insert(v);
            for (int e2 : adj[v])
              if (!done.count(e2)) {
                done.insert(e2);
                st.push_back(e2);
              }
          }
        }
        for (int v : comp_vs)
          if (static_cast<int>(adj[v].size()) >= 3) big++;
        CHECK(big <= 1);
      }
    }
    Rat v1(0), v2(0);
    for (int i : s1) v1 += inst.buyer(winners[i]).value;
    for (int i : s2) v2 += inst.buyer(winners[i]).value;
    CHECK(Rat(2) * max(v1, v2) >= v1 + v2);
  }
}

TEST_CASE("tree pricing guarantees a third of the optimum") {
  {
    // A tree that is a path delegates and keeps the optimum.
    auto inst = path_instance(4, {{{1, 2}, Rat(3)}, {{3, 4}, Rat(4)}});
    auto out = pricing::price_tree(inst);
    CHECK(out.guaranteed_welfare == Rat(7));
  }
  {
    auto inst = gen::gen_tree_d_integral(2);
    auto out = pricing::price_tree(inst);
    auto opt = engine::optimal_allocation(inst).first;
    CHECK(Rat(3) * out.guaranteed_welfare >= opt);
    auto worst = sim::worst_case_welfare(inst, out.prices, TieMode::SellerBreaks, 16);
    CHECK(worst.worst_welfare >= out.guaranteed_welfare);
  }
  for (int t = 0; t < 25; ++t) {
    auto inst = gen::gen_random(GraphKind::Tree, 10, 7, 1, 10, 4400 + t);
    auto out = pricing::price_tree(inst);
    auto opt = engine::optimal_allocation(inst).first;
    CHECK(Rat(3) * out.guaranteed_welfare >= opt);
    auto worst = sim::worst_case_welfare(inst, out.prices, TieMode::SellerBreaks);
    CHECK(worst.worst_welfare >= out.guaranteed_welfare);
  }
}

TEST_CASE("cycle pricing guarantees half the optimum") {
  {
    // Single buyer on an arc.
    auto g = Graph(GraphKind::Cycle, 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    std::vector<Buyer> buyers(1);
    buyers[0].demand.edge_ids = {2, 3};
    buyers[0].value = Rat(5);
    Instance inst(std::move(g), std::move(buyers));
    auto out = pricing::price_cycle(inst);
    CHECK(out.guaranteed_welfare == Rat(5));
  }
  {
    // Two buyers covering the whole cycle: keep the heavier.
    auto g = Graph(GraphKind::Cycle, 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    std::vector<Buyer> buyers(2);
    buyers[0].demand.edge_ids = {1, 2};
    buyers[0].value = Rat(3);
    buyers[1].demand.edge_ids = {3, 4};
    buyers[1].value = Rat(5);
    Instance inst(std::move(g), std::move(buyers));
    auto out = pricing::price_cycle(inst);
    CHECK(out.guaranteed_welfare >= Rat(5));
  }
  for (int t = 0; t < 30; ++t) {
    auto inst = gen::gen_random(GraphKind::Cycle, 7, 7, 1, 10, 4600 + t);
    auto out = pricing::price_cycle(inst);
    auto opt = engine::optimal_allocation(inst).first;
    CHECK(Rat(2) * out.guaranteed_welfare >= opt);
    auto worst = sim::worst_case_welfare(inst, out.prices, TieMode::SellerBreaks);
    CHECK(worst.worst_welfare >= out.guaranteed_welfare);
  }
}

TEST_CASE("minimum hitting set") {
  CHECK(pricing::min_hitting_set({{1}, {2}}) == std::set<int>{1, 2});
  {
    auto h = pricing::min_hitting_set({{1, 2}, {2, 3}, {3, 1}});
    CHECK(h.size() == 2);
  }
  CHECK(pricing::min_hitting_set({{7, 1}, {7, 2}, {7, 3}}).size() == 1);
  CHECK_THROWS_AS(pricing::min_hitting_set({{1}}, 0), pricing::HittingSetTooLarge);
  // Exhaustive cross-check on random families.
  Rng rng(47);
  for (int t = 0; t < 40; ++t) {
    std::vector<std::set<int>> sets;
    int k = static_cast<int>(rng.range(1, 5));
    for (int i = 0; i < k; ++i) {
      std::set<int> s;
      int sz = static_cast<int>(rng.range(1, 3));
      while (static_cast<int>(s.size()) < sz) s.insert(static_cast<int>(rng.range(1, 6)));
      sets.push_back(s);
    }
    auto h = pricing::min_hitting_set(sets);
    for (const auto& s : sets) {
      bool hit = false;
      for (int x : h)
        if (s.count(x)) hit = true;
      CHECK(hit);
    }
    // No smaller hitting set exists: try all subsets of the universe.
    std::vector<int> uni;
    for (const auto& s : sets)
      for (int x : s)
        if (std::find(uni.begin(), uni.end(), x) == uni.end()) uni.push_back(x);
    size_t best = uni.size();
    for (unsigned mask = 0; mask < (1u << uni.size()); ++mask) {
      std::set<int> cand;
      for (size_t i = 0; i < uni.size(); ++i)
        if (mask & (1u << i)) cand.insert(uni[i]);
      bool all = true;
      for (const auto& s : sets) {
        bool hit = false;
        for (int x : cand)
          if (s.count(x)) hit = true;
        if (!hit) all = false;
      }
      if (all) best = std::min(best, cand.size());
    }
    CHECK(h.size() == best);
  }
}
