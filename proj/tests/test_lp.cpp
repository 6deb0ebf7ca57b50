#include "doctest.h"

#include "tollbooth/instances.hpp"
#include "tollbooth/lp_engine.hpp"
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

}  // namespace

TEST_CASE("simplex solves a tiny dual pair") {
  // max 3x + 2y, x + y <= 4, x <= 2.
  lp::Problem p;
  p.add_var(Rat(3));
  p.add_var(Rat(2));
  p.add_row({Rat(1), Rat(1)}, lp::Sense::LE, Rat(4));
  p.add_row({Rat(1), Rat(0)}, lp::Sense::LE, Rat(2));
  auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == Rat(10));
  CHECK(s.x[0] == Rat(2));
  CHECK(s.x[1] == Rat(2));
  // Duals: y1 = 2, y2 = 1; dual objective equals primal.
  CHECK(s.dual[0] * Rat(4) + s.dual[1] * Rat(2) == Rat(10));
}

TEST_CASE("simplex handles equality and GE rows") {
  // max x + y, x + y = 3, x >= 1.
  lp::Problem p;
  p.add_var(Rat(1));
  p.add_var(Rat(1));
  p.add_row({Rat(1), Rat(1)}, lp::Sense::EQ, Rat(3));
  p.add_row({Rat(1), Rat(0)}, lp::Sense::GE, Rat(1));
  auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == Rat(3));

  lp::Problem infeasible;
  infeasible.add_var(Rat(1));
  infeasible.add_row({Rat(1)}, lp::Sense::GE, Rat(5));
  infeasible.add_row({Rat(1)}, lp::Sense::LE, Rat(2));
  CHECK(lp::solve(infeasible).status == lp::Status::Infeasible);

  lp::Problem unbounded;
  unbounded.add_var(Rat(1));
  unbounded.add_row({Rat(-1)}, lp::Sense::LE, Rat(0));
  CHECK(lp::solve(unbounded).status == lp::Status::Unbounded);
}

TEST_CASE("single buyer dual sums to the value") {
  auto inst = path_instance(2, {{{1, 2}, Rat(5)}});
  auto sol = engine::solve_primal_dual(inst);
  CHECK(sol.objective == Rat(5));
  CHECK(sol.primal_y[0] == Rat(1));
  CHECK(sol.dual_p[0] + sol.dual_p[1] == Rat(5));
  CHECK(engine::check_complementary_slackness(sol, inst));
}

TEST_CASE("complementary slackness detects perturbations") {
  auto inst = path_instance(3, {{{1, 1}, Rat(2)}, {{2, 3}, Rat(4)}});
  auto sol = engine::solve_primal_dual(inst);
  CHECK(engine::check_complementary_slackness(sol, inst));
  auto broken = sol;
  broken.dual_p[0] += Rat(1, 7);
  CHECK(!engine::check_complementary_slackness(broken, inst));
  engine::LPSolution zero;
  zero.primal_y.assign(2, Rat(0));
  zero.dual_p.assign(3, Rat(0));
  zero.objective = Rat(0);
  CHECK(!engine::check_complementary_slackness(zero, inst));
}

TEST_CASE("triangle of overlapping star demands is half integral") {
  Graph g(GraphKind::Star, 4, {{0, 1}, {0, 2}, {0, 3}});
  std::vector<Buyer> buyers(3);
  buyers[0].demand.edge_ids = {1, 2};
  buyers[1].demand.edge_ids = {2, 3};
  buyers[2].demand.edge_ids = {1, 3};
  for (auto& b : buyers) b.value = Rat(1);
  Instance inst(std::move(g), std::move(buyers));
  auto h = engine::half_integral_optimum(inst);
  CHECK(h.lp.objective == Rat(3, 2));
  CHECK(h.halves.size() == 3);
  CHECK(h.ones.empty());
  REQUIRE(h.odd_cycles.size() == 1);
  CHECK(h.odd_cycles[0].size() == 3);
}

TEST_CASE("edge disjoint star demands stay integral") {
  Graph g(GraphKind::Star, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  std::vector<Buyer> buyers(2);
  buyers[0].demand.edge_ids = {1, 2};
  buyers[0].value = Rat(2);
  buyers[1].demand.edge_ids = {3, 4};
  buyers[1].value = Rat(5);
  Instance inst(std::move(g), std::move(buyers));
  auto h = engine::half_integral_optimum(inst);
  CHECK(h.halves.empty());
  CHECK(h.ones.size() == 2);
  CHECK(h.lp.objective == Rat(7));
}

TEST_CASE("spider half integral optimum matches the lp objective") {
  // Three legs of two edges; demands crossing the center pairwise.
  Graph g(GraphKind::Spider, 7, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}});
  std::vector<Buyer> buyers(3);
  buyers[0].demand.edge_ids = {1, 3};
  buyers[1].demand.edge_ids = {3, 5};
  buyers[2].demand.edge_ids = {1, 5};
  for (auto& b : buyers) b.value = Rat(1);
  Instance inst(std::move(g), std::move(buyers));
  auto plain = engine::solve_primal_dual(inst);
  auto h = engine::half_integral_optimum(inst);
  CHECK(h.lp.objective == plain.objective);
  for (const Rat& y : h.lp.primal_y)
    CHECK((y == Rat(0) || y == Rat(1, 2) || y == Rat(1)));
  CHECK(engine::check_complementary_slackness(h.lp, inst));
}

TEST_CASE("random path optima agree with the exhaustive oracle") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    int m = 5, n = 5;
    std::vector<std::pair<std::pair<int, int>, Rat>> specs;
    for (int j = 0; j < n; ++j) {
      int a = static_cast<int>(rng.range(1, m)), b = static_cast<int>(rng.range(1, m));
      if (a > b) std::swap(a, b);
      specs.push_back({{a, b}, Rat(rng.range(1, 10))});
    }
    auto inst = path_instance(m, specs);
    auto [opt, alloc] = engine::optimal_allocation(inst);
    CHECK(opt == sim::optimal_allocation_bruteforce(inst));
    CHECK(alloc.feasible(inst));
    CHECK(alloc.value(inst) == opt);
    // The LP bound holds with equality on paths.
    CHECK(engine::solve_primal_dual(inst).objective == opt);
  }
}

TEST_CASE("tree and cycle optima agree with the exhaustive oracle") {
  for (int t = 0; t < 200; ++t) {
    auto tree = gen::gen_random(GraphKind::Tree, 8, 6, 1, 10, 100 + t);
    auto [opt_t, alloc_t] = engine::optimal_allocation(tree);
    CHECK(opt_t == sim::optimal_allocation_bruteforce(tree));
    CHECK(alloc_t.feasible(tree));
    CHECK(alloc_t.value(tree) == opt_t);

    auto cyc = gen::gen_random(GraphKind::Cycle, 6, 6, 1, 10, 500 + t);
    auto [opt_c, alloc_c] = engine::optimal_allocation(cyc);
    CHECK(opt_c == sim::optimal_allocation_bruteforce(cyc));
    CHECK(alloc_c.feasible(cyc));
    CHECK(alloc_c.value(cyc) == opt_c);

    auto spider = gen::gen_random(GraphKind::Spider, 7, 6, 1, 10, 900 + t);
    auto [opt_s, alloc_s] = engine::optimal_allocation(spider);
    CHECK(opt_s == sim::optimal_allocation_bruteforce(spider));

    auto general = gen::gen_random(GraphKind::General, 8, 6, 1, 10, 1300 + t);
    auto [opt_g, alloc_g] = engine::optimal_allocation(general);
    CHECK(opt_g == sim::optimal_allocation_bruteforce(general));
  }
}

TEST_CASE("lp objective dominates the integral optimum") {
  for (int t = 0; t < 50; ++t) {
    auto inst = gen::gen_random(GraphKind::Tree, 7, 6, 1, 10, 40 + t);
    CHECK(engine::solve_primal_dual(inst).objective >= engine::optimal_allocation(inst).first);
  }
}

TEST_CASE("fractional double star has the announced lp support") {
  auto inst = gen::gen_tree_d_integral(3);
  auto sol = engine::solve_primal_dual(inst);
  // Three cross buyers carry 1/3, the two pairing buyers 2/3.
  for (int j = 0; j < 3; ++j) CHECK(sol.primal_y[j] == Rat(1, 3));
  for (int j = 3; j < 5; ++j) CHECK(sol.primal_y[j] == Rat(2, 3));
  // The integral optimum is strictly below the fractional one.
  CHECK(engine::optimal_allocation(inst).first < sol.objective);

  auto inst2 = gen::gen_tree_d_integral(2);
  auto sol2 = engine::solve_primal_dual(inst2);
  for (int j = 0; j < 2; ++j) CHECK(sol2.primal_y[j] == Rat(1, 2));

  auto inst4 = gen::gen_tree_d_integral(4);
  auto sol4 = engine::solve_primal_dual(inst4);
  for (int j = 0; j < 4; ++j) CHECK(sol4.primal_y[j] == Rat(1, 4));
}
