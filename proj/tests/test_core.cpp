#include "doctest.h"

#include "tollbooth/graph.hpp"
#include "tollbooth/rng.hpp"
#include "tollbooth/serialization.hpp"

using namespace tollbooth;

TEST_CASE("rational arithmetic is exact and canonical") {
  Rat a(1, 3), b(1, 6);
  CHECK(a + b == Rat(1, 2));
  CHECK((a - b).str() == "1/6");
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, 4).str() == "-1/2");
  CHECK(Rat::parse("7/21") == Rat(1, 3));
  CHECK_THROWS(Rat(1, 0));

  // Associativity over random rationals.
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    Rat x(rng.range(-20, 20), rng.range(1, 9));
    Rat y(rng.range(-20, 20), rng.range(1, 9));
    Rat z(rng.range(-20, 20), rng.range(1, 9));
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
  }
}

TEST_CASE("integer roots and logs") {
  CHECK(ceil_root(16, 2) == 4);
  CHECK(ceil_root(17, 2) == 5);
  CHECK(ceil_root(27, 3) == 3);
  CHECK(ceil_root(28, 3) == 4);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(16) == 4);
  CHECK(ceil_log2(17) == 5);
}

TEST_CASE("blocked prices absorb and dominate") {
  ExtPrice b = ExtPrice::blocked();
  ExtPrice x{Rat(5)};
  CHECK((b + x).is_blocked());
  CHECK(x < b);
  CHECK(!(b < x));
  CHECK(b == ExtPrice::blocked());

  PriceVector p(3);
  p.set(1, ExtPrice(Rat(1, 2)));
  p.set(2, ExtPrice(Rat(1, 2)));
  p.set(3, ExtPrice::blocked());
  DemandPath q12{{1, 2}}, q23{{2, 3}};
  CHECK(price_of_path(p, q12) == ExtPrice(Rat(1)));
  CHECK(price_of_path(p, q23).is_blocked());
  PriceVector zero(3);
  CHECK(price_of_path(zero, q12) == ExtPrice(Rat(0)));
  CHECK_THROWS_AS(price_of_path(p, DemandPath{{4}}), std::out_of_range);
}

TEST_CASE("price_of_path is monotone in any single edge price") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    int m = 5;
    PriceVector p(m);
    for (int e = 1; e <= m; ++e) p.set(e, ExtPrice(Rat(rng.range(0, 10), 2)));
    int a = static_cast<int>(rng.range(1, m)), b = static_cast<int>(rng.range(1, m));
    if (a > b) std::swap(a, b);
    DemandPath q;
    for (int e = a; e <= b; ++e) q.edge_ids.push_back(e);
    ExtPrice before = price_of_path(p, q);
    int bump = static_cast<int>(rng.range(1, m));
    PriceVector p2 = p;
    p2.set(bump, p.at(bump) + ExtPrice(Rat(3, 2)));
    CHECK(price_of_path(p2, q) >= before);
  }
}

namespace {

Instance star_instance() {
  Graph g(GraphKind::Star, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  std::vector<Buyer> buyers(2);
  buyers[0].demand.edge_ids = {1, 2};
  buyers[0].value = Rat(3);
  buyers[1].demand.edge_ids = {3};
  buyers[1].value = Rat(1);
  return Instance(std::move(g), std::move(buyers));
}

}  // namespace

TEST_CASE("validate_instance reports violations") {
  CHECK(validate_instance(star_instance()).empty());

  {
    Graph g(GraphKind::Path, 4, {{0, 1}, {1, 2}, {2, 3}});
    std::vector<Buyer> buyers(1);
    buyers[0].demand.edge_ids = {1, 1};
    buyers[0].value = Rat(2);
    Instance bad(std::move(g), std::move(buyers));
    auto v = bad.validate();
    REQUIRE(!v.empty());
    CHECK(v[0].find("PathNotSimple") == 0);
  }
  // A spider tag with two branch vertices is refused at construction.
  CHECK_THROWS_AS(Graph(GraphKind::Spider, 7,
                        {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {3, 6}}),
                  KindError);
  // Disconnected demand path.
  {
    Graph g(GraphKind::Path, 4, {{0, 1}, {1, 2}, {2, 3}});
    std::vector<Buyer> buyers(1);
    buyers[0].demand.edge_ids = {1, 3};
    buyers[0].value = Rat(2);
    Instance bad(std::move(g), std::move(buyers));
    auto v = bad.validate();
    REQUIRE(!v.empty());
    CHECK(v[0].find("PathDisconnected") == 0);
  }
}

TEST_CASE("allocation feasibility equals the pairwise disjointness scan") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    Graph g(GraphKind::Path, 6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    std::vector<Buyer> buyers;
    int n = 5;
    for (int j = 0; j < n; ++j) {
      int a = static_cast<int>(rng.range(1, 5)), b = static_cast<int>(rng.range(1, 5));
      if (a > b) std::swap(a, b);
      Buyer bu;
      for (int e = a; e <= b; ++e) bu.demand.edge_ids.push_back(e);
      bu.value = Rat(1);
      buyers.push_back(bu);
    }
    Instance inst(std::move(g), std::move(buyers));
    Allocation alloc;
    std::vector<int> chosen;
    for (int j = 0; j < n; ++j)
      if (rng.coin()) {
        alloc.winners.insert(j);
        chosen.push_back(j);
      }
    CHECK(alloc.feasible(inst) == edge_disjoint(inst, chosen));
  }
}

TEST_CASE("instance json round trip") {
  Instance inst = star_instance();
  auto j = io::instance_to_json(inst);
  Instance back = io::instance_from_json(j);
  CHECK(back.buyer_count() == inst.buyer_count());
  CHECK(back.graph().kind() == GraphKind::Star);
  CHECK(back.buyer(0).value == Rat(3));
  CHECK(back.buyer(0).demand.edge_ids == std::vector<int>{1, 2});

  PriceVector p(2);
  p.set(1, ExtPrice(Rat(7, 3)));
  p.set(2, ExtPrice::blocked());
  PriceVector q = io::prices_from_json(io::prices_to_json(p));
  CHECK(q.at(1) == ExtPrice(Rat(7, 3)));
  CHECK(q.at(2).is_blocked());
}

TEST_CASE("outerplanar chord crossing is verified") {
  // Edges (0,2) and (1,3) cross under the circular order 0,1,2,3.
  CHECK_THROWS_AS(Graph(GraphKind::Outerplanar, 4,
                        {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {1, 3}},
                        {0, 1, 2, 3}),
                  KindError);
  // A fan is fine.
  Graph ok(GraphKind::Outerplanar, 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}, {0, 1, 2, 3});
  CHECK(ok.verify_kind().empty());
}
