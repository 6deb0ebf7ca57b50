#include "tollbooth/augmentation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "tollbooth/lp_engine.hpp"
#include "tollbooth/rng.hpp"

namespace tollbooth::aug {

AugmentedPricing price_augmented(const Instance& inst, int copies) {
  if (copies < 1) throw std::invalid_argument("price_augmented: copies must be >= 1");
  int m = inst.edge_count();
  auto [opt, alloc] = engine::optimal_allocation(inst);

  AugmentedPricing out;
  out.opt = opt;
  out.prices.copies = copies;
  out.prices.grid.assign(copies, PriceVector::all_blocked(m));
  if (alloc.winners.empty()) {
    out.certified_welfare = Rat(0);
    return out;
  }
  std::set<int> used;
  for (int j : alloc.winners)
    for (int e : inst.buyer(j).demand.edge_ids) used.insert(e);

  // Ladder r_k = ceil(m^{(k-1)/c}); copy k sells at OPT*r_k/(2m).
  std::vector<mpz_class> ladder(copies);
  for (int k = 0; k < copies; ++k) {
    mpz_class mk;
    mpz_pow_ui(mk.get_mpz_t(), mpz_class(m).get_mpz_t(), k);
    ladder[k] = ceil_root(mk, copies);
  }
  for (int k = 0; k < copies; ++k) {
    Rat price = opt * Rat(ladder[k]) / Rat(2 * m);
    for (int e : used) out.prices.grid[k].set(e, ExtPrice(price));
  }

  // Either some item sells out (its last copy already pays OPT*r_c/2m), or
  // the still-posted prices dominate three quarters of the optimum and each
  // sold copy recovers at least a rho fraction of the next one.
  Rat case1 = opt * Rat(ladder[copies - 1]) / Rat(2 * m);
  Rat rho(1);
  for (int k = 0; k + 1 < copies; ++k)
    rho = min(rho, Rat(ladder[k]) / Rat(ladder[k + 1]));
  Rat case2 = min(opt / Rat(4), rho * opt / Rat(4));
  out.certified_welfare = min(case1, case2);
  return out;
}

namespace {

mpz_class binom(int n, int k) {
  mpz_class r;
  if (k < 0 || k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::vector<std::vector<int>> subsets_of_size(int r, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int x = start; x <= r; ++x) {
      cur.push_back(x);
      rec(x + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

}  // namespace

Instance gen_congestion_lb(int c, int r, long budget) {
  if (c < 1 || r < c + 1) throw std::invalid_argument("gen_congestion_lb: need r >= c+1");
  mpz_class m_items = binom(r, c + 1);
  if (m_items > budget) throw BudgetExceeded("gen_congestion_lb: too many items");
  auto subsets = subsets_of_size(r, c + 1);
  int m = static_cast<int>(subsets.size());

  // Items as edges of a star-shaped placeholder graph; only the ids matter.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i) edges.push_back({0, i + 1});
  Graph g(GraphKind::General, m + 1, std::move(edges));

  std::vector<Buyer> buyers;
  {
    Buyer b0;
    for (int i = 1; i <= m; ++i) b0.demand.edge_ids.push_back(i);
    b0.value = Rat(binom(r, c + 1));
    b0.is_set_demand = true;
    buyers.push_back(std::move(b0));
  }
  for (int k = 1; k <= c + 1; ++k)
    for (int j = 1; j <= r; ++j) {
      Buyer b;
      for (int i = 0; i < m; ++i)
        if (std::find(subsets[i].begin(), subsets[i].end(), j) != subsets[i].end())
          b.demand.edge_ids.push_back(i + 1);
      b.value = Rat(binom(r - 1, c));
      b.is_set_demand = true;
      buyers.push_back(std::move(b));
    }
  return Instance(std::move(g), std::move(buyers));
}

std::vector<int> adversary_congestion(const Instance& inst, int c, int r,
                                      const CopyPriceVector& prices) {
  int m = inst.edge_count();
  // Buyer layout from gen_congestion_lb: 0 is the whole-set buyer, then
  // groups of r buyers per level k = 1..c+1.
  auto group_buyer = [&](int k, int j) { return 1 + (k - 1) * r + (j - 1); };

  std::vector<int> copies_sold(m, 0);
  std::vector<int> order;
  std::set<int> placed;
  auto cheapest_price = [&](const DemandPath& q) -> ExtPrice {
    ExtPrice total{Rat(0)};
    for (int e : q.edge_ids) {
      int k = copies_sold[e - 1];
      if (k >= prices.copies) return ExtPrice::blocked();
      total += prices.grid[k].at(e);
    }
    return total;
  };

  bool bailed = false;
  for (int k = 1; k <= c && !bailed; ++k) {
    int found = -1;
    for (int j = 1; j <= r; ++j) {
      int b = group_buyer(k, j);
      ExtPrice p = cheapest_price(inst.buyer(b).demand);
      if (!p.is_blocked() && p.finite() <= inst.buyer(b).value) {
        found = b;
        break;
      }
    }
    if (found < 0) {
      bailed = true;  // nobody can afford anything anymore
      break;
    }
    order.push_back(found);
    placed.insert(found);
    for (int e : inst.buyer(found).demand.edge_ids) copies_sold[e - 1]++;
  }
  for (int b = 0; b < inst.buyer_count(); ++b)
    if (!placed.count(b)) order.push_back(b);
  return order;
}

MulticopyLab gen_multicopy_lab(int c, int a, uint64_t seed) {
  if (c < 1 || a < 2) throw std::invalid_argument("gen_multicopy_lab: need c >= 1, a >= 2");
  // b = a + 2 (c+1)^{c+2} a^{c+2}
  mpz_class pow1 = 1, pow2 = 1;
  for (int i = 0; i < c + 2; ++i) {
    pow1 *= (c + 1);
    pow2 *= a;
  }
  mpz_class b_len = mpz_class(a) + 2 * pow1 * pow2;
  if (b_len > 1 << 22) throw BudgetExceeded("gen_multicopy_lab: b too large");
  long b = b_len.get_si();

  // Multigraph L_{a,b}: segment i has copies (i-1)*a + 1 .. i*a.
  std::vector<std::pair<int, int>> edges;
  for (long i = 1; i <= b; ++i)
    for (int j = 0; j < a; ++j) edges.push_back({static_cast<int>(i - 1), static_cast<int>(i)});
  Graph g(GraphKind::MultiPath, static_cast<int>(b + 1), std::move(edges), {},
          {a, static_cast<int>(b)});

  auto edge_id = [&](long seg, int copy) {  // seg 1..b, copy 1..a
    return static_cast<int>((seg - 1) * a + copy);
  };

  MulticopyLab out{Instance(Graph(GraphKind::General, 1, {}), {}), c, a, b, {}, {}, {}};
  std::vector<Buyer> buyers;
  for (int rr = 1; rr <= a; ++rr) {
    Buyer bu;
    for (long i = 1; i <= b; ++i) bu.demand.edge_ids.push_back(edge_id(i, rr));
    bu.value = Rat(1);
    out.identity_buyers.push_back(static_cast<int>(buyers.size()));
    buyers.push_back(std::move(bu));
  }

  long s_min = 1;
  while (s_min * s_min < static_cast<long>(c) * a) s_min++;

  Rng rng(seed);
  Rat val = Rat(1) + Rat(1, 100);

  std::function<void(std::vector<int>&, int)> all_subsets = [&](std::vector<int>& cur, int start) {
    if (static_cast<int>(cur.size()) >= s_min) out.admitted.push_back(cur);
    for (int x = start; x <= a; ++x) {
      cur.push_back(x);
      all_subsets(cur, x + 1);
      cur.pop_back();
    }
  };
  std::vector<int> cur;
  all_subsets(cur, 1);

  for (const auto& S : out.admitted) {
    int s = static_cast<int>(S.size());
    int rows = (c + 1) * s;
    // Rotation squares stacked c+1 times, then random balanced columns.
    std::vector<std::vector<int>> mat(rows, std::vector<int>(b));
    for (int row = 0; row < rows; ++row)
      for (int col = 0; col < s; ++col) mat[row][col] = S[(row % s + col) % s];
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      std::vector<int> column;
      for (int x : S)
        for (int t = 0; t < c + 1; ++t) column.push_back(x);
      for (long col = s; col < b; ++col) {
        rng.shuffle(column);
        for (int row = 0; row < rows; ++row) mat[row][col] = column[row];
      }
      // Every pair of rows must collide in some column.
      ok = true;
      for (int x = 0; x < rows && ok; ++x)
        for (int y = x + 1; y < rows && ok; ++y) {
          bool hit = false;
          for (long col = 0; col < b && !hit; ++col)
            if (mat[x][col] == mat[y][col]) hit = true;
          if (!hit) ok = false;
        }
    }
    if (!ok) throw BudgetExceeded("gen_multicopy_lab: property resampling exhausted");

    std::vector<int> ids;
    for (int row = 0; row < rows; ++row) {
      for (int dup = 0; dup < c; ++dup) {
        Buyer bu;
        for (long i = 1; i <= b; ++i) bu.demand.edge_ids.push_back(edge_id(i, mat[row][i - 1]));
        bu.value = val;
        ids.push_back(static_cast<int>(buyers.size()));
        buyers.push_back(std::move(bu));
      }
    }
    out.family_buyers.push_back(ids);
  }
  out.inst = Instance(std::move(g), std::move(buyers));
  return out;
}

}  // namespace tollbooth::aug
