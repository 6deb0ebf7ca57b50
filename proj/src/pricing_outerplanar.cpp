#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "tollbooth/coloring.hpp"
#include "tollbooth/no_tie.hpp"
#include "tollbooth/pricing.hpp"

namespace tollbooth::pricing {

namespace {

std::vector<int> positions_of(const Graph& g) {
  std::vector<int> pos(g.vertex_count(), -1);
  const auto& order = g.circular_order();
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  return pos;
}

}  // namespace

BalancedCut find_balanced_cut(const Instance& inst) {
  const Graph& g = inst.graph();
  if (g.kind() != GraphKind::Outerplanar)
    throw KindError("find_balanced_cut: requires an outerplanar graph");
  int n = g.vertex_count();
  std::vector<int> pos = positions_of(g);
  const auto& order = g.circular_order();
  long limit = 2 * std::max(1L, ceil_log2(mpz_class(std::max(2, n))));

  // A separating curve enters and leaves through two gaps of the circular
  // order; it crosses exactly the chords with one endpoint strictly between.
  // Scan all gap pairs incrementally.
  std::vector<std::vector<int>> edges_at(n);
  for (int e = 1; e <= g.edge_count(); ++e) {
    edges_at[g.edge(e).first].push_back(e);
    edges_at[g.edge(e).second].push_back(e);
  }
  BalancedCut cut;
  for (int start = 0; start < n && !cut.found; ++start) {
    std::vector<bool> in_s(n, false);
    int crossing = 0, size_s = 0;
    for (int len = 1; len <= n - 1; ++len) {
      int v = order[(start + len) % n];
      in_s[v] = true;
      size_s++;
      for (int e : edges_at[v]) {
        int w = g.other_end(e, v);
        crossing += in_s[w] ? -1 : 1;
      }
      if (crossing <= limit && 10 * size_s <= 9 * n && 10 * (n - size_s) <= 9 * n) {
        cut.found = true;
        for (int x = 0; x < n; ++x) (in_s[x] ? cut.side_s : cut.side_t).insert(x);
        for (int e = 1; e <= g.edge_count(); ++e) {
          auto [a, b] = g.edge(e);
          if (in_s[a] != in_s[b]) cut.crossing_edges.push_back(e);
        }
        break;
      }
    }
  }
  if (cut.found) return cut;

  // No balanced small cut: all edges separating at least a tenth of the
  // vertices on both sides must share an endpoint, the hub.
  std::vector<int> good;
  for (int e = 1; e <= g.edge_count(); ++e) {
    auto [a, b] = g.edge(e);
    int d = std::abs(pos[a] - pos[b]);
    int side = std::min(d, n - d);
    if (10 * side >= n) good.push_back(e);
  }
  if (good.empty()) {
    // Degenerate small graph: fall back to the highest-degree vertex.
    int hub = 0;
    for (int v = 0; v < n; ++v)
      if (g.degree(v) > g.degree(hub)) hub = v;
    cut.hub = hub;
    return cut;
  }
  auto [a0, b0] = g.edge(good[0]);
  for (int candidate : {a0, b0}) {
    bool all = true;
    for (int e : good) {
      auto [a, b] = g.edge(e);
      if (a != candidate && b != candidate) all = false;
    }
    if (all) {
      cut.hub = candidate;
      return cut;
    }
  }
  throw std::logic_error("find_balanced_cut: no cut and no common hub");
}

namespace {

struct Partial {
  std::map<int, ExtPrice> prices;  // original edge id -> price
  std::set<int> winners;           // original buyer ids
  Rat certified;
  std::vector<std::string> notes;
};

Partial merge(Partial a, Partial b) {
  for (auto& [e, p] : b.prices) a.prices[e] = p;
  for (int w : b.winners) a.winners.insert(w);
  a.certified += b.certified;
  for (auto& s : b.notes) a.notes.push_back(std::move(s));
  return a;
}

class OuterplanarPricer {
 public:
  OuterplanarPricer(const Instance& inst, TieMode mode)
      : inst_(inst), g_(inst.graph()), mode_(mode) {}

  Partial run() {
    std::set<int> all;
    for (int e = 1; e <= g_.edge_count(); ++e) all.insert(e);
    return solve_edges(all, 0);
  }

 private:
  // Buyers fully inside the edge set.
  std::vector<int> buyers_inside(const std::set<int>& edges) const {
    std::vector<int> out;
    for (int j = 0; j < inst_.buyer_count(); ++j) {
      bool inside = true;
      for (int e : inst_.buyer(j).demand.edge_ids)
        if (!edges.count(e)) inside = false;
      if (inside) out.push_back(j);
    }
    return out;
  }

  std::vector<std::set<int>> components(const std::set<int>& edges) const {
    std::map<int, std::vector<int>> at;
    for (int e : edges) {
      at[g_.edge(e).first].push_back(e);
      at[g_.edge(e).second].push_back(e);
    }
    std::set<int> done;
    std::vector<std::set<int>> comps;
    for (int e0 : edges) {
      if (done.count(e0)) continue;
      std::set<int> comp;
      std::vector<int> stack = {e0};
      done.insert(e0);
      while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        comp.insert(e);
        for (int v : {g_.edge(e).first, g_.edge(e).second})
          for (int e2 : at[v])
            if (!done.count(e2)) {
              done.insert(e2);
              stack.push_back(e2);
            }
      }
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  // Outerplanar sub-instance over an edge subset, keeping the inherited
  // circular order.
  SubInstance sub_outerplanar(const std::set<int>& edges) const {
    std::vector<int> vs;
    std::set<int> vset;
    for (int v : g_.circular_order()) {
      bool touched = false;
      for (int e : edges) {
        auto [a, b] = g_.edge(e);
        if (a == v || b == v) touched = true;
      }
      if (touched && !vset.count(v)) {
        vs.push_back(v);
        vset.insert(v);
      }
    }
    std::map<int, int> vmap;
    for (size_t i = 0; i < vs.size(); ++i) vmap[vs[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> sub_edges;
    std::vector<int> edge_to_orig;
    std::map<int, int> orig_to_sub;
    for (int e : edges) {
      auto [a, b] = g_.edge(e);
      sub_edges.push_back({vmap[a], vmap[b]});
      edge_to_orig.push_back(e);
      orig_to_sub[e] = static_cast<int>(edge_to_orig.size());
    }
    std::vector<int> circ(vs.size());
    std::iota(circ.begin(), circ.end(), 0);
    Graph sg(GraphKind::Outerplanar, static_cast<int>(vs.size()), std::move(sub_edges),
             std::move(circ));
    std::vector<Buyer> buyers;
    std::vector<int> buyer_to_orig;
    for (int j : buyers_inside(edges)) {
      Buyer nb = inst_.buyer(j);
      for (int& e : nb.demand.edge_ids) e = orig_to_sub[e];
      buyers.push_back(std::move(nb));
      buyer_to_orig.push_back(j);
    }
    return {Instance(std::move(sg), std::move(buyers)), std::move(edge_to_orig),
            std::move(buyer_to_orig)};
  }

  bool is_disjoint_paths(const std::set<int>& edges) const {
    std::map<int, int> deg;
    for (int e : edges) {
      deg[g_.edge(e).first]++;
      deg[g_.edge(e).second]++;
    }
    for (auto [v, d] : deg)
      if (d > 2) return false;
    // No cycles: edges == vertices - components.
    int verts = static_cast<int>(deg.size());
    return static_cast<int>(edges.size()) + static_cast<int>(components(edges).size()) == verts;
  }

  Partial price_paths_exactly(const std::set<int>& edges) const {
    Partial out;
    for (const auto& comp : components(edges)) {
      SubInstance sub = make_sub_instance(inst_, comp, GraphKind::Path);
      if (sub.inst.buyer_count() == 0) continue;
      PricedOutcome piece = mode_ == TieMode::SellerBreaks ? price_path(sub.inst)
                                                           : notie::price_path_no_tie(sub.inst);
      for (int e = 1; e <= sub.inst.edge_count(); ++e)
        if (!piece.prices.at(e).is_blocked())
          out.prices[sub.edge_to_orig[e - 1]] = piece.prices.at(e);
      for (int j : piece.intended_winners) out.winners.insert(sub.buyer_to_orig[j]);
      out.certified += piece.guaranteed_welfare;
    }
    out.notes.push_back("outerplanar:leaf-paths");
    return out;
  }

  // Best single optimal path that uses one of the given edges, priced alone.
  Partial price_best_path_through(const std::vector<int>& opt_buyers,
                                  const std::set<int>& through) const {
    Partial out;
    int best = -1;
    for (int j : opt_buyers) {
      bool hits = false;
      for (int e : inst_.buyer(j).demand.edge_ids)
        if (through.count(e)) hits = true;
      if (hits && (best < 0 || inst_.buyer(j).value > inst_.buyer(best).value)) best = j;
    }
    if (best < 0) return out;
    std::set<int> path_edges = inst_.buyer(best).demand.edge_set();
    SubInstance sub = make_sub_instance(inst_, path_edges, GraphKind::Path);
    PricedOutcome piece = mode_ == TieMode::SellerBreaks ? price_path(sub.inst)
                                                         : notie::price_path_no_tie(sub.inst);
    for (int e = 1; e <= sub.inst.edge_count(); ++e)
      if (!piece.prices.at(e).is_blocked())
        out.prices[sub.edge_to_orig[e - 1]] = piece.prices.at(e);
    for (int j : piece.intended_winners) out.winners.insert(sub.buyer_to_orig[j]);
    out.certified = piece.guaranteed_welfare;
    out.notes.push_back("outerplanar:single-crossing-path");
    return out;
  }

  Partial solve_edges(const std::set<int>& edges, int depth) {
    Partial total;
    for (const auto& comp : components(edges)) {
      Partial part = solve_component(comp, depth);
      total = merge(std::move(total), std::move(part));
    }
    return total;
  }

  Partial solve_component(const std::set<int>& comp, int depth) {
    if (buyers_inside(comp).empty()) return {};
    if (depth > 64) throw std::logic_error("price_outerplanar: recursion too deep");
    if (is_disjoint_paths(comp)) return price_paths_exactly(comp);

    SubInstance sub = sub_outerplanar(comp);
    auto [sub_opt, sub_alloc] = engine::optimal_allocation(sub.inst, 1 << 20);
    std::vector<int> opt_buyers;
    for (int j : sub_alloc.winners) opt_buyers.push_back(sub.buyer_to_orig[j]);

    BalancedCut cut = find_balanced_cut(sub.inst);
    if (cut.found) {
      std::set<int> crossing;
      for (int e : cut.crossing_edges) crossing.insert(sub.edge_to_orig[e - 1]);
      Partial a = price_best_path_through(opt_buyers, crossing);
      std::set<int> rest = comp;
      for (int e : crossing) rest.erase(e);
      Partial b = solve_edges(rest, depth + 1);
      b.notes.push_back("outerplanar:cut");
      return a.certified >= b.certified ? a : b;
    }

    int hub = cut.hub;
    // Map the hub back to the original vertex id.
    int orig_hub = -1;
    {
      std::vector<int> vs;
      std::set<int> vset;
      for (int v : g_.circular_order()) {
        bool touched = false;
        for (int e : comp) {
          auto [x, y] = g_.edge(e);
          if (x == v || y == v) touched = true;
        }
        if (touched && !vset.count(v)) {
          vs.push_back(v);
          vset.insert(v);
        }
      }
      orig_hub = vs.at(hub);
    }

    // Case 1: drop the hub's edges and recurse.
    std::set<int> without_hub = comp;
    for (int e : comp) {
      auto [a, b] = g_.edge(e);
      if (a == orig_hub || b == orig_hub) without_hub.erase(e);
    }
    Partial c1 = solve_edges(without_hub, depth + 1);
    c1.notes.push_back("outerplanar:hub-dropped");

    // Case 2: keep a spider of hub-crossing optimal paths.
    Partial c2 = hub_spider(comp, orig_hub, opt_buyers);

    return c1.certified >= c2.certified ? c1 : c2;
  }

  Partial hub_spider(const std::set<int>& comp, int hub, const std::vector<int>& opt_buyers) {
    // Optimal paths through the hub.
    std::vector<int> through;
    for (int j : opt_buyers) {
      bool hits = false;
      for (int e : inst_.buyer(j).demand.edge_ids) {
        auto [a, b] = g_.edge(e);
        if (a == hub || b == hub) hits = true;
      }
      if (hits) through.push_back(j);
    }
    if (through.empty()) return {};

    // Positions on the circular order cut at the hub.
    std::vector<int> pos(g_.vertex_count(), -1);
    {
      const auto& order = g_.circular_order();
      int start = 0;
      for (size_t i = 0; i < order.size(); ++i)
        if (order[i] == hub) start = static_cast<int>(i);
      int idx = 0;
      for (int i = 1; i <= static_cast<int>(order.size()); ++i) {
        int v = order[(start + i) % order.size()];
        if (v != hub) pos[v] = idx++;
      }
    }
    // Hub neighbors in position order bound the sectors.
    std::vector<int> nbr;
    for (int e : comp) {
      auto [a, b] = g_.edge(e);
      if (a == hub) nbr.push_back(b);
      if (b == hub) nbr.push_back(a);
    }
    std::sort(nbr.begin(), nbr.end(), [&](int x, int y) { return pos[x] < pos[y]; });
    nbr.erase(std::unique(nbr.begin(), nbr.end()), nbr.end());
    int r = static_cast<int>(nbr.size());
    auto boundary_index = [&](int v) {  // 1-based index among hub neighbors
      for (int i = 0; i < r; ++i)
        if (nbr[i] == v) return i + 1;
      return -1;
    };
    // Sector of a non-hub edge: the gap between consecutive hub neighbors its
    // span falls into (0..r).
    auto sector_of = [&](int e) {
      auto [a, b] = g_.edge(e);
      int lo = std::min(pos[a], pos[b]), hi = std::max(pos[a], pos[b]);
      int s = 0;
      while (s < r && pos[nbr[s]] < lo) s++;
      // The edge must not straddle a hub neighbor strictly.
      if (s < r && pos[nbr[s]] < hi && pos[nbr[s]] > lo)
        throw std::logic_error("hub_spider: edge straddles a hub edge");
      return s;
    };

    // Interval family per path: cells over boundary indices 0..r+1; sector s
    // covers cells [s, s+1]; the doubling maps cell c to line edge 2c+1 so
    // families conflict exactly when they share a cell.
    std::vector<std::vector<std::pair<int, int>>> families;
    for (int j : through) {
      std::vector<std::pair<int, int>> cells;
      // Segments of the path away from the hub.
      std::vector<std::vector<int>> segs(1);
      for (int e : inst_.buyer(j).demand.edge_ids) {
        auto [a, b] = g_.edge(e);
        if (a == hub || b == hub) {
          if (!segs.back().empty()) segs.push_back({});
          // Hub edge endpoint is a boundary vertex on its own.
          int t = boundary_index(a == hub ? b : a);
          cells.push_back({t, t});
        } else {
          segs.back().push_back(e);
        }
      }
      for (const auto& seg : segs) {
        if (seg.empty()) continue;
        int lo = r + 2, hi = -1;
        for (int e : seg) {
          int s = sector_of(e);
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        cells.push_back({lo, hi + 1});
      }
      // Merge overlapping cell intervals, keep at most k of them.
      std::sort(cells.begin(), cells.end());
      std::vector<std::pair<int, int>> merged;
      for (auto [a, b] : cells) {
        if (!merged.empty() && a <= merged.back().second + 0) {
          merged.back().second = std::max(merged.back().second, b);
        } else {
          merged.push_back({a, b});
        }
      }
      std::vector<std::pair<int, int>> doubled;
      for (auto [a, b] : merged) doubled.push_back({2 * a + 1, 2 * b + 1});
      families.push_back(doubled);
    }
    int line_length = 2 * (r + 2) + 1;
    int kk = 0;
    std::vector<int> load(line_length + 1, 0);
    for (const auto& f : families) {
      kk = std::max(kk, static_cast<int>(f.size()));
      for (auto [a, b] : f)
        for (int e = a; e <= b; ++e) load[e]++;
    }
    int rr = 2;
    for (int e = 1; e <= line_length; ++e) rr = std::max(rr, load[e]);
    std::vector<int> cls = color::interval_family_coloring(line_length, families,
                                                           std::max(1, kk), rr);
    int num_classes = *std::max_element(cls.begin(), cls.end()) + 1;
    int best_class = 0;
    Rat best_val(-1);
    for (int c = 0; c < num_classes; ++c) {
      Rat v(0);
      for (size_t i = 0; i < cls.size(); ++i)
        if (cls[i] == c) v += inst_.buyer(through[i]).value;
      if (v > best_val) {
        best_val = v;
        best_class = c;
      }
    }
    std::set<int> spider_edges;
    for (size_t i = 0; i < cls.size(); ++i)
      if (cls[i] == best_class)
        for (int e : inst_.buyer(through[i]).demand.edge_ids) spider_edges.insert(e);

    Partial out;
    for (const auto& part : components(spider_edges)) {
      SubInstance sub = make_sub_instance(inst_, part, GraphKind::Spider);
      if (sub.inst.buyer_count() == 0) continue;
      PricedOutcome piece = mode_ == TieMode::SellerBreaks
                                ? price_spider(sub.inst)
                                : notie::price_spider_no_tie(sub.inst, Rat(1, 10));
      for (int e = 1; e <= sub.inst.edge_count(); ++e)
        if (!piece.prices.at(e).is_blocked())
          out.prices[sub.edge_to_orig[e - 1]] = piece.prices.at(e);
      for (int j : piece.intended_winners) out.winners.insert(sub.buyer_to_orig[j]);
      out.certified += piece.guaranteed_welfare;
    }
    out.notes.push_back("outerplanar:hub-spider");
    return out;
  }

  const Instance& inst_;
  const Graph& g_;
  TieMode mode_;
};

}  // namespace

PricedOutcome price_outerplanar(const Instance& inst, TieMode mode) {
  if (inst.graph().kind() != GraphKind::Outerplanar)
    throw KindError("price_outerplanar: requires an outerplanar graph");
  OuterplanarPricer pricer(inst, mode);
  Partial part = pricer.run();

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(inst.edge_count());
  for (auto& [e, p] : part.prices) out.prices.set(e, p);
  out.intended_winners = part.winners;
  out.guaranteed_welfare = part.certified;
  long lg = 1 + ceil_log2(mpz_class(std::max(2, inst.edge_count())));
  Rat denom = Rat(lg * lg);
  auto [opt, alloc] = engine::optimal_allocation(inst, 1 << 20);
  if (part.certified > Rat(0)) {
    out.ratio_bound = opt / part.certified;
    out.note("outerplanar:C=" + (out.ratio_bound / denom).str());
  } else {
    out.ratio_bound = denom;
  }
  for (auto& s : part.notes) out.trace.push_back(s);
  return out;
}

}  // namespace tollbooth::pricing
