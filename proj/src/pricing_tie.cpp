#include <algorithm>
#include <map>
#include <numeric>

#include "tollbooth/coloring.hpp"
#include "tollbooth/pricing.hpp"

namespace tollbooth::pricing {

SubInstance make_sub_instance(const Instance& inst, const std::set<int>& edge_subset,
                              GraphKind kind) {
  const Graph& g = inst.graph();
  std::map<int, int> vmap;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> edge_to_orig;
  std::map<int, int> orig_to_sub;
  for (int e : edge_subset) {
    auto [a, b] = g.edge(e);
    for (int v : {a, b})
      if (!vmap.count(v)) vmap[v] = static_cast<int>(vmap.size());
    edges.push_back({vmap[a], vmap[b]});
    edge_to_orig.push_back(e);
    orig_to_sub[e] = static_cast<int>(edge_to_orig.size());
  }
  Graph sub_graph(kind, static_cast<int>(vmap.size()), std::move(edges));
  std::vector<Buyer> buyers;
  std::vector<int> buyer_to_orig;
  for (int j = 0; j < inst.buyer_count(); ++j) {
    const Buyer& b = inst.buyer(j);
    bool inside = true;
    for (int e : b.demand.edge_ids)
      if (!edge_subset.count(e)) inside = false;
    if (!inside) continue;
    Buyer nb = b;
    nb.demand.edge_ids.clear();
    for (int e : b.demand.edge_ids) nb.demand.edge_ids.push_back(orig_to_sub[e]);
    buyers.push_back(std::move(nb));
    buyer_to_orig.push_back(j);
  }
  return {Instance(std::move(sub_graph), std::move(buyers)), std::move(edge_to_orig),
          std::move(buyer_to_orig)};
}

PricedOutcome rounding_prices(const Instance& inst, const engine::LPSolution& y_star,
                              const Allocation& y_prime) {
  for (int j : y_prime.winners)
    if (y_star.primal_y.at(j).is_zero())
      throw SupportViolation("rounding_prices: winner outside the fractional support");
  if (!y_prime.feasible(inst))
    throw SupportViolation("rounding_prices: winners not edge-disjoint");

  PricedOutcome out;
  out.prices = PriceVector(inst.edge_count());
  for (int e = 1; e <= inst.edge_count(); ++e)
    out.prices.set(e, ExtPrice(y_star.dual_p.at(e - 1)));
  out.intended_winners = y_prime.winners;
  out.guaranteed_welfare = y_prime.value(inst);
  out.ratio_bound = Rat(1);
  return out;
}

PricedOutcome price_path(const Instance& inst) {
  if (inst.graph().kind() != GraphKind::Path) throw KindError("price_path: requires a path");
  engine::LPSolution lp = engine::solve_primal_dual(inst);
  Allocation alloc;
  for (int j = 0; j < inst.buyer_count(); ++j) {
    const Rat& y = lp.primal_y[j];
    if (y != Rat(0) && y != Rat(1))
      throw std::logic_error("price_path: path polytope vertex must be integral");
    if (y == Rat(1)) alloc.winners.insert(j);
  }
  PricedOutcome out = rounding_prices(inst, lp, alloc);
  out.ratio_bound = Rat(1);
  out.note("path:integral-vertex");
  return out;
}

namespace {

// Shared star/spider core: half-integral optimum, edge-disjoint classes of
// the half-support, heaviest class joined with the integral support.
PricedOutcome price_half_integral(const Instance& inst) {
  engine::HalfIntegralSolution h = engine::half_integral_optimum(inst);
  std::array<std::vector<int>, 3> classes;  // buyer lists
  if (inst.graph().kind() == GraphKind::Star) {
    // Classes come from splitting each odd cycle into three matchings.
    std::vector<std::pair<int, int>> hedges;
    std::vector<int> hbuyer;
    std::map<int, int> vid;
    for (int j : h.halves) {
      const auto& ids = inst.buyer(j).demand.edge_ids;
      for (int e : ids)
        if (!vid.count(e)) vid[e] = static_cast<int>(vid.size());
      hedges.push_back({vid.at(ids[0]), vid.at(ids[1])});
      hbuyer.push_back(j);
    }
    auto part = color::partition_odd_cycles(hedges);
    for (int c = 0; c < 3; ++c)
      for (int ei : part[c]) classes[c].push_back(hbuyer[ei]);
  } else {
    std::vector<std::vector<int>> paths;
    for (int j : h.halves) paths.push_back(inst.buyer(j).demand.edge_ids);
    std::vector<int> cls = color::color_tree_paths(inst.graph(), paths, 2);
    for (size_t i = 0; i < paths.size(); ++i) classes[cls[i]].push_back(h.halves[i]);
  }
  int best = 0;
  Rat best_val(-1);
  for (int c = 0; c < 3; ++c) {
    Rat v(0);
    for (int j : classes[c]) v += inst.buyer(j).value;
    if (v > best_val) {
      best_val = v;
      best = c;
    }
  }
  Allocation alloc;
  for (int j : h.ones) alloc.winners.insert(j);
  for (int j : classes[best]) alloc.winners.insert(j);
  PricedOutcome out = rounding_prices(inst, h.lp, alloc);
  out.ratio_bound = Rat(3, 2);
  out.note("half-integral:class-" + std::to_string(best));
  return out;
}

}  // namespace

PricedOutcome price_star(const Instance& inst) {
  if (inst.graph().kind() != GraphKind::Star) throw KindError("price_star: requires a star");
  return price_half_integral(inst);
}

PricedOutcome price_spider(const Instance& inst) {
  if (inst.graph().kind() != GraphKind::Spider) throw KindError("price_spider: requires a spider");
  return price_half_integral(inst);
}

std::pair<std::vector<int>, std::vector<int>> tree_to_spiders(
    const Graph& graph, const std::vector<std::vector<int>>& paths) {
  // The paths must be edge-disjoint and their union a tree.
  std::set<int> used;
  std::set<int> verts;
  for (const auto& p : paths)
    for (int e : p) {
      if (!used.insert(e).second) throw NotATree("tree_to_spiders: paths share an edge");
      verts.insert(graph.edge(e).first);
      verts.insert(graph.edge(e).second);
    }
  if (used.size() + 1 != verts.size() && !used.empty())
    throw NotATree("tree_to_spiders: union is not a tree");

  // Layers of path-adjacency from the paths through an arbitrary root.
  if (paths.empty()) return {{}, {}};
  int root = graph.edge(*paths[0].begin()).first;
  auto path_verts = [&](const std::vector<int>& p) {
    std::set<int> vs;
    for (int e : p) {
      vs.insert(graph.edge(e).first);
      vs.insert(graph.edge(e).second);
    }
    return vs;
  };
  std::vector<std::set<int>> pv;
  for (const auto& p : paths) pv.push_back(path_verts(p));

  std::vector<int> layer(paths.size(), -1);
  std::set<int> frontier = {root};
  int level = 0;
  size_t assigned = 0;
  while (assigned < paths.size()) {
    std::set<int> next_frontier;
    bool any = false;
    for (size_t i = 0; i < paths.size(); ++i) {
      if (layer[i] >= 0) continue;
      bool touches = false;
      for (int v : pv[i])
        if (frontier.count(v)) touches = true;
      if (touches) {
        layer[i] = level;
        assigned++;
        any = true;
        for (int v : pv[i]) next_frontier.insert(v);
      }
    }
    if (!any) throw NotATree("tree_to_spiders: paths not connected");
    frontier = next_frontier;
    level++;
  }
  std::pair<std::vector<int>, std::vector<int>> out;
  for (size_t i = 0; i < paths.size(); ++i)
    (layer[i] % 2 == 0 ? out.first : out.second).push_back(static_cast<int>(i));
  return out;
}

namespace {

// Connected components of an edge subset; each returned as a set of edges.
std::vector<std::set<int>> edge_components(const Graph& g, const std::set<int>& edges) {
  std::map<int, std::vector<int>> at_vertex;
  for (int e : edges) {
    at_vertex[g.edge(e).first].push_back(e);
    at_vertex[g.edge(e).second].push_back(e);
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
      for (int v : {g.edge(e).first, g.edge(e).second})
        for (int e2 : at_vertex[v])
          if (!done.count(e2)) {
            done.insert(e2);
            stack.push_back(e2);
          }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

// Prices a disjoint union of spider components with the half-integral
// machinery; everything outside stays blocked. Returns the merged outcome.
PricedOutcome price_spider_forest(const Instance& inst, const std::set<int>& kept_edges,
                                  PricedOutcome out) {
  for (const auto& comp : edge_components(inst.graph(), kept_edges)) {
    SubInstance sub = make_sub_instance(inst, comp, GraphKind::Spider);
    if (sub.inst.buyer_count() == 0) continue;
    PricedOutcome piece = price_half_integral(sub.inst);
    for (int e = 1; e <= sub.inst.edge_count(); ++e)
      out.prices.set(sub.edge_to_orig[e - 1], piece.prices.at(e));
    for (int j : piece.intended_winners) out.intended_winners.insert(sub.buyer_to_orig[j]);
    out.guaranteed_welfare += piece.guaranteed_welfare;
  }
  return out;
}

}  // namespace

PricedOutcome price_tree(const Instance& inst) {
  GraphKind k = inst.graph().kind();
  if (k == GraphKind::Path) {
    PricedOutcome out = price_path(inst);
    out.ratio_bound = Rat(3);
    return out;
  }
  if (k == GraphKind::Star || k == GraphKind::Spider) {
    PricedOutcome out = price_half_integral(inst);
    out.ratio_bound = Rat(3);
    return out;
  }
  if (k != GraphKind::Tree) throw KindError("price_tree: requires a tree");

  auto [opt, alloc] = engine::optimal_allocation(inst);
  PricedOutcome out;
  out.prices = PriceVector::all_blocked(inst.edge_count());
  out.guaranteed_welfare = Rat(0);
  out.ratio_bound = Rat(3);
  if (alloc.winners.empty()) return out;

  // Per connected component of the optimal paths, keep the heavier side of
  // the spider split.
  std::set<int> opt_edges;
  for (int j : alloc.winners)
    for (int e : inst.buyer(j).demand.edge_ids) opt_edges.insert(e);
  std::set<int> kept_edges;
  for (const auto& comp : edge_components(inst.graph(), opt_edges)) {
    std::vector<int> comp_buyers;
    std::vector<std::vector<int>> comp_paths;
    for (int j : alloc.winners) {
      bool inside = comp.count(inst.buyer(j).demand.edge_ids[0]) > 0;
      if (inside) {
        comp_buyers.push_back(j);
        comp_paths.push_back(inst.buyer(j).demand.edge_ids);
      }
    }
    auto [side_a, side_b] = tree_to_spiders(inst.graph(), comp_paths);
    Rat va(0), vb(0);
    for (int i : side_a) va += inst.buyer(comp_buyers[i]).value;
    for (int i : side_b) vb += inst.buyer(comp_buyers[i]).value;
    const auto& keep = va >= vb ? side_a : side_b;
    out.note(va >= vb ? "tree:keep-even-layers" : "tree:keep-odd-layers");
    for (int i : keep)
      for (int e : comp_paths[i]) kept_edges.insert(e);
  }
  return price_spider_forest(inst, kept_edges, std::move(out));
}

PricedOutcome price_cycle(const Instance& inst) {
  if (inst.graph().kind() != GraphKind::Cycle) throw KindError("price_cycle: requires a cycle");
  int m = inst.edge_count();
  auto [opt, alloc] = engine::optimal_allocation(inst);

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(m);
  out.guaranteed_welfare = Rat(0);
  out.ratio_bound = Rat(2);
  if (alloc.winners.empty()) {
    out.note("cycle:empty");
    return out;
  }

  std::set<int> covered;
  for (int j : alloc.winners)
    for (int e : inst.buyer(j).demand.edge_ids) covered.insert(e);

  std::set<int> arc;  // edges of the path instance we delegate to
  if (alloc.winners.size() == 1) {
    // Block the complement and price inside the single optimal path.
    arc = covered;
    out.note("cycle:single-winner");
  } else if (static_cast<int>(covered.size()) < m) {
    // Some edge is uncovered: block it and price the remaining line.
    int blocked_edge = 1;
    for (int e = 1; e <= m; ++e)
      if (!covered.count(e)) blocked_edge = e;
    for (int e = 1; e <= m; ++e)
      if (e != blocked_edge) arc.insert(e);
    out.note("cycle:uncovered-edge");
  } else {
    // Full cover: drop the minimum-value winner.
    int min_j = -1;
    for (int j : alloc.winners)
      if (min_j < 0 || inst.buyer(j).value < inst.buyer(min_j).value) min_j = j;
    for (int e = 1; e <= m; ++e) arc.insert(e);
    for (int e : inst.buyer(min_j).demand.edge_ids) arc.erase(e);
    out.note("cycle:drop-min");
  }

  for (const auto& comp : edge_components(inst.graph(), arc)) {
    SubInstance sub = make_sub_instance(inst, comp, GraphKind::Path);
    if (sub.inst.buyer_count() == 0) continue;
    PricedOutcome piece = price_path(sub.inst);
    for (int e = 1; e <= sub.inst.edge_count(); ++e)
      out.prices.set(sub.edge_to_orig[e - 1], piece.prices.at(e));
    for (int j : piece.intended_winners) out.intended_winners.insert(sub.buyer_to_orig[j]);
    out.guaranteed_welfare += piece.guaranteed_welfare;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact minimum hitting set by branch and bound on the most-constrained set.

namespace {

void hs_recurse(const std::vector<std::set<int>>& sets, const std::vector<bool>& hit,
                std::set<int>& current, std::optional<std::set<int>>& best) {
  if (best && current.size() >= best->size()) return;
  // Branch on the smallest unhit set.
  int pick = -1;
  for (size_t i = 0; i < sets.size(); ++i)
    if (!hit[i] && (pick < 0 || sets[i].size() < sets[pick].size())) pick = static_cast<int>(i);
  if (pick < 0) {
    best = current;
    return;
  }
  for (int item : sets[pick]) {
    std::vector<bool> hit2 = hit;
    for (size_t i = 0; i < sets.size(); ++i)
      if (!hit2[i] && sets[i].count(item)) hit2[i] = true;
    current.insert(item);
    hs_recurse(sets, hit2, current, best);
    current.erase(item);
  }
}

}  // namespace

std::set<int> min_hitting_set(const std::vector<std::set<int>>& sets, int budget) {
  std::set<int> universe;
  for (const auto& s : sets) {
    if (s.empty()) throw std::invalid_argument("min_hitting_set: empty set cannot be hit");
    for (int x : s) universe.insert(x);
  }
  if (static_cast<int>(universe.size()) > budget)
    throw HittingSetTooLarge("min_hitting_set: item universe above budget");
  if (sets.empty()) return {};
  std::optional<std::set<int>> best;
  std::set<int> current;
  std::vector<bool> hit(sets.size(), false);
  hs_recurse(sets, hit, current, best);
  return *best;
}

}  // namespace tollbooth::pricing
