#include "tollbooth/lp_engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace tollbooth::engine {

namespace {

lp::Problem allocation_lp(const Instance& inst, const std::optional<Rat>& shift) {
  lp::Problem p;
  int n = inst.buyer_count();
  int m = inst.edge_count();
  for (int j = 0; j < n; ++j) {
    Rat c = inst.buyer(j).value;
    if (shift) c += *shift;
    p.add_var(c);
  }
  for (int e = 1; e <= m; ++e) {
    std::vector<Rat> row(n, Rat(0));
    for (int j = 0; j < n; ++j)
      for (int id : inst.buyer(j).demand.edge_ids)
        if (id == e) row[j] = Rat(1);
    p.add_row(std::move(row), lp::Sense::LE, Rat(1));
  }
  return p;
}

}  // namespace

Rat default_objective_shift(const Instance& inst) {
  mpz_class max_den = 1;
  for (const auto& b : inst.buyers()) max_den = std::max(max_den, b.value.den());
  long n = std::max(1, inst.buyer_count());
  mpz_class den = mpz_class(n * n) * max_den;
  return Rat(1) / Rat(den);
}

LPSolution solve_primal_dual(const Instance& inst, const std::optional<Rat>& objective_shift) {
  lp::Problem p = allocation_lp(inst, objective_shift);
  lp::Solution s = lp::solve(p);
  if (s.status != lp::Status::Optimal)
    throw std::logic_error("solve_primal_dual: allocation LP must be solvable");

  LPSolution out;
  out.primal_y = s.x;
  out.dual_p = s.dual;
  out.basis = s.basis;
  out.objective = Rat(0);
  for (int j = 0; j < inst.buyer_count(); ++j)
    out.objective += inst.buyer(j).value * s.x[j];

  if (objective_shift) {
    // Pair the shifted primal with a dual for the unshifted values.
    LPSolution plain = solve_primal_dual(inst, std::nullopt);
    out.dual_p = plain.dual_p;
    return out;
  }
  if (!check_complementary_slackness(out, inst))
    throw std::logic_error("solve_primal_dual: complementary slackness violated");
  return out;
}

bool check_complementary_slackness(const LPSolution& sol, const Instance& inst) {
  int n = inst.buyer_count();
  int m = inst.edge_count();
  if (static_cast<int>(sol.primal_y.size()) != n || static_cast<int>(sol.dual_p.size()) != m)
    return false;
  std::vector<Rat> load(m, Rat(0));
  Rat primal(0);
  for (int j = 0; j < n; ++j) {
    const Rat& y = sol.primal_y[j];
    if (y < Rat(0) || y > Rat(1)) return false;
    for (int e : inst.buyer(j).demand.edge_ids) load[e - 1] += y;
    primal += inst.buyer(j).value * y;
  }
  Rat dual(0);
  for (int e = 0; e < m; ++e) {
    if (load[e] > Rat(1) || sol.dual_p[e] < Rat(0)) return false;
    dual += sol.dual_p[e];
  }
  for (int j = 0; j < n; ++j) {
    Rat pq = sol.dual_price(inst.buyer(j).demand);
    if (pq < inst.buyer(j).value) return false;  // dual feasibility
    if (sol.primal_y[j] > Rat(0) && pq != inst.buyer(j).value) return false;
  }
  for (int e = 0; e < m; ++e)
    if (sol.dual_p[e] > Rat(0) && load[e] != Rat(1)) return false;
  return primal == dual && primal == sol.objective;
}

// ---------------------------------------------------------------------------
// Combinatorial optima.

namespace {

// Lexicographic score: maximize value, then the configured refinements
// (fewer covered edges binds the dual prices, more winners drives the
// replacement arguments of the no-tie constructions).
struct Score {
  Rat value;
  long cover = 0;
  long count = 0;
};

enum class Mode { Plain, CoverThenCount, CountThenCover };

int cmp(const Score& a, const Score& b, Mode mode) {
  if (a.value != b.value) return a.value < b.value ? -1 : 1;
  switch (mode) {
    case Mode::Plain: return 0;
    case Mode::CoverThenCount:
      if (a.cover != b.cover) return a.cover < b.cover ? 1 : -1;
      if (a.count != b.count) return a.count < b.count ? -1 : 1;
      return 0;
    case Mode::CountThenCover:
      if (a.count != b.count) return a.count < b.count ? -1 : 1;
      if (a.cover != b.cover) return a.cover < b.cover ? 1 : -1;
      return 0;
  }
  return 0;
}

Score add(const Score& a, const Score& b) {
  return {a.value + b.value, a.cover + b.cover, a.count + b.count};
}

Score buyer_score(const Instance& inst, int j) {
  return {inst.buyer(j).value, static_cast<long>(inst.buyer(j).demand.edge_ids.size()), 1};
}

struct LineView {
  std::vector<int> order;        // position (1-based) -> edge id
  std::vector<int> pos_of_edge;  // edge id -> position, 0 if absent
};

LineView line_view(const Graph& g) {
  LineView lv;
  lv.pos_of_edge.assign(g.edge_count() + 1, 0);
  if (g.edge_count() == 0) return lv;
  int start = -1;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 1) { start = v; break; }
  if (start < 0) throw KindError("line_view: not a path");
  int cur = start, prev_edge = -1;
  while (true) {
    int next_edge = -1;
    for (int e : g.incident(cur))
      if (e != prev_edge) next_edge = e;
    if (next_edge < 0) break;
    lv.order.push_back(next_edge);
    lv.pos_of_edge[next_edge] = static_cast<int>(lv.order.size());
    cur = g.other_end(next_edge, cur);
    prev_edge = next_edge;
  }
  return lv;
}

// Weighted interval scheduling over buyers that map to contiguous intervals.
std::pair<Score, std::vector<int>> interval_dp(const Instance& inst, const LineView& lv,
                                               const std::vector<int>& buyers, Mode mode) {
  int m = static_cast<int>(lv.order.size());
  struct Item { int lo, hi, j; };
  std::vector<std::vector<Item>> ending(m + 1);
  for (int j : buyers) {
    int lo = m + 1, hi = 0;
    for (int e : inst.buyer(j).demand.edge_ids) {
      int p = lv.pos_of_edge.at(e);
      if (p == 0) throw std::logic_error("interval_dp: buyer off the line");
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    ending[hi].push_back({lo, hi, j});
  }
  std::vector<Score> f(m + 1);
  std::vector<std::pair<int, int>> choice(m + 1, {-1, 0});
  for (int i = 1; i <= m; ++i) {
    f[i] = f[i - 1];
    choice[i] = {-1, i - 1};
    for (const auto& it : ending[i]) {
      Score cand = add(f[it.lo - 1], buyer_score(inst, it.j));
      if (cmp(cand, f[i], mode) > 0) {
        f[i] = cand;
        choice[i] = {it.j, it.lo - 1};
      }
    }
  }
  std::vector<int> picked;
  for (int i = m; i > 0; i = choice[i].second)
    if (choice[i].first >= 0) picked.push_back(choice[i].first);
  return {f[m], picked};
}

std::pair<Score, std::vector<int>> path_optimum(const Instance& inst, Mode mode) {
  LineView lv = line_view(inst.graph());
  std::vector<int> all(inst.buyer_count());
  std::iota(all.begin(), all.end(), 0);
  return interval_dp(inst, lv, all, mode);
}

// Cycle: either edge 1 stays uncovered or exactly one winner covers it.
std::pair<Score, std::vector<int>> cycle_optimum(const Instance& inst, Mode mode) {
  const Graph& g = inst.graph();
  int m = g.edge_count();

  std::vector<int> around;  // the cycle's edges in rotational order
  {
    int cur = g.edge(1).first, prev = -1;
    for (int steps = 0; steps < m; ++steps) {
      int nxt = -1;
      for (int e : g.incident(cur))
        if (e != prev) nxt = e;
      around.push_back(nxt);
      cur = g.other_end(nxt, cur);
      prev = nxt;
    }
  }

  auto arc_view = [&](const std::set<int>& removed) {
    LineView lv;
    lv.pos_of_edge.assign(m + 1, 0);
    std::vector<int> rot = around;
    int cut = -1;
    for (size_t i = 0; i < rot.size(); ++i)
      if (removed.count(rot[i])) cut = static_cast<int>(i);
    if (cut >= 0) std::rotate(rot.begin(), rot.begin() + cut + 1, rot.end());
    for (int e : rot) {
      if (removed.count(e)) continue;
      lv.order.push_back(e);
      lv.pos_of_edge[e] = static_cast<int>(lv.order.size());
    }
    return lv;
  };

  auto contiguous = [&](const std::vector<int>& candidates, const LineView& lv) {
    std::vector<int> ok;
    for (int j : candidates) {
      int lo = m + 1, hi = 0, cnt = 0;
      bool off = false;
      for (int e : inst.buyer(j).demand.edge_ids) {
        int p = lv.pos_of_edge.at(e);
        if (p == 0) { off = true; break; }
        lo = std::min(lo, p);
        hi = std::max(hi, p);
        cnt++;
      }
      if (!off && hi - lo + 1 == cnt) ok.push_back(j);
    }
    return ok;
  };

  std::vector<int> all(inst.buyer_count());
  std::iota(all.begin(), all.end(), 0);
  auto uses_edge1 = [&](int j) {
    for (int e : inst.buyer(j).demand.edge_ids)
      if (e == 1) return true;
    return false;
  };

  LineView base = arc_view({1});
  std::vector<int> avoid1;
  for (int j : all)
    if (!uses_edge1(j)) avoid1.push_back(j);
  auto best = interval_dp(inst, base, contiguous(avoid1, base), mode);

  for (int j : all) {
    if (!uses_edge1(j)) continue;
    std::set<int> removed(inst.buyer(j).demand.edge_ids.begin(),
                          inst.buyer(j).demand.edge_ids.end());
    LineView lv = arc_view(removed);
    std::vector<int> rest;
    for (int k : all)
      if (k != j) rest.push_back(k);
    auto sub = interval_dp(inst, lv, contiguous(rest, lv), mode);
    Score cand = add(sub.first, buyer_score(inst, j));
    if (cmp(cand, best.first, mode) > 0) {
      best.first = cand;
      best.second = sub.second;
      best.second.push_back(j);
    }
  }
  return best;
}

// Bottom-up edge-disjoint path packing on trees. Each vertex assembles the
// paths whose topmost vertex it is with a bitmask DP over its child edges.
class TreePacker {
 public:
  TreePacker(const Instance& inst, Mode mode) : inst_(inst), mode_(mode), g_(inst.graph()) {
    int nv = g_.vertex_count();
    parent_.assign(nv, -1);
    depth_.assign(nv, 0);
    children_.assign(nv, {});
    std::vector<int> stack = {0};
    std::vector<bool> seen(nv, false);
    seen[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order_.push_back(v);
      for (int e : g_.incident(v)) {
        int w = g_.other_end(e, v);
        if (!seen[w]) {
          seen[w] = true;
          parent_[w] = v;
          depth_[w] = depth_[v] + 1;
          children_[v].push_back(w);
          stack.push_back(w);
        }
      }
    }
    topping_.assign(nv, {});
    for (int j = 0; j < inst_.buyer_count(); ++j) {
      PathInfo pi = analyze(j);
      topping_[pi.top].push_back(pi);
    }
  }

  std::pair<Score, std::vector<int>> solve() {
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) compute_vertex(*it);
    std::vector<int> winners;
    collect(0, -1, winners);
    return {state(0, -1).score, winners};
  }

 private:
  struct PathInfo {
    int j = -1;
    int top = -1;
    std::vector<std::vector<int>> arms;  // vertex chains starting below top
  };
  struct State {
    Score score;
    std::vector<PathInfo> chosen;
    std::vector<int> free_children;
  };

  PathInfo analyze(int j) {
    const auto& ids = inst_.buyer(j).demand.edge_ids;
    std::vector<int> verts;
    if (ids.size() == 1) {
      verts = {g_.edge(ids[0]).first, g_.edge(ids[0]).second};
    } else {
      auto [a0, b0] = g_.edge(ids[0]);
      auto [a1, b1] = g_.edge(ids[1]);
      int shared = (a0 == a1 || a0 == b1) ? a0 : b0;
      verts.push_back(g_.other_end(ids[0], shared));
      int cur = shared;
      verts.push_back(cur);
      for (size_t i = 1; i < ids.size(); ++i) {
        cur = g_.other_end(ids[i], cur);
        verts.push_back(cur);
      }
    }
    PathInfo pi;
    pi.j = j;
    int top_idx = 0;
    for (size_t i = 1; i < verts.size(); ++i)
      if (depth_[verts[i]] < depth_[verts[top_idx]]) top_idx = static_cast<int>(i);
    pi.top = verts[top_idx];
    std::vector<int> left(verts.begin(), verts.begin() + top_idx);
    std::reverse(left.begin(), left.end());
    std::vector<int> right(verts.begin() + top_idx + 1, verts.end());
    if (!left.empty()) pi.arms.push_back(left);
    if (!right.empty()) pi.arms.push_back(right);
    return pi;
  }

  const State& state(int v, int blocked_child) const {
    return states_.at({v, blocked_child});
  }

  Score arm_gain(const std::vector<int>& arm) const {
    Score s;
    for (size_t i = 0; i < arm.size(); ++i) {
      int blocked = i + 1 < arm.size() ? arm[i + 1] : -1;
      s = add(s, state(arm[i], blocked).score);
    }
    return s;
  }

  void compute_vertex(int v) {
    const auto& ch = children_[v];
    int k = static_cast<int>(ch.size());
    if (k > 25) throw TooLarge("tree packing: vertex degree too large");
    std::map<int, int> child_index;
    for (int i = 0; i < k; ++i) child_index[ch[i]] = i;

    struct Cand {
      Score gain;
      unsigned mask;
      const PathInfo* pi;
    };
    std::vector<Cand> cands;
    for (const auto& pi : topping_[v]) {
      Score gain = buyer_score(inst_, pi.j);
      unsigned mask = 0;
      for (const auto& arm : pi.arms) {
        mask |= 1u << child_index.at(arm[0]);
        gain = add(gain, arm_gain(arm));
      }
      cands.push_back({gain, mask, &pi});
    }

    for (int blocked = -1; blocked < k; ++blocked) {
      unsigned forbid = blocked < 0 ? 0u : (1u << blocked);
      size_t total = 1u << k;
      std::vector<Score> f(total);
      std::vector<int> pick(total, -1);     // candidate index, or -1 = free child
      std::vector<unsigned> prev(total, 0);
      for (unsigned mask = 1; mask < total; ++mask) {
        int c = __builtin_ctz(mask);
        unsigned rest = mask ^ (1u << c);
        f[mask] = add(f[rest], (forbid & (1u << c)) ? Score{} : state(ch[c], -1).score);
        pick[mask] = -1;
        prev[mask] = rest;
        for (size_t ci = 0; ci < cands.size(); ++ci) {
          const Cand& cd = cands[ci];
          if ((cd.mask & mask) != cd.mask || (cd.mask & forbid) || !(cd.mask & (1u << c)))
            continue;
          Score cand = add(f[mask ^ cd.mask], cd.gain);
          if (cmp(cand, f[mask], mode_) > 0) {
            f[mask] = cand;
            pick[mask] = static_cast<int>(ci);
            prev[mask] = mask ^ cd.mask;
          }
        }
      }
      State st;
      st.score = f[total - 1];
      for (unsigned mask = static_cast<unsigned>(total - 1); mask;) {
        if (pick[mask] >= 0) {
          st.chosen.push_back(*cands[pick[mask]].pi);
        } else {
          int c = __builtin_ctz(mask);
          if (!(forbid & (1u << c))) st.free_children.push_back(ch[c]);
        }
        mask = prev[mask];
      }
      states_[{v, blocked < 0 ? -1 : ch[blocked]}] = std::move(st);
    }
  }

  void collect(int v, int blocked_child, std::vector<int>& winners) const {
    const State& st = state(v, blocked_child);
    for (const auto& pi : st.chosen) {
      winners.push_back(pi.j);
      for (const auto& arm : pi.arms)
        for (size_t i = 0; i < arm.size(); ++i)
          collect_free_of_chain(arm, i, winners);
    }
    for (int c : st.free_children) collect(c, -1, winners);
  }

  void collect_free_of_chain(const std::vector<int>& arm, size_t i,
                             std::vector<int>& winners) const {
    int blocked = i + 1 < arm.size() ? static_cast<int>(arm[i + 1]) : -1;
    const State& st = state(arm[i], blocked);
    for (const auto& pi : st.chosen) {
      winners.push_back(pi.j);
      for (const auto& a2 : pi.arms)
        for (size_t t = 0; t < a2.size(); ++t) collect_free_of_chain(a2, t, winners);
    }
    for (int c : st.free_children) collect(c, -1, winners);
  }

  const Instance& inst_;
  Mode mode_;
  const Graph& g_;
  std::vector<int> parent_, depth_, order_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<PathInfo>> topping_;
  std::map<std::pair<int, int>, State> states_;
};

// Exact branch and bound for maximum-value conflict-free buyer subsets.
// Bound: greedy clique cover of the remaining candidates.
class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, Mode mode) : inst_(inst), mode_(mode) {
    int n = inst.buyer_count();
    conflict_.assign(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a) {
      std::set<int> ea = inst.buyer(a).demand.edge_set();
      for (int b = a + 1; b < n; ++b) {
        bool hit = false;
        for (int e : inst.buyer(b).demand.edge_ids)
          if (ea.count(e)) hit = true;
        conflict_[a][b] = conflict_[b][a] = hit;
      }
    }
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      return inst.buyer(a).value > inst.buyer(b).value;
    });
  }

  std::pair<Score, std::vector<int>> solve() {
    std::vector<int> cur;
    recurse(order_, cur, Score{});
    return {best_, best_set_};
  }

 private:
  Rat clique_bound(const std::vector<int>& cand) const {
    // Candidates are value-sorted; seed cliques greedily.
    Rat bound(0);
    std::vector<std::vector<int>> cliques;
    for (int j : cand) {
      bool placed = false;
      for (auto& cl : cliques) {
        bool all = true;
        for (int x : cl)
          if (!conflict_[j][x]) all = false;
        if (all) {
          cl.push_back(j);
          placed = true;
          break;
        }
      }
      if (!placed) {
        cliques.push_back({j});
        bound += inst_.buyer(j).value;  // first member has the clique's max value
      }
    }
    return bound;
  }

  void recurse(const std::vector<int>& cand, std::vector<int>& cur, Score score) {
    if (cmp(score, best_, mode_) > 0) {
      best_ = score;
      best_set_ = cur;
    }
    if (cand.empty()) return;
    Rat bound = score.value + clique_bound(cand);
    if (bound < best_.value) return;
    if (bound == best_.value && mode_ == Mode::Plain) return;
    int j = cand.front();
    // Include j.
    std::vector<int> nxt;
    for (int x : cand)
      if (x != j && !conflict_[j][x]) nxt.push_back(x);
    cur.push_back(j);
    recurse(nxt, cur, add(score, buyer_score(inst_, j)));
    cur.pop_back();
    // Exclude j.
    std::vector<int> rest(cand.begin() + 1, cand.end());
    recurse(rest, cur, score);
  }

  const Instance& inst_;
  Mode mode_;
  std::vector<std::vector<bool>> conflict_;
  std::vector<int> order_;
  Score best_;
  std::vector<int> best_set_;
};

std::pair<Score, std::vector<int>> optimum_dispatch(const Instance& inst, Mode mode,
                                                    int general_cap) {
  if (inst.buyer_count() == 0) return {Score{}, {}};
  switch (inst.graph().kind()) {
    case GraphKind::Path:
      return path_optimum(inst, mode);
    case GraphKind::Cycle:
      return cycle_optimum(inst, mode);
    case GraphKind::Star:
    case GraphKind::Spider:
    case GraphKind::Tree:
      return TreePacker(inst, mode).solve();
    case GraphKind::General:
      if (inst.buyer_count() > general_cap)
        throw TooLarge("optimal_allocation: too many buyers for exhaustive search");
      return BranchAndBound(inst, mode).solve();
    default:
      return BranchAndBound(inst, mode).solve();
  }
}

}  // namespace

std::pair<Rat, Allocation> optimal_allocation(const Instance& inst, int general_cap) {
  auto [score, winners] = optimum_dispatch(inst, Mode::Plain, general_cap);
  Allocation a;
  a.winners = {winners.begin(), winners.end()};
  return {score.value, a};
}

std::pair<Rat, Allocation> optimal_allocation_lex(const Instance& inst, LexRefine order) {
  Mode mode = order == LexRefine::CoverThenCount ? Mode::CoverThenCount : Mode::CountThenCover;
  auto [score, winners] = optimum_dispatch(inst, mode, 1 << 20);
  Allocation a;
  a.winners = {winners.begin(), winners.end()};
  return {score.value, a};
}

// ---------------------------------------------------------------------------
// Half-integral optima for stars and spiders.

namespace {

bool is_half(const Rat& r) { return r == Rat(0) || r == Rat(1, 2) || r == Rat(1); }

// Builds the auxiliary graph on demanded edge ids whose edges are the
// half-support buyers, and decomposes it into cycles; every component must
// be a single odd cycle.
std::vector<std::vector<int>> extract_odd_cycles(const Instance& inst,
                                                 const std::vector<int>& halves) {
  std::map<int, std::vector<std::pair<int, int>>> adj;  // edge id -> (other id, buyer)
  for (int j : halves) {
    const auto& ids = inst.buyer(j).demand.edge_ids;
    if (ids.size() != 2)
      throw HalfIntegralityViolated("half-support demand is not a two-edge path");
    adj[ids[0]].push_back({ids[1], j});
    adj[ids[1]].push_back({ids[0], j});
  }
  for (const auto& [v, nb] : adj)
    if (nb.size() != 2)
      throw HalfIntegralityViolated("half-support graph is not 2-regular");
  std::set<int> done;
  std::vector<std::vector<int>> cycles;
  for (const auto& [start, nb0] : adj) {
    if (done.count(start)) continue;
    std::vector<int> cyc;
    int cur = start, prev_buyer = -1;
    while (true) {
      done.insert(cur);
      int nxt = -1, via = -1;
      for (auto [w, j] : adj[cur])
        if (j != prev_buyer) {
          nxt = w;
          via = j;
        }
      cyc.push_back(via);
      prev_buyer = via;
      cur = nxt;
      if (cur == start) break;
    }
    if (cyc.size() % 2 == 0)
      throw HalfIntegralityViolated("half-support contains an even cycle");
    cycles.push_back(cyc);
  }
  return cycles;
}

}  // namespace

LPSolution half_integral_from_optimum(const Instance& inst, const LPSolution& base) {
  const Graph& g = inst.graph();
  int center = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) > g.degree(center)) center = v;

  // Legs, and each edge's (leg, distance-from-center) coordinates.
  int m = g.edge_count();
  std::vector<int> leg_of(m + 1, -1), pos_of(m + 1, 0);
  std::vector<std::vector<int>> legs;  // leg -> edge ids outward
  for (int e0 : g.incident(center)) {
    std::vector<int> leg = {e0};
    int prev = center, cur = g.other_end(e0, center), last = e0;
    while (g.degree(cur) == 2) {
      int nxt = -1;
      for (int e : g.incident(cur))
        if (e != last) nxt = e;
      leg.push_back(nxt);
      prev = cur;
      cur = g.other_end(nxt, cur);
      last = nxt;
    }
    (void)prev;
    for (size_t i = 0; i < leg.size(); ++i) {
      leg_of[leg[i]] = static_cast<int>(legs.size());
      pos_of[leg[i]] = static_cast<int>(i) + 1;
    }
    legs.push_back(leg);
  }
  int n_legs = static_cast<int>(legs.size());

  // Peeling state: one entry per real buyer plus one per single-edge slack.
  struct Piece {
    std::vector<int> edges;  // contiguous within one or two legs
    int buyer = -1;          // -1 for slack pieces
    Rat x;
  };
  std::vector<Piece> pieces;
  for (int j = 0; j < inst.buyer_count(); ++j)
    pieces.push_back({inst.buyer(j).demand.edge_ids, j, base.primal_y[j]});
  std::vector<Rat> load(m + 1, Rat(0));
  for (const auto& pc : pieces)
    for (int e : pc.edges) load[e] += pc.x;
  for (int e = 1; e <= m; ++e) pieces.push_back({{e}, -1, Rat(1) - load[e]});

  struct Mega {
    std::vector<int> star_edges;       // 1 or 2 leg indices
    std::vector<int> contributors;     // piece indices
    Rat value;
    Rat w;
  };
  std::vector<Mega> megas;

  auto endpoints_on_leg = [&](const Piece& pc, int leg) {
    int lo = 1 << 30, hi = 0;
    for (int e : pc.edges)
      if (leg_of[e] == leg) {
        lo = std::min(lo, pos_of[e]);
        hi = std::max(hi, pos_of[e]);
      }
    return std::make_pair(lo, hi);
  };

  // Picks a positive piece whose near end matches `frontier_pos` on `leg`,
  // extending outward (or one crossing the center when frontier_pos == 0).
  auto find_extension = [&](int leg, int frontier_pos, Rat need) -> int {
    int best = -1;
    for (size_t i = 0; i < pieces.size(); ++i) {
      const Piece& pc = pieces[i];
      if (!(pc.x > Rat(0)) || pc.x < need) continue;
      bool on_leg = false;
      for (int e : pc.edges)
        if (leg_of[e] == leg) on_leg = true;
      if (!on_leg) continue;
      auto [lo, hi] = endpoints_on_leg(pc, leg);
      (void)hi;
      if (lo != frontier_pos + 1) continue;
      // Must not double back toward the center on this leg beyond its start.
      if (best < 0 || pieces[i].x > pieces[best].x) best = static_cast<int>(i);
    }
    return best;
  };

  int guard = 4 * (static_cast<int>(pieces.size()) + 1);
  while (guard-- > 0) {
    int seed = -1;
    for (size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].x > Rat(0) && (seed < 0 || pieces[i].x < pieces[seed].x))
        seed = static_cast<int>(i);
    if (seed < 0) break;
    Rat w = pieces[seed].x;

    std::set<int> legs_used;
    for (int e : pieces[seed].edges) legs_used.insert(leg_of[e]);
    std::vector<int> group = {seed};

    // Extend outward on every touched leg, then inward toward the center;
    // the inward extension may run through the center into a fresh leg.
    auto covered_span = [&](int leg) {
      int lo = 1 << 30, hi = 0;
      for (int gi : group)
        for (int e : pieces[gi].edges)
          if (leg_of[e] == leg) {
            lo = std::min(lo, pos_of[e]);
            hi = std::max(hi, pos_of[e]);
          }
      return std::make_pair(lo == (1 << 30) ? 0 : lo, hi);
    };
    std::function<void(int)> extend_leg = [&](int leg) {
      while (true) {
        auto [lo, hi] = covered_span(leg);
        int leg_len = static_cast<int>(legs[leg].size());
        if (hi < leg_len) {
          int ext = find_extension(leg, hi, w);
          if (ext < 0) throw HalfIntegralityViolated("leg extension missing outward");
          group.push_back(ext);
          continue;
        }
        if (lo > 1) {
          int ext = -1;
          // A piece ending exactly at lo-1 moving toward the center: its far
          // end on this leg is lo-1 and it may continue across the center.
          for (size_t i = 0; i < pieces.size(); ++i) {
            const Piece& pc = pieces[i];
            if (!(pc.x > Rat(0)) || pc.x < w) continue;
            bool on_leg = false;
            for (int e : pc.edges)
              if (leg_of[e] == leg) on_leg = true;
            if (!on_leg) continue;
            auto [plo, phi] = endpoints_on_leg(pc, leg);
            (void)plo;
            if (phi != lo - 1) continue;
            if (ext < 0 || pc.x > pieces[ext].x) ext = static_cast<int>(i);
          }
          if (ext < 0) throw HalfIntegralityViolated("leg extension missing inward");
          group.push_back(ext);
          for (int e : pieces[ext].edges)
            if (leg_of[e] != leg && !legs_used.count(leg_of[e])) {
              legs_used.insert(leg_of[e]);
              extend_leg(leg_of[e]);
            }
          continue;
        }
        break;
      }
    };
    std::vector<int> initial(legs_used.begin(), legs_used.end());
    for (int leg : initial) extend_leg(leg);

    Mega mg;
    mg.star_edges = {legs_used.begin(), legs_used.end()};
    if (mg.star_edges.size() > 2)
      throw HalfIntegralityViolated("leg cover spans more than two legs");
    mg.contributors = group;
    mg.w = w;
    mg.value = Rat(0);
    for (int gi : group)
      if (pieces[gi].buyer >= 0) mg.value += inst.buyer(pieces[gi].buyer).value;
    megas.push_back(mg);
    for (int gi : group) pieces[gi].x -= w;
  }
  for (const auto& pc : pieces)
    if (!pc.x.is_zero()) throw HalfIntegralityViolated("peeling left residual mass");

  // Star relaxation over the megas: equality per leg.
  lp::Problem lp2;
  for (const auto& mg : megas) lp2.add_var(mg.value);
  for (int k = 0; k < n_legs; ++k) {
    std::vector<Rat> row(megas.size(), Rat(0));
    for (size_t i = 0; i < megas.size(); ++i)
      for (int se : megas[i].star_edges)
        if (se == k) row[i] = Rat(1);
    lp2.add_row(std::move(row), lp::Sense::EQ, Rat(1));
  }
  lp::Solution s2 = lp::solve(lp2);
  if (s2.status != lp::Status::Optimal)
    throw HalfIntegralityViolated("star relaxation unsolvable");
  for (const Rat& w : s2.x)
    if (!is_half(w)) throw HalfIntegralityViolated("star relaxation vertex not half-integral");

  LPSolution out;
  out.primal_y.assign(inst.buyer_count(), Rat(0));
  for (size_t i = 0; i < megas.size(); ++i)
    for (int gi : megas[i].contributors)
      if (pieces[gi].buyer >= 0) out.primal_y[pieces[gi].buyer] += s2.x[i];
  out.dual_p = base.dual_p;
  out.objective = Rat(0);
  for (int j = 0; j < inst.buyer_count(); ++j)
    out.objective += inst.buyer(j).value * out.primal_y[j];
  out.basis = base.basis;
  if (out.objective != base.objective)
    throw HalfIntegralityViolated("star relaxation lost objective value");
  return out;
}

HalfIntegralSolution half_integral_optimum(const Instance& inst) {
  GraphKind k = inst.graph().kind();
  if (k != GraphKind::Star && k != GraphKind::Spider)
    throw KindError("half_integral_optimum: requires a star or spider");

  HalfIntegralSolution out;
  out.lp = solve_primal_dual(inst);
  bool half = true;
  for (const Rat& y : out.lp.primal_y)
    if (!is_half(y)) half = false;
  if (!half) {
    if (k == GraphKind::Star)
      throw HalfIntegralityViolated("star vertex optimum not half-integral");
    out.lp = half_integral_from_optimum(inst, out.lp);
    for (const Rat& y : out.lp.primal_y)
      if (!is_half(y)) throw HalfIntegralityViolated("spider reduction not half-integral");
    if (!check_complementary_slackness(out.lp, inst))
      throw HalfIntegralityViolated("spider reduction broke complementary slackness");
  }
  for (int j = 0; j < inst.buyer_count(); ++j) {
    if (out.lp.primal_y[j] == Rat(1)) out.ones.push_back(j);
    if (out.lp.primal_y[j] == Rat(1, 2)) out.halves.push_back(j);
  }
  if (k == GraphKind::Star) out.odd_cycles = extract_odd_cycles(inst, out.halves);
  return out;
}

}  // namespace tollbooth::engine
