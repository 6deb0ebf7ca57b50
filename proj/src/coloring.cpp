#include "tollbooth/coloring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace tollbooth::color {

namespace {

class EdgeColorer {
 public:
  EdgeColorer(int n, const std::vector<std::pair<int, int>>& edges) : n_(n), edges_(edges) {
    adj_.assign(n, {});
    for (size_t i = 0; i < edges.size(); ++i) {
      auto [u, v] = edges[i];
      adj_[u].push_back(static_cast<int>(i));
      adj_[v].push_back(static_cast<int>(i));
    }
    int delta = 0;
    for (int v = 0; v < n; ++v) delta = std::max(delta, static_cast<int>(adj_[v].size()));
    colors_ = delta + 1;
    color_.assign(edges.size(), 0);  // 0 = uncolored; colors are 1..colors_
  }

  std::vector<int> run() {
    for (size_t i = 0; i < edges_.size(); ++i) color_edge(static_cast<int>(i));
    std::vector<int> out(edges_.size());
    for (size_t i = 0; i < edges_.size(); ++i) out[i] = color_[i] - 1;
    return out;
  }

 private:
  int other(int e, int v) const {
    auto [a, b] = edges_[e];
    return a == v ? b : a;
  }

  bool is_free(int v, int c) const {
    for (int e : adj_[v])
      if (color_[e] == c) return false;
    return true;
  }

  int free_color(int v) const {
    for (int c = 1; c <= colors_; ++c)
      if (is_free(v, c)) return c;
    throw DegreeExceeded("edge coloring: no free color");
  }

  int edge_between(int u, int v) const {
    for (int e : adj_[u])
      if (other(e, u) == v) return e;
    return -1;
  }

  void color_edge(int e0) {
    int u = edges_[e0].first;
    // Maximal fan of u starting at the other endpoint.
    std::vector<int> fan = {other(e0, u)};
    std::set<int> in_fan = {fan[0]};
    bool grew = true;
    while (grew) {
      grew = false;
      for (int e : adj_[u]) {
        int w = other(e, u);
        if (color_[e] == 0 || in_fan.count(w)) continue;
        if (is_free(fan.back(), color_[e])) {
          fan.push_back(w);
          in_fan.insert(w);
          grew = true;
          break;
        }
      }
    }
    int c = free_color(u);
    int d = free_color(fan.back());
    if (c != d) invert_cd_path(u, c, d);
    // After inversion d is free at u; rotate the fan up to the first vertex
    // where d is free.
    size_t w_idx = fan.size() - 1;
    for (size_t i = 0; i < fan.size(); ++i)
      if (is_free(fan[i], d)) { w_idx = i; break; }
    for (size_t i = 0; i < w_idx; ++i) {
      int e = edge_between(u, fan[i]);
      int e_next = edge_between(u, fan[i + 1]);
      color_[e] = color_[e_next];
    }
    color_[edge_between(u, fan[w_idx])] = d;
  }

  // Flip colors along the maximal path of alternating colors c,d from u.
  void invert_cd_path(int u, int c, int d) {
    int cur = u, want = d, prev_edge = -1;
    std::vector<int> path_edges;
    while (true) {
      int nxt = -1;
      for (int e : adj_[cur])
        if (e != prev_edge && color_[e] == want) nxt = e;
      if (nxt < 0) break;
      path_edges.push_back(nxt);
      cur = other(nxt, cur);
      prev_edge = nxt;
      want = want == c ? d : c;
    }
    for (int e : path_edges) color_[e] = color_[e] == c ? d : c;
  }

  int n_;
  const std::vector<std::pair<int, int>>& edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> color_;
  int colors_;
};

}  // namespace

std::vector<int> vizing_color(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  for (auto [a, b] : edges)
    if (a == b || a < 0 || b < 0 || a >= num_vertices || b >= num_vertices)
      throw std::invalid_argument("vizing_color: bad edge");
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges)
    if (!seen.insert(std::minmax(a, b)).second)
      throw std::invalid_argument("vizing_color: parallel edge");
  EdgeColorer ec(num_vertices, edges);
  return ec.run();
}

std::array<std::vector<int>, 3> partition_odd_cycles(
    const std::vector<std::pair<int, int>>& edges) {
  std::map<int, std::vector<std::pair<int, int>>> adj;  // vertex -> (other, edge idx)
  for (size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].push_back({edges[i].second, static_cast<int>(i)});
    adj[edges[i].second].push_back({edges[i].first, static_cast<int>(i)});
  }
  for (const auto& [v, nb] : adj)
    if (nb.size() != 2) throw NotOddCycles("vertex degree != 2");

  std::array<std::vector<int>, 3> classes;
  std::set<int> done;
  for (const auto& [start, nb] : adj) {
    if (done.count(start)) continue;
    // Walk the cycle collecting edge indices in order.
    std::vector<int> cyc;
    int cur = start, prev_edge = -1;
    while (true) {
      done.insert(cur);
      int nxt_edge = -1, nxt_v = -1;
      for (auto [w, ei] : adj[cur])
        if (ei != prev_edge) { nxt_edge = ei; nxt_v = w; }
      cyc.push_back(nxt_edge);
      prev_edge = nxt_edge;
      cur = nxt_v;
      if (cur == start) break;
    }
    size_t r = cyc.size();
    if (r % 2 == 0 || r < 3) throw NotOddCycles("cycle length not odd (>=3)");
    // Alternate the first r-1 edges between two matchings, the last edge
    // forms the third.
    for (size_t i = 0; i + 1 < r; ++i) classes[i % 2].push_back(cyc[i]);
    classes[2].push_back(cyc[r - 1]);
  }
  return classes;
}

std::vector<int> color_tree_paths(const Graph& tree, const std::vector<std::vector<int>>& paths,
                                  int d) {
  if (d < 2) throw std::invalid_argument("color_tree_paths: d must be >= 2");
  int m = tree.edge_count();
  std::vector<int> load(m + 1, 0);
  for (const auto& p : paths)
    for (int e : p)
      if (++load[e] > d) throw CongestionExceeded("color_tree_paths: edge congestion above d");

  // Root at 0, levels by BFS.
  int nv = tree.vertex_count();
  std::vector<int> parent(nv, -1), parent_edge(nv, 0), order;
  std::vector<bool> seen(nv, false);
  order.push_back(0);
  seen[0] = true;
  for (size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    for (int e : tree.incident(v)) {
      int w = tree.other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        parent_edge[w] = e;
        order.push_back(w);
      }
    }
  }

  std::vector<int> cls(paths.size(), -1);
  int num_classes = d + 1;
  for (int v : order) {
    // Child edges of v.
    std::vector<int> ev;
    for (int e : tree.incident(v))
      if (parent[v] == -1 || e != parent_edge[v]) ev.push_back(e);
    if (ev.empty()) continue;
    std::set<int> ev_set(ev.begin(), ev.end());

    struct Touch { int path; std::vector<int> child_edges; };
    std::vector<Touch> touches;
    for (size_t pi = 0; pi < paths.size(); ++pi) {
      std::vector<int> inside;
      for (int e : paths[pi])
        if (ev_set.count(e)) inside.push_back(e);
      if (!inside.empty()) touches.push_back({static_cast<int>(pi), inside});
    }
    if (touches.empty()) continue;

    // Auxiliary conflict graph: one vertex per child edge, a shared vertex
    // for all already-assigned paths (they run through the parent edge), and
    // a private vertex per unassigned path touching one child edge. Parallel
    // edges occur when two paths use the same pair of child edges.
    std::map<int, int> vid;  // child edge -> vertex
    int next_vertex = 0;
    for (int e : ev) vid[e] = next_vertex++;
    int parent_vertex = next_vertex++;
    std::vector<std::pair<int, int>> hedges;
    std::vector<int> hpath;  // path per auxiliary edge
    for (const auto& t : touches) {
      if (cls[t.path] >= 0) {
        if (t.child_edges.size() != 1)
          throw std::logic_error("color_tree_paths: assigned path re-enters");
        hedges.push_back({vid[t.child_edges[0]], parent_vertex});
      } else if (t.child_edges.size() == 1) {
        hedges.push_back({vid[t.child_edges[0]], next_vertex++});
      } else if (t.child_edges.size() == 2) {
        hedges.push_back({vid[t.child_edges[0]], vid[t.child_edges[1]]});
      } else {
        throw std::logic_error("color_tree_paths: path uses >2 edges at one vertex");
      }
      hpath.push_back(t.path);
    }

    // Color the auxiliary edges with d+1 colors, respecting the classes the
    // assigned paths already carry. The fan routine handles the simple case;
    // pinned or parallel edges go through an exact search (the graphs here
    // are a handful of edges).
    std::vector<int> hcolor(hedges.size(), -1);
    std::vector<int> pinned(hedges.size(), -1);
    for (size_t i = 0; i < hedges.size(); ++i)
      if (cls[hpath[i]] >= 0) pinned[i] = cls[hpath[i]];
    bool simple = true;
    {
      std::set<std::pair<int, int>> seen_pairs;
      for (auto [x, y] : hedges)
        if (!seen_pairs.insert(std::minmax(x, y)).second) simple = false;
    }
    bool any_pin = false;
    for (int p : pinned)
      if (p >= 0) any_pin = true;
    if (simple && !any_pin) {
      hcolor = vizing_color(next_vertex, hedges);
    } else {
      std::function<bool(size_t)> assign = [&](size_t i) -> bool {
        if (i == hedges.size()) return true;
        if (pinned[i] >= 0) {
          hcolor[i] = pinned[i];
          for (size_t j = 0; j < i; ++j) {
            auto [a, b] = hedges[i];
            auto [c, d2] = hedges[j];
            bool share = a == c || a == d2 || b == c || b == d2;
            if (share && hcolor[j] == hcolor[i]) return false;
          }
          if (assign(i + 1)) return true;
          hcolor[i] = -1;
          return false;
        }
        for (int col = 0; col < num_classes; ++col) {
          bool ok = true;
          for (size_t j = 0; j < i && ok; ++j) {
            auto [a, b] = hedges[i];
            auto [c, d2] = hedges[j];
            bool share = a == c || a == d2 || b == c || b == d2;
            if (share && hcolor[j] == col) ok = false;
          }
          if (!ok) continue;
          hcolor[i] = col;
          if (assign(i + 1)) return true;
          hcolor[i] = -1;
        }
        return false;
      };
      // Pinned edges first so their colors constrain the search up front.
      std::vector<size_t> order_idx(hedges.size());
      std::iota(order_idx.begin(), order_idx.end(), 0);
      std::stable_sort(order_idx.begin(), order_idx.end(),
                       [&](size_t x, size_t y) { return (pinned[x] >= 0) > (pinned[y] >= 0); });
      std::vector<std::pair<int, int>> reordered;
      std::vector<int> reordered_path, reordered_pin;
      for (size_t i : order_idx) {
        reordered.push_back(hedges[i]);
        reordered_path.push_back(hpath[i]);
        reordered_pin.push_back(pinned[i]);
      }
      hedges = reordered;
      hpath = reordered_path;
      pinned = reordered_pin;
      hcolor.assign(hedges.size(), -1);
      if (!assign(0))
        throw CongestionExceeded("color_tree_paths: no class assignment exists locally");
    }

    // Map colors to classes: pinned colors keep their class, the rest take
    // unused classes.
    std::map<int, int> color_to_class;
    std::set<int> used_classes;
    for (size_t i = 0; i < hedges.size(); ++i) {
      if (pinned[i] >= 0) {
        color_to_class[hcolor[i]] = pinned[i];
        used_classes.insert(pinned[i]);
      }
    }
    for (size_t i = 0; i < hedges.size(); ++i) {
      if (color_to_class.count(hcolor[i])) continue;
      int free_class = -1;
      for (int col = 0; col < num_classes; ++col)
        if (!used_classes.count(col)) { free_class = col; break; }
      if (free_class < 0) throw std::logic_error("color_tree_paths: ran out of classes");
      color_to_class[hcolor[i]] = free_class;
      used_classes.insert(free_class);
    }
    for (size_t i = 0; i < hedges.size(); ++i)
      if (cls[hpath[i]] < 0) cls[hpath[i]] = color_to_class[hcolor[i]];
  }

  for (int c : cls)
    if (c < 0) throw std::logic_error("color_tree_paths: path left unassigned");
  return cls;
}

std::vector<int> interval_family_coloring(
    int line_length, const std::vector<std::vector<std::pair<int, int>>>& families, int k, int r) {
  if (r < 2) throw std::invalid_argument("interval_family_coloring: r must be >= 2");
  std::vector<int> load(line_length + 2, 0);
  for (const auto& fam : families) {
    if (static_cast<int>(fam.size()) > k)
      throw CongestionExceeded("interval_family_coloring: too many intervals in a family");
    for (auto [a, b] : fam) {
      if (a < 1 || b > line_length || a > b)
        throw std::invalid_argument("interval_family_coloring: bad interval");
      for (int e = a; e <= b; ++e)
        if (++load[e] > r) throw CongestionExceeded("interval_family_coloring: congestion above r");
    }
  }

  int nf = static_cast<int>(families.size());
  // Two families conflict when they share a vertex of the line, i.e. their
  // edge intervals overlap or touch.
  auto conflict = [&](int x, int y) {
    for (auto [a1, b1] : families[x])
      for (auto [a2, b2] : families[y])
        if (a1 <= b2 + 1 && a2 <= b1 + 1) return true;
    return false;
  };

  std::vector<int> idx(nf);
  for (int i = 0; i < nf; ++i) idx[i] = i;
  auto leftmost = [&](int i) {
    int lo = line_length + 2;
    for (auto [a, b] : families[i]) lo = std::min(lo, a);
    return lo;
  };
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return leftmost(a) < leftmost(b); });

  int limit = 2 * k * (r - 1);
  std::vector<int> cls(nf, -1);
  int used = 0;
  for (int i : idx) {
    std::set<int> bad;
    for (int j : idx)
      if (cls[j] >= 0 && conflict(i, j)) bad.insert(cls[j]);
    int c = 0;
    while (bad.count(c)) c++;
    cls[i] = c;
    used = std::max(used, c + 1);
  }
  if (used <= limit) return cls;

  // Exact minimum coloring fallback for small degenerate inputs.
  std::vector<int> best;
  std::function<bool(int, int)> assign = [&](int i, int maxc) {
    if (i == nf) return true;
    int f = idx[i];
    for (int c = 0; c < maxc; ++c) {
      bool ok = true;
      for (int t = 0; t < i && ok; ++t)
        if (cls[idx[t]] == c && conflict(f, idx[t])) ok = false;
      if (!ok) continue;
      cls[f] = c;
      if (assign(i + 1, maxc)) return true;
      cls[f] = -1;
    }
    return false;
  };
  for (int maxc = 1; maxc <= limit; ++maxc) {
    std::fill(cls.begin(), cls.end(), -1);
    if (assign(0, maxc)) return cls;
  }
  throw CongestionExceeded("interval_family_coloring: cannot meet the color bound");
}

}  // namespace tollbooth::color
