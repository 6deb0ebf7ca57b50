#include "tollbooth/instances.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "tollbooth/rng.hpp"

namespace tollbooth::gen {

namespace {

Rat random_value(Rng& rng, long lo, long hi) {
  long den = rng.range(1, 3);
  return Rat(rng.range(lo * den, hi * den), den);
}

// Unique path between two vertices of a tree-like graph, as edge ids.
std::vector<int> tree_path(const Graph& g, int from, int to) {
  std::vector<int> parent_edge(g.vertex_count(), -1), parent(g.vertex_count(), -1);
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<int> stack = {from};
  seen[from] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : g.incident(v)) {
      int w = g.other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        parent_edge[w] = e;
        stack.push_back(w);
      }
    }
  }
  std::vector<int> ids;
  int cur = to;
  while (cur != from) {
    ids.push_back(parent_edge[cur]);
    cur = parent[cur];
  }
  std::reverse(ids.begin(), ids.end());
  return ids;
}

// Shortest path by BFS for general graphs, as edge ids; empty if none.
std::vector<int> bfs_path(const Graph& g, int from, int to) {
  std::vector<int> parent_edge(g.vertex_count(), -1), parent(g.vertex_count(), -1);
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<int> queue = {from};
  seen[from] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    for (int e : g.incident(v)) {
      int w = g.other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        parent_edge[w] = e;
        queue.push_back(w);
      }
    }
  }
  if (!seen[to] || from == to) return {};
  std::vector<int> ids;
  int cur = to;
  while (cur != from) {
    ids.push_back(parent_edge[cur]);
    cur = parent[cur];
  }
  std::reverse(ids.begin(), ids.end());
  return ids;
}

}  // namespace

Instance gen_random(GraphKind kind, int m, int n, long value_lo, long value_hi, uint64_t seed) {
  Rng rng(seed);
  auto value = [&] { return random_value(rng, value_lo, value_hi); };

  switch (kind) {
    case GraphKind::Path: {
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < m; ++i) edges.push_back({i, i + 1});
      Graph g(GraphKind::Path, m + 1, std::move(edges));
      std::vector<Buyer> buyers;
      for (int j = 0; j < n; ++j) {
        int a = static_cast<int>(rng.range(1, m));
        int b = static_cast<int>(rng.range(1, m));
        if (a > b) std::swap(a, b);
        Buyer bu;
        for (int e = a; e <= b; ++e) bu.demand.edge_ids.push_back(e);
        bu.value = value();
        buyers.push_back(std::move(bu));
      }
      return Instance(std::move(g), std::move(buyers));
    }
    case GraphKind::Star: {
      std::vector<std::pair<int, int>> edges;
      for (int i = 1; i <= m; ++i) edges.push_back({0, i});
      Graph g(GraphKind::Star, m + 1, std::move(edges));
      std::vector<Buyer> buyers;
      for (int j = 0; j < n; ++j) {
        Buyer bu;
        int e1 = static_cast<int>(rng.range(1, m));
        if (m >= 2 && rng.coin()) {
          int e2 = e1;
          while (e2 == e1) e2 = static_cast<int>(rng.range(1, m));
          bu.demand.edge_ids = {e1, e2};
        } else {
          bu.demand.edge_ids = {e1};
        }
        bu.value = value();
        buyers.push_back(std::move(bu));
      }
      return Instance(std::move(g), std::move(buyers));
    }
    case GraphKind::Spider: {
      int legs = static_cast<int>(rng.range(3, 4));
      std::vector<std::pair<int, int>> edges;
      int next_vertex = 1;
      for (int leg = 0; leg < legs; ++leg) {
        int len = std::max(1, (m + leg) / legs);
        int prev = 0;
        for (int i = 0; i < len && static_cast<int>(edges.size()) < m; ++i) {
          edges.push_back({prev, next_vertex});
          prev = next_vertex++;
        }
      }
      while (static_cast<int>(edges.size()) < m) {
        edges.push_back({0, next_vertex});
        next_vertex++;
      }
      Graph g(GraphKind::Spider, next_vertex, std::move(edges));
      std::vector<Buyer> buyers;
      for (int j = 0; j < n; ++j) {
        int x = static_cast<int>(rng.below(g.vertex_count()));
        int y = static_cast<int>(rng.below(g.vertex_count()));
        if (x == y) y = (x + 1) % g.vertex_count();
        Buyer bu;
        bu.demand.edge_ids = tree_path(g, x, y);
        bu.value = value();
        buyers.push_back(std::move(bu));
      }
      return Instance(std::move(g), std::move(buyers));
    }
    case GraphKind::Tree: {
      std::vector<std::pair<int, int>> edges;
      for (int v = 1; v <= m; ++v) edges.push_back({static_cast<int>(rng.below(v)), v});
      Graph g(GraphKind::Tree, m + 1, std::move(edges));
      std::vector<Buyer> buyers;
      for (int j = 0; j < n; ++j) {
        int x = static_cast<int>(rng.below(m + 1));
        int y = static_cast<int>(rng.below(m + 1));
        if (x == y) y = (x + 1) % (m + 1);
        Buyer bu;
        bu.demand.edge_ids = tree_path(g, x, y);
        bu.value = value();
        buyers.push_back(std::move(bu));
      }
      return Instance(std::move(g), std::move(buyers));
    }
    case GraphKind::Cycle: {
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < m; ++i) edges.push_back({i, (i + 1) % m});
      Graph g(GraphKind::Cycle, m, std::move(edges));
      std::vector<Buyer> buyers;
      for (int j = 0; j < n; ++j) {
        int start = static_cast<int>(rng.range(1, m));
        int len = static_cast<int>(rng.range(1, m - 1));
        Buyer bu;
        for (int t = 0; t < len; ++t) bu.demand.edge_ids.push_back((start - 1 + t) % m + 1);
        bu.value = value();
        buyers.push_back(std::move(bu));
      }
      return Instance(std::move(g), std::move(buyers));
    }
    case GraphKind::Outerplanar: {
      // Cycle plus random non-crossing chords under the identity order.
      int nv = std::max(4, (2 * m) / 3);
      std::vector<std::pair<int, int>> edges;
      std::set<std::pair<int, int>> have;
      for (int i = 0; i < nv; ++i) {
        edges.push_back({i, (i + 1) % nv});
        have.insert(std::minmax(i, (i + 1) % nv));
      }
      auto crosses = [&](std::pair<int, int> e, std::pair<int, int> f) {
        auto [a, b] = std::minmax(e.first, e.second);
        auto [c, d] = std::minmax(f.first, f.second);
        bool c_in = a < c && c < b, d_in = a < d && d < b;
        return c_in != d_in && c != a && c != b && d != a && d != b;
      };
      int attempts = 8 * m;
      while (static_cast<int>(edges.size()) < m && attempts-- > 0) {
        int x = static_cast<int>(rng.below(nv));
        int y = static_cast<int>(rng.below(nv));
        if (x == y || have.count(std::minmax(x, y))) continue;
        bool ok = true;
        for (auto& e : edges)
          if (crosses(e, {x, y})) ok = false;
        if (!ok) continue;
        edges.push_back({x, y});
        have.insert(std::minmax(x, y));
      }
      std::vector<int> order(nv);
      std::iota(order.begin(), order.end(), 0);
      Graph g(GraphKind::Outerplanar, nv, std::move(edges), std::move(order));
      std::vector<Buyer> buyers;
      for (int j = 0; j < n; ++j) {
        int x = static_cast<int>(rng.below(nv));
        int y = static_cast<int>(rng.below(nv));
        if (x == y) y = (x + 1) % nv;
        Buyer bu;
        bu.demand.edge_ids = bfs_path(g, x, y);
        bu.value = value();
        buyers.push_back(std::move(bu));
      }
      return Instance(std::move(g), std::move(buyers));
    }
    case GraphKind::General: {
      int nv = std::max(3, m / 2 + 2);
      std::vector<std::pair<int, int>> edges;
      std::set<std::pair<int, int>> have;
      for (int v = 1; v < nv; ++v) {
        int u = static_cast<int>(rng.below(v));
        edges.push_back({u, v});
        have.insert(std::minmax(u, v));
      }
      int attempts = 8 * m;
      while (static_cast<int>(edges.size()) < m && attempts-- > 0) {
        int x = static_cast<int>(rng.below(nv));
        int y = static_cast<int>(rng.below(nv));
        if (x == y || have.count(std::minmax(x, y))) continue;
        edges.push_back({x, y});
        have.insert(std::minmax(x, y));
      }
      Graph g(GraphKind::General, nv, std::move(edges));
      std::vector<Buyer> buyers;
      for (int j = 0; j < n; ++j) {
        int x = static_cast<int>(rng.below(nv));
        int y = static_cast<int>(rng.below(nv));
        if (x == y) y = (x + 1) % nv;
        Buyer bu;
        bu.demand.edge_ids = bfs_path(g, x, y);
        bu.value = value();
        buyers.push_back(std::move(bu));
      }
      return Instance(std::move(g), std::move(buyers));
    }
    default:
      throw KindUnsupported("gen_random: unsupported kind " + kind_name(kind));
  }
}

Instance gen_random_sets(int m, int n, long value_lo, long value_hi, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i) edges.push_back({0, i + 1});
  Graph g(GraphKind::General, m + 1, std::move(edges));
  std::vector<Buyer> buyers;
  for (int j = 0; j < n; ++j) {
    int size = static_cast<int>(rng.range(1, std::max(1, m / 2)));
    std::set<int> items;
    while (static_cast<int>(items.size()) < size) items.insert(static_cast<int>(rng.range(1, m)));
    Buyer bu;
    bu.demand.edge_ids = {items.begin(), items.end()};
    bu.is_set_demand = true;
    bu.value = random_value(rng, value_lo, value_hi);
    buyers.push_back(std::move(bu));
  }
  return Instance(std::move(g), std::move(buyers));
}

Instance gen_star_lb(const Rat& eps) {
  if (!(eps > Rat(0))) throw std::invalid_argument("gen_star_lb: eps must be positive");
  std::vector<std::pair<int, int>> edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  Graph g(GraphKind::Star, 5, std::move(edges));
  std::vector<Buyer> buyers(4);
  buyers[0].demand.edge_ids = {1, 2};
  buyers[0].value = Rat(1);
  buyers[1].demand.edge_ids = {1, 3};
  buyers[1].value = Rat(2) + eps;
  buyers[2].demand.edge_ids = {1, 4};
  buyers[2].value = Rat(2) + eps;
  buyers[3].demand.edge_ids = {3, 4};
  buyers[3].value = Rat(2);
  return Instance(std::move(g), std::move(buyers));
}

Instance gen_path_no_tie_lb() {
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 3}};
  Graph g(GraphKind::Path, 4, std::move(edges));
  std::vector<Buyer> buyers(4);
  buyers[0].demand.edge_ids = {1};
  buyers[0].value = Rat(1);
  buyers[1].demand.edge_ids = {3};
  buyers[1].value = Rat(1);
  buyers[2].demand.edge_ids = {1, 2};
  buyers[2].value = Rat(2);
  buyers[3].demand.edge_ids = {2, 3};
  buyers[3].value = Rat(2);
  return Instance(std::move(g), std::move(buyers));
}

Instance gen_cycle_lb(const Rat& eps) {
  if (!(eps > Rat(0))) throw std::invalid_argument("gen_cycle_lb: eps must be positive");
  long m = 10 * (Rat(1) / eps).ceil().get_si();
  long k = m / 2 + 1;
  std::vector<std::pair<int, int>> edges;
  for (long i = 0; i < m; ++i) edges.push_back({static_cast<int>(i), static_cast<int>((i + 1) % m)});
  Graph g(GraphKind::Cycle, static_cast<int>(m), std::move(edges));
  std::vector<Buyer> buyers;
  for (long j = 1; j <= m; ++j) {
    Buyer bu;  // the k-edge arc starting at vertex j-1
    for (long t = 0; t < k; ++t) bu.demand.edge_ids.push_back(static_cast<int>((j - 1 + t) % m + 1));
    bu.value = Rat(k + 1);
    buyers.push_back(std::move(bu));
  }
  {
    Buyer bu;  // edges 1..k-1
    for (long e = 1; e <= k - 1; ++e) bu.demand.edge_ids.push_back(static_cast<int>(e));
    bu.value = Rat(k - 1);
    buyers.push_back(std::move(bu));
  }
  {
    Buyer bu;  // edges k..m
    for (long e = k; e <= m; ++e) bu.demand.edge_ids.push_back(static_cast<int>(e));
    bu.value = Rat(k - 1);
    buyers.push_back(std::move(bu));
  }
  return Instance(std::move(g), std::move(buyers));
}

Instance gen_tree_d_integral(int d) {
  if (d < 2) throw std::invalid_argument("gen_tree_d_integral: d must be >= 2");
  // Double star with d leaves per side. All d cross buyers ride the center
  // edge, and the staggered pairing buyers chain them into one alternating
  // conflict path; balancing pins the unique optimum at y = 1/d on the
  // crosses and (d-1)/d on the pairs.
  int u0 = 0, v0 = 1;
  auto u = [&](int i) { return 1 + i; };
  auto v = [&](int i) { return 1 + d + i; };
  std::vector<std::pair<int, int>> edges;
  edges.push_back({u0, v0});  // edge 1
  std::vector<int> ue(d + 1), ve(d + 1);
  for (int i = 1; i <= d; ++i) {
    edges.push_back({u(i), u0});
    ue[i] = static_cast<int>(edges.size());
  }
  for (int i = 1; i <= d; ++i) {
    edges.push_back({v(i), v0});
    ve[i] = static_cast<int>(edges.size());
  }
  Graph g(GraphKind::Tree, 2 + 2 * d, std::move(edges));
  std::vector<Buyer> buyers;
  for (int j = 1; j <= d; ++j) {
    Buyer bu;
    bu.demand.edge_ids = {ue[j], 1, ve[j]};
    bu.value = Rat(3);
    buyers.push_back(std::move(bu));
  }
  for (int k = 1; 2 * k <= d; ++k) {
    Buyer bu;
    bu.demand.edge_ids = {ue[2 * k - 1], ue[2 * k]};
    bu.value = Rat(2);
    buyers.push_back(std::move(bu));
  }
  for (int k = 1; 2 * k + 1 <= d; ++k) {
    Buyer bu;
    bu.demand.edge_ids = {ve[2 * k], ve[2 * k + 1]};
    bu.value = Rat(2);
    buyers.push_back(std::move(bu));
  }
  return Instance(std::move(g), std::move(buyers));
}

std::pair<Instance, LabFamily> gen_lab(int a, uint64_t seed, LabPolicy policy, int sample_count) {
  if (a < 2) throw std::invalid_argument("gen_lab: a must be >= 2");
  long b = a + 3L * a * a * a;
  LabFamily fam;
  fam.a = a;
  fam.b = b;
  fam.eps = Rat(1, 100);

  std::vector<std::pair<int, int>> edges;
  for (long i = 1; i <= b; ++i)
    for (int j = 0; j < a; ++j) edges.push_back({static_cast<int>(i - 1), static_cast<int>(i)});
  Graph g(GraphKind::MultiPath, static_cast<int>(b + 1), std::move(edges), {},
          {a, static_cast<int>(b)});
  auto edge_id = [&](long seg, int copy) { return static_cast<int>((seg - 1) * a + copy); };

  std::vector<Buyer> buyers;
  for (int r = 1; r <= a; ++r) {
    Buyer bu;
    for (long i = 1; i <= b; ++i) bu.demand.edge_ids.push_back(edge_id(i, r));
    bu.value = Rat(1);
    fam.identity_buyers.push_back(static_cast<int>(buyers.size()));
    buyers.push_back(std::move(bu));
  }

  long s_min = 1;
  while (s_min * s_min < a) s_min++;
  std::vector<std::vector<int>> all_s;
  {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(cur.size()) >= s_min) all_s.push_back(cur);
      for (int x = start; x <= a; ++x) {
        cur.push_back(x);
        rec(x + 1);
        cur.pop_back();
      }
    };
    rec(1);
  }
  Rng rng(seed);
  if (policy == LabPolicy::Sampled && static_cast<int>(all_s.size()) > sample_count) {
    rng.shuffle(all_s);
    all_s.resize(sample_count);
  }
  fam.admitted = all_s;

  // Per subset: two stacked rotation squares, then random double-cover
  // columns, resampled until every pair of rows collides somewhere and every
  // row collides with every admitted identity path.
  for (const auto& S : fam.admitted) {
    int s = static_cast<int>(S.size());
    int rows = 2 * s;
    std::vector<std::vector<int>> mat(rows, std::vector<int>(b));
    for (int row = 0; row < rows; ++row)
      for (int col = 0; col < s; ++col) mat[row][col] = S[(row % s + col) % s];
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      std::vector<int> column;
      for (int x : S) {
        column.push_back(x);
        column.push_back(x);
      }
      for (long col = s; col < b; ++col) {
        rng.shuffle(column);
        for (int row = 0; row < rows; ++row) mat[row][col] = column[row];
      }
      ok = true;
      for (int x = 0; x < rows && ok; ++x)
        for (int y = x + 1; y < rows && ok; ++y) {
          bool hit = false;
          for (long col = 0; col < b && !hit; ++col)
            if (mat[x][col] == mat[y][col]) hit = true;
          if (!hit) ok = false;
        }
    }
    if (!ok) throw PropertyResampleExhausted("gen_lab: pairwise collisions not realized");
    fam.matrices.push_back(mat);
    std::vector<int> ids;
    for (int row = 0; row < rows; ++row) {
      Buyer bu;
      for (long i = 1; i <= b; ++i) bu.demand.edge_ids.push_back(edge_id(i, mat[row][i - 1]));
      bu.value = Rat(1) + fam.eps;
      ids.push_back(static_cast<int>(buyers.size()));
      buyers.push_back(std::move(bu));
    }
    fam.family_buyers.push_back(ids);
  }

  // Cross-family collisions for overlapping subsets.
  for (size_t x = 0; x < fam.admitted.size(); ++x)
    for (size_t y = x + 1; y < fam.admitted.size(); ++y) {
      std::set<int> sx(fam.admitted[x].begin(), fam.admitted[x].end());
      bool overlap = false;
      for (int t : fam.admitted[y])
        if (sx.count(t)) overlap = true;
      if (!overlap) continue;
      for (const auto& rx : fam.matrices[x])
        for (const auto& ry : fam.matrices[y]) {
          bool hit = false;
          for (long col = 0; col < b && !hit; ++col)
            if (rx[col] == ry[col]) hit = true;
          if (!hit)
            throw PropertyResampleExhausted("gen_lab: cross-family collision missing");
        }
    }

  return {Instance(std::move(g), std::move(buyers)), std::move(fam)};
}

// ---------------------------------------------------------------------------

Gadget make_gadget(int strands) {
  Gadget g;
  g.strands = strands;
  g.left_port.assign(strands + 1, -1);
  g.right_port.assign(strands + 1, -1);
  int next = 0;
  for (int j = 1; j <= strands; ++j) g.left_port[j] = next++;
  for (int j = 1; j <= strands; ++j) g.right_port[j] = next++;
  for (int i = 1; i <= strands; ++i)
    for (int j = i + 1; j <= strands; ++j) g.crossing[{i, j}] = next++;
  g.num_vertices = next;
  g.strand_vertices.assign(strands + 1, {});
  for (int j = 1; j <= strands; ++j) {
    auto& chain = g.strand_vertices[j];
    chain.push_back(g.left_port[j]);
    // Straight wires from left height j to right height reversed; the
    // crossing with wire j' comes in increasing j' order along the wire.
    for (int other = 1; other <= strands; ++other) {
      if (other == j) continue;
      chain.push_back(g.crossing[std::minmax(j, other)]);
    }
    chain.push_back(g.right_port[strands + 1 - j]);
    for (size_t i = 0; i + 1 < chain.size(); ++i) g.edges.push_back({chain[i], chain[i + 1]});
  }
  return g;
}

namespace {

std::vector<int> strand_prefix(const Gadget& g, int strand, int upto_vertex) {
  std::vector<int> out;
  for (int v : g.strand_vertices[strand]) {
    out.push_back(v);
    if (v == upto_vertex) break;
  }
  return out;
}

std::vector<int> strand_suffix(const Gadget& g, int strand, int from_vertex) {
  std::vector<int> out;
  bool on = false;
  for (int v : g.strand_vertices[strand]) {
    if (v == from_vertex) on = true;
    if (on) out.push_back(v);
  }
  return out;
}

// Recursive rerouting over the first r strands; f maps strand -> target
// right-port label (1-based).
std::vector<std::vector<int>> route_rec(const Gadget& g, int r, std::vector<int> f) {
  int a = g.strands;
  if (r == 1) {
    return {{}, g.strand_vertices[1]};  // 1-based result
  }
  int own_target = a + 1 - r;  // strand r's own right port label
  if (f[r] == own_target) {
    std::vector<int> f2(f.begin(), f.begin() + r);
    auto paths = route_rec(g, r - 1, f2);
    paths.push_back(g.strand_vertices[r]);
    return paths;
  }
  int j0 = -1;
  for (int j = 1; j < r; ++j)
    if (f[j] == own_target) j0 = j;
  std::vector<int> f2(f.begin(), f.begin() + r);
  f2[j0] = f[r];
  auto paths = route_rec(g, r - 1, f2);
  // The rerouted strand j0 must meet strand r; splice at the crossing
  // closest to strand r's left port.
  std::set<int> on_j0(paths[j0].begin(), paths[j0].end());
  int x_star = -1;
  for (int v : g.strand_vertices[r])
    if (on_j0.count(v)) { x_star = v; break; }
  if (x_star < 0) throw std::logic_error("route_permutation: strands fail to meet");
  std::vector<int> p_r = strand_prefix(g, r, x_star);
  {
    bool after = false;
    for (int v : paths[j0]) {
      if (after) p_r.push_back(v);
      if (v == x_star) after = true;
    }
  }
  std::vector<int> p_j0;
  for (int v : paths[j0]) {
    p_j0.push_back(v);
    if (v == x_star) break;
  }
  {
    auto rest = strand_suffix(g, r, x_star);
    for (size_t i = 1; i < rest.size(); ++i) p_j0.push_back(rest[i]);
  }
  paths[j0] = p_j0;
  paths.push_back(p_r);
  return paths;
}

}  // namespace

std::vector<std::vector<int>> route_permutation(const Gadget& g, const std::vector<int>& sigma) {
  int a = g.strands;
  if (static_cast<int>(sigma.size()) != a + 1)
    throw std::invalid_argument("route_permutation: sigma must be 1-based of size strands+1");
  std::vector<int> f(a + 1);
  for (int j = 1; j <= a; ++j) f[j] = sigma[j];
  auto paths = route_rec(g, a, f);
  // paths[j] is a vertex chain from left_port[j] to right_port[f[j]].
  return paths;
}

GridInstance gen_grid_instance(int a, uint64_t seed) {
  if (a < 2 || a > 4) throw BudgetExceeded("gen_grid_instance: a must be in [2,4]");
  long b = a + 3L * a * a * a;

  // Port columns 1..b of a vertices each, gadgets between consecutive columns.
  GridInstance out{Instance(Graph(GraphKind::General, 1, {}), {}), a, b, {}};
  int num_vertices = 0;
  auto port = [&](long col, int j) { return static_cast<int>((col - 1) * a + (j - 1)); };
  num_vertices = static_cast<int>(b * a);

  Gadget gadget = make_gadget(a);
  std::vector<std::pair<int, int>> edges;
  // Per gadget: map local vertices to global ids (ports shared).
  std::vector<std::vector<int>> local_to_global(b);  // gadget i between columns i, i+1
  std::vector<std::map<std::pair<int, int>, int>> gadget_edge_id(b);
  for (long i = 1; i < b; ++i) {
    std::vector<int> map_local(gadget.num_vertices, -1);
    for (int j = 1; j <= a; ++j) {
      map_local[gadget.left_port[j]] = port(i, j);
      map_local[gadget.right_port[j]] = port(i + 1, j);
    }
    for (int v = 0; v < gadget.num_vertices; ++v)
      if (map_local[v] < 0) map_local[v] = num_vertices++;
    for (auto [x, y] : gadget.edges) {
      edges.push_back({map_local[x], map_local[y]});
      gadget_edge_id[i][std::minmax(map_local[x], map_local[y])] =
          static_cast<int>(edges.size());
    }
    local_to_global[i] = std::move(map_local);
  }
  Graph g(GraphKind::General, num_vertices, edges);

  // Identity routing per gadget carries the parallel family; the row paths
  // use the two matchings their columns induce.
  auto lab = gen_lab(a, seed, LabPolicy::All);
  const LabFamily& fam = lab.second;

  auto path_edges = [&](long i, const std::vector<int>& local_chain) {
    std::vector<int> ids;
    for (size_t t = 0; t + 1 < local_chain.size(); ++t) {
      int x = local_to_global[i][local_chain[t]];
      int y = local_to_global[i][local_chain[t + 1]];
      ids.push_back(gadget_edge_id[i].at(std::minmax(x, y)));
    }
    return ids;
  };

  std::vector<int> identity(a + 1);
  std::iota(identity.begin(), identity.end(), 0);
  auto id_routes_local = route_permutation(gadget, identity);

  std::vector<Buyer> buyers;
  for (int r = 1; r <= a; ++r) {
    Buyer bu;
    for (long i = 1; i < b; ++i) {
      auto ids = path_edges(i, id_routes_local[r]);
      bu.demand.edge_ids.insert(bu.demand.edge_ids.end(), ids.begin(), ids.end());
    }
    bu.value = Rat(1);
    out.identity_buyers.push_back(static_cast<int>(buyers.size()));
    buyers.push_back(std::move(bu));
  }

  // Family rows: per gadget the transitions (entry copy -> exit copy) form a
  // 2-regular bipartite multigraph, which splits into two matchings by
  // alternating along its even cycles; each matching is routed separately.
  for (size_t si = 0; si < fam.admitted.size(); ++si) {
    const auto& mat = fam.matrices[si];
    int rows = static_cast<int>(mat.size());
    std::vector<Buyer> row_buyers(rows);
    for (int row = 0; row < rows; ++row) row_buyers[row].value = Rat(1) + fam.eps;
    for (long i = 1; i < b; ++i) {
      // Split the rows into two per-gadget matchings.
      std::vector<std::vector<int>> at_from(a + 1), at_to(a + 1);
      for (int row = 0; row < rows; ++row) {
        at_from[mat[row][i - 1]].push_back(row);
        at_to[mat[row][i]].push_back(row);
      }
      std::vector<int> side(rows, -1);
      for (int row0 = 0; row0 < rows; ++row0) {
        if (side[row0] >= 0) continue;
        // Walk the alternating cycle through shared entry/exit copies.
        int cur = row0, color = 0;
        while (side[cur] < 0) {
          side[cur] = color;
          // Partner sharing the entry copy gets the other color, then hop to
          // the row sharing that partner's exit copy, and so on.
          const auto& from_pair = at_from[mat[cur][i - 1]];
          int partner = from_pair[0] == cur ? from_pair[1] : from_pair[0];
          if (side[partner] < 0) side[partner] = 1 - color;
          const auto& to_pair = at_to[mat[partner][i]];
          int next = to_pair[0] == partner ? to_pair[1] : to_pair[0];
          cur = next;
          // `cur` shares its exit with `partner`, so it keeps `color`.
        }
      }
      for (int group = 0; group < 2; ++group) {
        std::vector<int> sigma(a + 1);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::vector<bool> target_used(a + 1, false);
        std::vector<int> row_of_strand(a + 1, -1);
        for (int row = 0; row < rows; ++row) {
          if (side[row] != group) continue;
          int from = mat[row][i - 1], to = mat[row][i];
          if (row_of_strand[from] >= 0 || target_used[to])
            throw std::logic_error("gen_grid_instance: matching split failed");
          sigma[from] = to;
          target_used[to] = true;
          row_of_strand[from] = row;
        }
        std::vector<int> free_targets;
        for (int t = 1; t <= a; ++t)
          if (!target_used[t]) free_targets.push_back(t);
        size_t fi = 0;
        for (int from = 1; from <= a; ++from)
          if (row_of_strand[from] < 0) sigma[from] = free_targets[fi++];
        auto routes = route_permutation(gadget, sigma);
        for (int from = 1; from <= a; ++from) {
          int row = row_of_strand[from];
          if (row < 0) continue;
          auto ids = path_edges(i, routes[from]);
          auto& dst = row_buyers[row].demand.edge_ids;
          dst.insert(dst.end(), ids.begin(), ids.end());
        }
      }
    }
    for (auto& bu : row_buyers) buyers.push_back(std::move(bu));
  }
  out.inst = Instance(std::move(g), std::move(buyers));
  return out;
}

Instance gen_setpacking_hardness(int r) {
  if (r < 3) throw std::invalid_argument("gen_setpacking_hardness: r must be >= 3");
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> id_of;
  for (int x = 0; x < r; ++x)
    for (int y = x + 1; y < r; ++y) {
      edges.push_back({x, y});
      id_of[{x, y}] = static_cast<int>(edges.size());
    }
  Graph g(GraphKind::General, r, std::move(edges));
  std::vector<Buyer> buyers;
  {
    Buyer b0;
    for (int e = 1; e <= static_cast<int>(id_of.size()); ++e) b0.demand.edge_ids.push_back(e);
    b0.value = Rat(1);
    b0.is_set_demand = true;
    buyers.push_back(std::move(b0));
  }
  for (int x = 0; x < r; ++x) {
    Buyer b;
    for (int y = 0; y < r; ++y) {
      if (x == y) continue;
      b.demand.edge_ids.push_back(id_of.at(std::minmax(x, y)));
    }
    std::sort(b.demand.edge_ids.begin(), b.demand.edge_ids.end());
    b.value = Rat(3, r);
    b.is_set_demand = true;
    buyers.push_back(std::move(b));
  }
  return Instance(std::move(g), std::move(buyers));
}

OuterplanarLb gen_outerplanar_lb(int a, uint64_t seed) {
  if (a < 2 || a > 5) throw BudgetExceeded("gen_outerplanar_lb: a must be in [2,5]");
  auto lab = gen_lab(a, seed, LabPolicy::All);
  const LabFamily& fam = lab.second;
  long b = fam.b;

  // Per segment: 2^{a-1} subdivision slots; parallel copy j travels with
  // stride 2^{a-j}, so copies are edge-disjoint dyadic detours.
  int slots = 1 << (a - 1);
  long verts_per_seg = slots;  // interior slots 1..slots-1 plus the next hub
  int num_vertices = static_cast<int>(b * verts_per_seg + 1);
  auto hub = [&](long i) { return static_cast<int>(i * verts_per_seg); };  // i = 0..b
  auto slot = [&](long i, int t) {  // segment i, slot t in (0, slots)
    return static_cast<int>((i - 1) * verts_per_seg + t);
  };

  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> id_of;
  std::vector<std::vector<std::vector<int>>> route_edges(b + 1,
                                                         std::vector<std::vector<int>>(a + 1));
  for (long i = 1; i <= b; ++i) {
    for (int copy = 1; copy <= a; ++copy) {
      int stride = 1 << (a - copy);
      std::vector<int> chain;
      chain.push_back(hub(i - 1));
      for (int t = stride; t < slots; t += stride) chain.push_back(slot(i, t));
      chain.push_back(hub(i));
      for (size_t t = 0; t + 1 < chain.size(); ++t) {
        auto key = std::minmax(chain[t], chain[t + 1]);
        if (!id_of.count(key)) {
          edges.push_back({key.first, key.second});
          id_of[key] = static_cast<int>(edges.size());
        }
        route_edges[i][copy].push_back(id_of[key]);
      }
    }
  }
  std::vector<int> order(num_vertices);
  std::iota(order.begin(), order.end(), 0);
  Graph g(GraphKind::Outerplanar, num_vertices, edges, order);

  OuterplanarLb out{Instance(Graph(GraphKind::General, 1, {}), {}), a, b, fam.admitted, {}, {}};
  std::vector<Buyer> buyers;
  auto lift = [&](const Instance& src, int j) {
    const Buyer& orig = src.buyer(j);
    Buyer bu;
    bu.value = orig.value;
    for (long i = 1; i <= b; ++i) {
      int copy = (orig.demand.edge_ids[i - 1] - 1) % a + 1;
      auto& ids = route_edges[i][copy];
      bu.demand.edge_ids.insert(bu.demand.edge_ids.end(), ids.begin(), ids.end());
    }
    return bu;
  };
  for (int r = 0; r < a; ++r) {
    out.identity_buyers.push_back(static_cast<int>(buyers.size()));
    buyers.push_back(lift(lab.first, fam.identity_buyers[r]));
  }
  for (const auto& ids : fam.family_buyers) {
    std::vector<int> lifted;
    for (int j : ids) {
      lifted.push_back(static_cast<int>(buyers.size()));
      buyers.push_back(lift(lab.first, j));
    }
    out.family_buyers.push_back(lifted);
  }
  out.inst = Instance(std::move(g), std::move(buyers));
  return out;
}

// ---------------------------------------------------------------------------
// Constructive adversaries.

AdversaryOrder adversary_star_lb(const Instance& inst, const PriceVector& prices) {
  if (inst.buyer_count() != 4) throw TagMismatch("adversary_star_lb: wrong instance");
  auto p = [&](int e) { return prices.at(e); };
  AdversaryOrder out;
  ExtPrice q1 = p(1) + p(2), q4 = p(3) + p(4);
  if (!(q1 <= ExtPrice(inst.buyer(0).value)) || !(q4 <= ExtPrice(inst.buyer(3).value))) {
    out.order = {0, 1, 2, 3};
    return out;
  }
  // Both cheap anchors are affordable: one of the cross buyers gets the hub
  // edge plus a cheap spoke and kills the rest.
  if (p(3) <= ExtPrice(Rat(1))) {
    out.order = {1, 0, 2, 3};
  } else {
    out.order = {2, 0, 1, 3};
  }
  return out;
}

AdversaryOrder adversary_cycle_lb(const Instance& inst, const PriceVector& prices) {
  int m = inst.edge_count();
  AdversaryOrder out;
  ExtPrice total{Rat(0)};
  for (int e = 1; e <= m; ++e) total += prices.at(e);
  std::vector<int> natural(inst.buyer_count());
  std::iota(natural.begin(), natural.end(), 0);
  if (total.is_blocked() || total.finite() >= Rat(m + 1)) {
    out.order = natural;
    return out;
  }
  // Some long arc is strictly affordable; send it first.
  for (int j = 0; j < m; ++j) {
    ExtPrice pq = prices.path_price(inst.buyer(j).demand);
    if (!pq.is_blocked() && pq.finite() < inst.buyer(j).value) {
      out.order.push_back(j);
      for (int x : natural)
        if (x != j) out.order.push_back(x);
      return out;
    }
  }
  out.order = natural;
  return out;
}

AdversaryOrder adversary_path_no_tie_lb(const Instance& inst, const PriceVector& prices) {
  if (inst.buyer_count() != 4) throw TagMismatch("adversary_path_no_tie_lb: wrong instance");
  AdversaryOrder out;
  for (int j = 0; j < 4; ++j) out.tie_decisions[j] = false;
  ExtPrice p1 = prices.at(1), p2 = prices.at(2), p3 = prices.at(3);
  ExtPrice one{Rat(1)}, two{Rat(2)};
  if (p1 <= one && p3 <= one) {
    // The single-edge buyers grab both ends, accepting at equality.
    out.order = {0, 1, 2, 3};
    out.tie_decisions[0] = true;
    out.tie_decisions[1] = true;
    return out;
  }
  if (p1 > one) {
    if (p2 + p3 <= two) {
      out.order = {3, 0, 1, 2};
      out.tie_decisions[3] = true;
      return out;
    }
    out.order = {0, 1, 2, 3};
    return out;
  }
  // Symmetric: p3 > 1.
  if (p1 + p2 <= two) {
    out.order = {2, 0, 1, 3};
    out.tie_decisions[2] = true;
    return out;
  }
  out.order = {0, 1, 2, 3};
  return out;
}

AdversaryOrder adversary_lab(const Instance& inst, const LabFamily& fam,
                             const PriceVector& prices) {
  AdversaryOrder out;
  std::vector<int> natural(inst.buyer_count());
  std::iota(natural.begin(), natural.end(), 0);
  // Identity paths the posted prices keep affordable.
  std::vector<int> s;
  for (int r = 1; r <= fam.a; ++r) {
    int j = fam.identity_buyers[r - 1];
    ExtPrice pq = prices.path_price(inst.buyer(j).demand);
    if (!pq.is_blocked() && pq.finite() <= inst.buyer(j).value) s.push_back(r);
  }
  int family_index = -1;
  for (size_t i = 0; i < fam.admitted.size(); ++i)
    if (fam.admitted[i] == s) family_index = static_cast<int>(i);
  if (family_index >= 0) {
    // Some family buyer of exactly this subset strictly affords; she blocks
    // every surviving identity path at once.
    for (int j : fam.family_buyers[family_index]) {
      ExtPrice pq = prices.path_price(inst.buyer(j).demand);
      if (!pq.is_blocked() && pq.finite() < inst.buyer(j).value) {
        out.order.push_back(j);
        for (int x : natural)
          if (x != j) out.order.push_back(x);
        return out;
      }
    }
  }
  // Few identity paths affordable: families first, identities last.
  for (int x : natural)
    if (std::find(fam.identity_buyers.begin(), fam.identity_buyers.end(), x) ==
        fam.identity_buyers.end())
      out.order.push_back(x);
  for (int j : fam.identity_buyers) out.order.push_back(j);
  return out;
}

AdversaryOrder adversary_setpacking(const Instance& inst, int r, const PriceVector& prices) {
  AdversaryOrder out;
  std::vector<int> natural(inst.buyer_count());
  std::iota(natural.begin(), natural.end(), 0);
  for (int j = 1; j <= r && j < inst.buyer_count(); ++j) {
    ExtPrice pq = prices.path_price(inst.buyer(j).demand);
    if (!pq.is_blocked() && pq.finite() < inst.buyer(j).value) {
      out.order.push_back(j);
      for (int x : natural)
        if (x != j) out.order.push_back(x);
      return out;
    }
  }
  out.order = natural;
  return out;
}

AdversaryOrder adversary_for(const std::string& tag, const Instance& inst,
                             const PriceVector& prices) {
  if (tag == "star-lb") return adversary_star_lb(inst, prices);
  if (tag == "cycle-lb") return adversary_cycle_lb(inst, prices);
  if (tag == "path-no-tie-lb") return adversary_path_no_tie_lb(inst, prices);
  if (tag == "setpacking-hardness") {
    int r = -1;  // item count is r(r-1)/2
    for (int cand = 3; cand <= 64; ++cand)
      if (cand * (cand - 1) / 2 == inst.edge_count()) r = cand;
    if (r < 0) throw TagMismatch("adversary_for: not a complete-graph set instance");
    return adversary_setpacking(inst, r, prices);
  }
  throw TagMismatch("adversary_for: unknown family tag " + tag);
}

}  // namespace tollbooth::gen
