#include "tollbooth/graph.hpp"

#include <functional>
#include <sstream>

namespace tollbooth {

std::string kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::Path: return "path";
    case GraphKind::Star: return "star";
    case GraphKind::Spider: return "spider";
    case GraphKind::Tree: return "tree";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Outerplanar: return "outerplanar";
    case GraphKind::MultiPath: return "multipath";
    case GraphKind::General: return "general";
  }
  return "?";
}

GraphKind kind_from_name(const std::string& s) {
  if (s == "path") return GraphKind::Path;
  if (s == "star") return GraphKind::Star;
  if (s == "spider") return GraphKind::Spider;
  if (s == "tree") return GraphKind::Tree;
  if (s == "cycle") return GraphKind::Cycle;
  if (s == "outerplanar") return GraphKind::Outerplanar;
  if (s == "multipath") return GraphKind::MultiPath;
  if (s == "general") return GraphKind::General;
  throw KindError("unknown graph kind '" + s + "'");
}

Graph::Graph(GraphKind kind, int vertex_count, std::vector<std::pair<int, int>> edges,
             std::vector<int> circular_order, std::pair<int, int> multipath_ab)
    : kind_(kind),
      n_vertices_(vertex_count),
      edges_(std::move(edges)),
      circular_order_(std::move(circular_order)),
      multipath_ab_(multipath_ab) {
  degree_.assign(n_vertices_, 0);
  incident_.assign(n_vertices_, {});
  for (size_t i = 0; i < edges_.size(); ++i) {
    auto [a, b] = edges_[i];
    if (a < 0 || a >= n_vertices_ || b < 0 || b >= n_vertices_ || a == b)
      throw std::invalid_argument("Graph: bad edge endpoints");
    degree_[a]++;
    degree_[b]++;
    incident_[a].push_back(static_cast<int>(i) + 1);
    incident_[b].push_back(static_cast<int>(i) + 1);
  }
  std::string err = verify_kind();
  if (!err.empty()) throw KindError("Graph: " + err);
}

namespace {

// Connectivity + acyclicity over the simple-graph view.
bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<int> stack = {0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : g.incident(v)) {
      int w = g.other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        count++;
        stack.push_back(w);
      }
    }
  }
  return count == g.vertex_count();
}

bool has_parallel_edges(const Graph& g) {
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : g.edges()) {
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) return true;
  }
  return false;
}

bool is_tree(const Graph& g) {
  return !has_parallel_edges(g) && is_connected(g) &&
         g.edge_count() == g.vertex_count() - 1;
}

}  // namespace

std::string Graph::verify_kind() const {
  switch (kind_) {
    case GraphKind::Path: {
      if (!is_tree(*this)) return "path tag on a non-tree";
      int deg3 = 0, deg2 = 0;
      for (int v = 0; v < n_vertices_; ++v) {
        if (degree_[v] > 2) deg3++;
        if (degree_[v] == 2) deg2++;
      }
      if (deg3 > 0) return "path tag on graph with a degree>2 vertex";
      return "";
    }
    case GraphKind::Star: {
      if (!is_tree(*this)) return "star tag on a non-tree";
      if (edge_count() <= 1) return "";
      int centers = 0;
      for (int v = 0; v < n_vertices_; ++v)
        if (degree_[v] == edge_count()) centers++;
      return centers == 1 ? "" : "star tag without a common center";
    }
    case GraphKind::Spider: {
      if (!is_tree(*this)) return "spider tag on a non-tree";
      int big = 0;
      for (int v = 0; v < n_vertices_; ++v)
        if (degree_[v] >= 3) big++;
      return big <= 1 ? "" : "spider tag with several degree>=3 vertices";
    }
    case GraphKind::Tree:
      return is_tree(*this) ? "" : "tree tag on a non-tree";
    case GraphKind::Cycle: {
      if (has_parallel_edges(*this) || !is_connected(*this)) return "cycle tag violated";
      if (edge_count() != n_vertices_ || n_vertices_ < 3) return "cycle tag violated";
      for (int v = 0; v < n_vertices_; ++v)
        if (degree_[v] != 2) return "cycle tag with a degree!=2 vertex";
      return "";
    }
    case GraphKind::Outerplanar: {
      if (has_parallel_edges(*this)) return "outerplanar tag with parallel edges";
      if (static_cast<int>(circular_order_.size()) != n_vertices_)
        return "outerplanar tag without a full circular order";
      std::vector<int> pos(n_vertices_, -1);
      for (int i = 0; i < n_vertices_; ++i) {
        int v = circular_order_[i];
        if (v < 0 || v >= n_vertices_ || pos[v] != -1) return "circular order is not a permutation";
        pos[v] = i;
      }
      // Chords may share endpoints but must not cross properly.
      auto crosses = [&](std::pair<int, int> e, std::pair<int, int> f) {
        int a = pos[e.first], b = pos[e.second], c = pos[f.first], d = pos[f.second];
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        bool c_in = a < c && c < b, d_in = a < d && d < b;
        return c_in != d_in && c != a && c != b && d != a && d != b;
      };
      for (size_t i = 0; i < edges_.size(); ++i)
        for (size_t j = i + 1; j < edges_.size(); ++j)
          if (crosses(edges_[i], edges_[j])) return "crossing chords under the circular order";
      return "";
    }
    case GraphKind::MultiPath: {
      auto [a, b] = multipath_ab_;
      if (a < 1 || b < 1) return "multipath tag without (a,b) parameters";
      if (n_vertices_ != b + 1 || edge_count() != a * b) return "multipath size mismatch";
      for (size_t i = 0; i < edges_.size(); ++i) {
        int seg = static_cast<int>(i) / a;
        auto [u, v] = edges_[i];
        if (std::minmax(u, v) != std::minmax(seg, seg + 1)) return "multipath edge layout mismatch";
      }
      return "";
    }
    case GraphKind::General:
      return "";
  }
  return "";
}

std::vector<std::string> Instance::validate() const {
  std::vector<std::string> out;
  std::string kind_err = graph_.verify_kind();
  if (!kind_err.empty()) out.push_back("KindMismatch: " + kind_err);
  for (int j = 0; j < buyer_count(); ++j) {
    const Buyer& b = buyers_[j];
    std::string tag = "buyer " + std::to_string(j);
    if (!(b.value > Rat(0))) out.push_back("NonPositiveValue: " + tag);
    if (b.demand.edge_ids.empty()) {
      out.push_back("EmptyDemand: " + tag);
      continue;
    }
    for (int e : b.demand.edge_ids)
      if (e < 1 || e > graph_.edge_count()) {
        out.push_back("EdgeOutOfRange: " + tag);
        goto next_buyer;
      }
    if (b.is_set_demand) {
      if (b.demand.edge_set().size() != b.demand.edge_ids.size())
        out.push_back("RepeatedItem: " + tag);
    } else {
      // Simple path: no repeated edges, consecutive edges chain through a
      // shared vertex, and the induced vertex sequence has no repeats.
      if (b.demand.edge_set().size() != b.demand.edge_ids.size()) {
        out.push_back("PathNotSimple: " + tag + " (repeated edge)");
        goto next_buyer;
      }
      const auto& ids = b.demand.edge_ids;
      if (ids.size() == 1) goto next_buyer;
      {
        std::vector<int> verts;
        auto [a0, b0] = graph_.edge(ids[0]);
        auto [a1, b1] = graph_.edge(ids[1]);
        int shared = -1;
        for (int x : {a0, b0})
          for (int y : {a1, b1})
            if (x == y) shared = x;
        if (shared < 0) {
          out.push_back("PathDisconnected: " + tag);
          goto next_buyer;
        }
        verts.push_back(graph_.other_end(ids[0], shared));
        verts.push_back(shared);
        int cur = shared;
        for (size_t i = 1; i < ids.size(); ++i) {
          auto [x, y] = graph_.edge(ids[i]);
          if (x != cur && y != cur) {
            out.push_back("PathDisconnected: " + tag);
            goto next_buyer;
          }
          cur = graph_.other_end(ids[i], cur);
          verts.push_back(cur);
        }
        std::set<int> uniq(verts.begin(), verts.end());
        if (uniq.size() != verts.size()) out.push_back("PathNotSimple: " + tag + " (repeated vertex)");
      }
    }
  next_buyer:;
  }
  return out;
}

std::vector<std::string> validate_instance(const Instance& inst) { return inst.validate(); }

bool edge_disjoint(const Instance& inst, const std::vector<int>& js) {
  std::set<int> used;
  for (int j : js)
    for (int e : inst.buyer(j).demand.edge_ids)
      if (!used.insert(e).second) return false;
  return true;
}

}  // namespace tollbooth
