#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tollbooth/rational.hpp"

namespace tollbooth {

// Graph families the pricing algorithms dispatch on. The tag is verified
// structurally at construction; algorithms refuse mismatched inputs instead
// of auto-detecting the class.
enum class GraphKind {
  Path,
  Star,
  Spider,
  Tree,
  Cycle,
  Outerplanar,
  MultiPath,
  General,
};

std::string kind_name(GraphKind k);
GraphKind kind_from_name(const std::string& s);

struct KindError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Undirected graph with 0-based vertices and 1-based edge ids (edge i is
// edges()[i-1]). Parallel edges are allowed only for MultiPath and General.
class Graph {
 public:
  Graph(GraphKind kind, int vertex_count, std::vector<std::pair<int, int>> edges,
        std::vector<int> circular_order = {}, std::pair<int, int> multipath_ab = {0, 0});

  GraphKind kind() const { return kind_; }
  int vertex_count() const { return n_vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::pair<int, int> edge(int id) const { return edges_.at(id - 1); }  // 1-based
  const std::vector<int>& circular_order() const { return circular_order_; }
  std::pair<int, int> multipath_ab() const { return multipath_ab_; }

  int degree(int v) const { return degree_.at(v); }
  const std::vector<int>& incident(int v) const { return incident_.at(v); }
  int other_end(int edge_id, int v) const {
    auto [a, b] = edge(edge_id);
    return a == v ? b : a;
  }

  // Structural check for the claimed kind; returns a violation message or "".
  std::string verify_kind() const;

 private:
  GraphKind kind_;
  int n_vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> circular_order_;
  std::pair<int, int> multipath_ab_;
  std::vector<int> degree_;
  std::vector<std::vector<int>> incident_;
};

// A buyer's demand: an ordered list of 1-based edge ids forming a simple
// path, or (for set packing) an unordered item set.
struct DemandPath {
  std::vector<int> edge_ids;

  bool operator==(const DemandPath& o) const { return edge_ids == o.edge_ids; }
  std::set<int> edge_set() const { return {edge_ids.begin(), edge_ids.end()}; }
};

struct Buyer {
  DemandPath demand;
  Rat value;
  // Set-packing buyers demand arbitrary item sets rather than paths.
  bool is_set_demand = false;
};

enum class TieMode { SellerBreaks, BuyerBreaks };

class Instance {
 public:
  Instance(Graph graph, std::vector<Buyer> buyers)
      : graph_(std::move(graph)), buyers_(std::move(buyers)) {}

  const Graph& graph() const { return graph_; }
  const std::vector<Buyer>& buyers() const { return buyers_; }
  const Buyer& buyer(int j) const { return buyers_.at(j); }
  int buyer_count() const { return static_cast<int>(buyers_.size()); }
  int edge_count() const { return graph_.edge_count(); }

  // Empty iff the graph tag verifies and every demand is a simple path in
  // the graph (or a nonempty set for set demands) with positive value.
  std::vector<std::string> validate() const;

 private:
  Graph graph_;
  std::vector<Buyer> buyers_;
};

// Per-edge prices, indexed by 1-based edge id.
class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(int m) : prices_(m, ExtPrice(Rat(0))) {}
  explicit PriceVector(std::vector<ExtPrice> p) : prices_(std::move(p)) {}
  static PriceVector all_blocked(int m) {
    PriceVector p(m);
    for (auto& x : p.prices_) x = ExtPrice::blocked();
    return p;
  }

  int size() const { return static_cast<int>(prices_.size()); }
  const ExtPrice& at(int edge_id) const { return prices_.at(edge_id - 1); }
  void set(int edge_id, ExtPrice p) { prices_.at(edge_id - 1) = std::move(p); }
  const std::vector<ExtPrice>& raw() const { return prices_; }

  ExtPrice path_price(const DemandPath& q) const {
    ExtPrice total{Rat(0)};
    for (int e : q.edge_ids) total += at(e);
    return total;
  }

 private:
  std::vector<ExtPrice> prices_;
};

// Total price of a demand path; Blocked absorbs.
inline ExtPrice price_of_path(const PriceVector& p, const DemandPath& q) {
  for (int e : q.edge_ids)
    if (e < 1 || e > p.size()) throw std::out_of_range("price_of_path: edge id out of range");
  return p.path_price(q);
}

// Integral allocation: a set of winning buyers whose demands are pairwise
// edge-disjoint in the instance.
struct Allocation {
  std::set<int> winners;

  bool feasible(const Instance& inst, int supply = 1) const {
    std::map<int, int> used;
    for (int j : winners)
      for (int e : inst.buyer(j).demand.edge_ids)
        if (++used[e] > supply) return false;
    return true;
  }

  Rat value(const Instance& inst) const {
    Rat v(0);
    for (int j : winners) v += inst.buyer(j).value;
    return v;
  }
};

std::vector<std::string> validate_instance(const Instance& inst);

// True iff the demand paths of `js` are pairwise edge-disjoint.
bool edge_disjoint(const Instance& inst, const std::vector<int>& js);

}  // namespace tollbooth
