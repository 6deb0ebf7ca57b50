#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tollbooth/graph.hpp"

namespace tollbooth::gen {

struct AdversaryOrder {
  std::vector<int> order;
  std::map<int, bool> tie_decisions;  // only meaningful for buyer-tie families
};

struct KindUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PropertyResampleExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform instances of a given family; deterministic per seed. Values are
// rationals drawn from [value_lo, value_hi].
Instance gen_random(GraphKind kind, int m, int n, long value_lo, long value_hi, uint64_t seed);

// Random set-packing instance over m items.
Instance gen_random_sets(int m, int n, long value_lo, long value_hi, uint64_t seed);

// The four-edge star whose optimum cannot be sold in full.
Instance gen_star_lb(const Rat& eps);

// The three-edge path where buyer tie-breaking costs a third.
Instance gen_path_no_tie_lb();

// The cycle of m = 10*ceil(1/eps) edges with heavy overlapping arcs.
Instance gen_cycle_lb(const Rat& eps);

// Double star whose unique fractional optimum has denominators d.
Instance gen_tree_d_integral(int d);

// Parallel-path hardness family on the multigraph of a copies per segment.
struct LabFamily {
  int a = 0;
  long b = 0;
  Rat eps;
  std::vector<std::vector<int>> admitted;        // subsets of [a]
  std::vector<std::vector<std::vector<int>>> matrices;  // per subset: rows over columns
  std::vector<std::vector<int>> family_buyers;   // per subset: buyer ids
  std::vector<int> identity_buyers;              // r -> buyer id
};
enum class LabPolicy { All, Sampled };
std::pair<Instance, LabFamily> gen_lab(int a, uint64_t seed, LabPolicy policy = LabPolicy::All,
                                       int sample_count = 8);

// Crossing gadget on `strands` parallel wires: ports, crossing vertices, and
// the wire chains. Used by the bounded-degree rebuild of the parallel-path
// family.
struct Gadget {
  int strands = 0;
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;           // 0-based local vertices
  std::vector<int> left_port, right_port;           // per strand (1-based strands)
  std::vector<std::vector<int>> strand_vertices;    // chains, ports included
  std::map<std::pair<int, int>, int> crossing;      // (i<j) -> vertex
};
Gadget make_gadget(int strands);

// Edge-disjoint reroute of every strand to the right port chosen by sigma
// (1-based permutation). Paths are local vertex chains of the gadget.
std::vector<std::vector<int>> route_permutation(const Gadget& g, const std::vector<int>& sigma);

// Bounded-degree rebuild of the parallel-path family: every vertex has
// degree at most four.
struct GridInstance {
  Instance inst;
  int a = 0;
  long b = 0;
  std::vector<int> identity_buyers;
};
GridInstance gen_grid_instance(int a, uint64_t seed);

// Complete-graph set packing where one buyer wants every edge.
Instance gen_setpacking_hardness(int r);

// Outerplanar embedding of the parallel-path family via dyadic detours.
struct OuterplanarLb {
  Instance inst;
  int a = 0;
  long b = 0;
  std::vector<std::vector<int>> admitted;
  std::vector<std::vector<int>> family_buyers;
  std::vector<int> identity_buyers;
};
OuterplanarLb gen_outerplanar_lb(int a, uint64_t seed);

// Constructive adversaries from the hardness arguments.
AdversaryOrder adversary_star_lb(const Instance& inst, const PriceVector& prices);
AdversaryOrder adversary_cycle_lb(const Instance& inst, const PriceVector& prices);
AdversaryOrder adversary_path_no_tie_lb(const Instance& inst, const PriceVector& prices);
AdversaryOrder adversary_lab(const Instance& inst, const LabFamily& fam,
                             const PriceVector& prices);
AdversaryOrder adversary_setpacking(const Instance& inst, int r, const PriceVector& prices);

struct TagMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dispatch by family tag: star-lb, cycle-lb, path-no-tie-lb, setpacking-hardness.
AdversaryOrder adversary_for(const std::string& tag, const Instance& inst,
                             const PriceVector& prices);

}  // namespace tollbooth::gen
