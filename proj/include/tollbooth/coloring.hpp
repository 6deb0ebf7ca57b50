#pragma once

#include <array>
#include <utility>
#include <vector>

#include "tollbooth/graph.hpp"

namespace tollbooth::color {

struct DegreeExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CongestionExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotOddCycles : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Proper edge coloring of a simple graph with at most max_degree+1 colors
// (constructive fan/invert procedure). Returns a color (0-based) per edge.
std::vector<int> vizing_color(int num_vertices, const std::vector<std::pair<int, int>>& edges);

// Partition of a vertex-disjoint union of odd cycles into three matchings.
// Edges are (u,v) pairs over arbitrary vertex ids; returns edge indices.
std::array<std::vector<int>, 3> partition_odd_cycles(
    const std::vector<std::pair<int, int>>& edges);

// Partition of tree paths into d+1 edge-disjoint classes, given that every
// tree edge lies in at most d of the paths. Paths are lists of 1-based edge
// ids of `tree`; returns a class index (0..d) per path.
std::vector<int> color_tree_paths(const Graph& tree, const std::vector<std::vector<int>>& paths,
                                  int d);

// Interval families over a line of `line_length` edges. Each family is a
// union of at most k closed intervals [a,b] (1-based edge ranges); every edge
// lies in at most r families (r >= 2). Same-colored families share no vertex
// of the line. Uses at most 2k(r-1) colors.
std::vector<int> interval_family_coloring(int line_length,
                                          const std::vector<std::vector<std::pair<int, int>>>& families,
                                          int k, int r);

}  // namespace tollbooth::color
