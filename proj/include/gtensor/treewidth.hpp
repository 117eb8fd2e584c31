#pragma once

#include "gtensor/graph.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gtensor {

struct TreeDecomposition {
  std::vector<std::vector<VertexId>> bags;  // each sorted ascending
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;
  // Max bag size - 1; -1 when every bag is empty.
  int width() const;
};

// Checks vertex coverage, edge coverage, bag connectivity, and that the bag graph is a tree.
std::optional<std::string> validation_error(const TreeDecomposition& td, const FractionalGraph& g);
void validate(const TreeDecomposition& td, const FractionalGraph& g);

// Fill-in decomposition of an elimination ordering (vertex ids).
TreeDecomposition decomposition_from_ordering(const FractionalGraph& g, const std::vector<VertexId>& order);
int elimination_width(const FractionalGraph& g, const std::vector<VertexId>& order);

struct TreewidthResult {
  int width;
  TreeDecomposition td;
  std::vector<VertexId> ordering;
};
inline constexpr std::size_t kExactTreewidthLimit = 22;
// Parallel edges are ignored. Width -1 for the graph without vertices.
TreewidthResult exact_treewidth(const FractionalGraph& g, std::size_t vertex_limit = kExactTreewidthLimit);

struct TreewidthBounds {
  int lower;
  int upper;
  TreeDecomposition td;  // width == upper
};
TreewidthBounds bounds_treewidth(const FractionalGraph& g);

struct LineTreewidth {
  int lower;
  int upper;
  bool exact;
  TreeDecomposition td;  // decomposition of line_graph(g), width == upper
  FractionalGraph line;
};
LineTreewidth ltw(const FractionalGraph& g, std::size_t exact_limit = kExactTreewidthLimit);

// ((d-1)/2)^2 + d - 2 for odd d, ((d-2)/2)(d/2) + d - 2 for even d.
int ltw_clique_closed_form(int d);

struct SandwichReport {
  int tw;
  int ltw;
  std::size_t max_degree;
  bool pass;
};
// tw - 1 <= ltw <= (tw + 1) * Delta - 1
SandwichReport sandwich_check(const FractionalGraph& g);

// PACE .td format; vertices are written as 1-based positions in g's vertex order.
void write_pace(std::ostream& out, const TreeDecomposition& td, const FractionalGraph& g);
TreeDecomposition read_pace(std::istream& in, const FractionalGraph& g);

}  // namespace gtensor
