#pragma once

#include "gtensor/rational.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gtensor {

using VertexId = int;
using EdgeId = int;

struct Edge {
  EdgeId id;
  VertexId u;
  VertexId v;
  Rational weight;

  bool operator==(const Edge&) const = default;
  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool touches(VertexId w) const { return w == u || w == v; }
};

// Multigraph with positive rational edge weights. Edge ids are stable and need not be
// contiguous; vertices and edges keep insertion order.
class FractionalGraph {
 public:
  FractionalGraph() = default;
  explicit FractionalGraph(std::vector<VertexId> vertices);
  FractionalGraph(std::vector<VertexId> vertices, std::vector<Edge> edges);

  void add_vertex(VertexId v);
  // Appends an edge with id one larger than the current maximum (0 for the first edge).
  EdgeId add_edge(VertexId u, VertexId v, const Rational& weight = Rational(1));
  void add_edge_with_id(EdgeId id, VertexId u, VertexId v, const Rational& weight = Rational(1));

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool has_vertex(VertexId v) const { return position_.count(v) != 0; }
  std::size_t vertex_position(VertexId v) const;
  const Edge& edge(EdgeId id) const;
  bool has_edge(EdgeId id) const { return edge_index_.count(id) != 0; }
  EdgeId max_edge_id() const;  // -1 when there are no edges
  VertexId max_vertex_id() const;

  // Incident edge ids in ascending order.
  std::vector<EdgeId> incident_edges(VertexId v) const;
  std::size_t degree(VertexId v) const;  // number of incident edges, not weighted
  std::size_t max_degree() const;
  bool unit_weights() const;
  bool integral_weights() const;

  bool operator==(const FractionalGraph& o) const {
    return vertices_ == o.vertices_ && edges_ == o.edges_;
  }

 private:
  void check_endpoints(VertexId u, VertexId v, const Rational& w) const;

  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::map<VertexId, std::size_t> position_;
  std::map<EdgeId, std::size_t> edge_index_;
};

FractionalGraph sum(const FractionalGraph& g, const FractionalGraph& h);
FractionalGraph sum(const std::vector<FractionalGraph>& parts);
// k-fold sum g + g + ... + g.
FractionalGraph multiple(const FractionalGraph& g, unsigned k);
FractionalGraph scale(const FractionalGraph& g, const Rational& a);
BigInt common_denominator(const FractionalGraph& g);

// Replaces each edge of integer weight w by w parallel unit edges. Unit-weight graphs are
// returned unchanged so their edge ids survive. Non-integral weights are first multiplied by
// the common denominator.
FractionalGraph to_multigraph(const FractionalGraph& g);

struct Contraction {
  FractionalGraph graph;
  VertexId new_vertex;
  std::size_t a_cost;
};
// G/U. Vertices outside U keep their order; the new vertex (max id + 1) is appended.
// Edge ids are preserved; edges inside U vanish.
Contraction contract(const FractionalGraph& g, const std::vector<VertexId>& u_set);

// Simple graph on the (expanded) edge ids of g.
FractionalGraph line_graph(const FractionalGraph& g);

struct GraphIsomorphism {
  std::map<VertexId, VertexId> vertex_map;
  std::map<EdgeId, EdgeId> edge_map;
};
inline constexpr std::size_t kIsomorphismVertexLimit = 10;
// Edge weights must agree under the bijection.
std::optional<GraphIsomorphism> find_isomorphism(const FractionalGraph& g, const FractionalGraph& h,
                                                 std::size_t vertex_limit = kIsomorphismVertexLimit);
bool check_isomorphism(const FractionalGraph& g, const FractionalGraph& h, const GraphIsomorphism& iso);

// Generators. Vertices are labelled 1..N.
FractionalGraph empty_graph(std::size_t num_vertices);
FractionalGraph clique(int d);
FractionalGraph star(int d, int center);
FractionalGraph matching(int k);  // edges {2i-1, 2i}
FractionalGraph path(int num_vertices);
FractionalGraph cycle(int d);
// Vertex (r, c), 0-based, gets id r*cols + c + 1. Horizontal edges first, then vertical.
FractionalGraph grid(int rows, int cols);
VertexId grid_vertex(int cols, int r, int c);
FractionalGraph cat(int k, int d);
// Vertex side 1..k, hyperedge side k+1..k+C(k,h) in lexicographic order of h-subsets.
FractionalGraph hyperclique_incidence(int h, int k);
std::vector<std::vector<int>> k_subsets(int k, int h);  // lexicographic, elements 1..k

// Partition of E(g) into matchings (g expanded first).
std::vector<FractionalGraph> edge_partition_into_matchings(const FractionalGraph& g);
bool is_bipartite(const FractionalGraph& g);

// Graph file format: "d <n>" then "e <u> <v> <num>/<den>", vertices numbered 1..n.
void write_graph(std::ostream& out, const FractionalGraph& g);
FractionalGraph read_graph(std::istream& in);
FractionalGraph read_graph_file(const std::string& path);

}  // namespace gtensor
