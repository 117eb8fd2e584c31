#include "gtensor/graph.hpp"
#include "gtensor/verify/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace gtensor;

namespace {

std::vector<std::size_t> degrees(const FractionalGraph& g) {
  std::vector<std::size_t> d;
  for (VertexId v : g.vertices()) d.push_back(g.degree(v));
  std::sort(d.begin(), d.end());
  return d;
}

bool isomorphic(const FractionalGraph& a, const FractionalGraph& b) {
  auto m = find_isomorphism(a, b);
  return m && check_isomorphism(a, b, *m);
}

}  // namespace

TEST_CASE("graph sum and multiples") {
  FractionalGraph two = sum(clique(4), clique(4));
  CHECK(two.num_vertices() == 4);
  CHECK(two.num_edges() == 12);
  CHECK(two == multiple(clique(4), 2));
  for (VertexId u = 1; u <= 4; ++u)
    for (VertexId v = u + 1; v <= 4; ++v) {
      int c = 0;
      for (const auto& e : two.edges()) c += (e.u == u && e.v == v) || (e.u == v && e.v == u);
      CHECK(c == 2);
    }
  FractionalGraph g = cat(2, 4);
  CHECK(sum(g, empty_graph(4)) == g);
}

TEST_CASE("star sum is the doubled clique") {
  for (int d = 3; d <= 5; ++d) {
    std::vector<FractionalGraph> stars;
    for (int c = 1; c <= d; ++c) stars.push_back(star(d, c));
    CHECK(isomorphic(sum(stars), multiple(clique(d), 2)));
  }
}

TEST_CASE("scaling and common denominators") {
  CHECK(scale(clique(3), 1) == clique(3));
  FractionalGraph g = cat(3, 5);
  CHECK(scale(scale(g, Rational(1, 2)), 2) == g);
  CHECK(common_denominator(clique(3)) == 1);
  FractionalGraph h = empty_graph(3);
  h.add_edge(1, 2, Rational(1, 2));
  h.add_edge(2, 3, 1);
  CHECK(common_denominator(h) == 2);
  FractionalGraph k = empty_graph(3);
  k.add_edge(1, 2, Rational(2, 3));
  k.add_edge(2, 3, Rational(1, 2));
  CHECK(common_denominator(k) == 6);
  CHECK(to_multigraph(k).num_edges() == 4 + 3);
}

TEST_CASE("contraction") {
  auto c = contract(clique(3), {1, 2});
  CHECK(c.a_cost == 3);
  CHECK(c.graph.num_vertices() == 2);
  CHECK(c.graph.num_edges() == 2);
  for (const auto& e : c.graph.edges()) CHECK((e.u == c.new_vertex || e.v == c.new_vertex));

  FractionalGraph g = path(3);
  g.add_vertex(4);
  auto iso = contract(g, {4});
  CHECK(iso.a_cost == 0);
  CHECK(iso.graph.num_edges() == 2);

  auto row = contract(grid(2, 2), {1, 2});
  CHECK(row.a_cost == 3);
  CHECK(row.graph.num_vertices() == 3);
  CHECK(degrees(row.graph) == std::vector<std::size_t>{2, 2, 2});
  auto rows = contract(row.graph, {3, 4});
  CHECK(rows.graph.num_vertices() == 2);
  CHECK(rows.graph.num_edges() == 2);
}

TEST_CASE("line graphs") {
  auto p = line_graph(path(3));
  CHECK(p.num_vertices() == 2);
  CHECK(p.num_edges() == 1);
  CHECK(isomorphic(line_graph(clique(3)), clique(3)));
  auto oct = line_graph(clique(4));
  CHECK(oct.num_vertices() == 6);
  CHECK(degrees(oct) == std::vector<std::size_t>(6, 4));
  CHECK(line_graph(matching(3)).num_edges() == 0);
  // parallel edges are adjacent in the line graph
  CHECK(line_graph(multiple(path(2), 3)).num_edges() == 3);
}

TEST_CASE("isomorphism") {
  CHECK(isomorphic(clique(3), cycle(3)));
  CHECK_FALSE(find_isomorphism(path(4), star(4, 1)).has_value());
  CHECK_FALSE(find_isomorphism(clique(3), scale(clique(3), 2)).has_value());
  oracle::Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    FractionalGraph g = oracle::random_multigraph(rng, 5, 6);
    std::vector<VertexId> perm = g.vertices();
    std::shuffle(perm.begin(), perm.end(), rng);
    FractionalGraph h(perm);
    std::vector<VertexId> sorted = g.vertices();
    for (const auto& e : g.edges()) {
      auto at = [&](VertexId v) { return perm[std::find(sorted.begin(), sorted.end(), v) - sorted.begin()]; };
      h.add_edge(at(e.u), at(e.v), e.weight);
    }
    CHECK(isomorphic(g, h));
  }
}

TEST_CASE("generators") {
  FractionalGraph c = cat(2, 4);
  CHECK(c.num_vertices() == 4);
  CHECK(to_multigraph(c).num_edges() == 2 + 4);
  FractionalGraph inc = hyperclique_incidence(3, 4);
  CHECK(inc.num_vertices() == 8);
  CHECK(inc.num_edges() == 12);
  CHECK(is_bipartite(inc));
  CHECK(degrees(inc) == std::vector<std::size_t>(8, 3));
  CHECK(isomorphic(grid(2, 2), cycle(4)));
  CHECK(k_subsets(4, 3).size() == 4);
  CHECK(k_subsets(4, 3).front() == std::vector<int>{1, 2, 3});
}

TEST_CASE("matching partitions") {
  CHECK(edge_partition_into_matchings(grid(6, 6)).size() == 4);
  CHECK(edge_partition_into_matchings(matching(3)).size() == 1);
  auto parts = edge_partition_into_matchings(hyperclique_incidence(3, 4));
  REQUIRE(parts.size() == 3);
  for (const auto& p : parts) CHECK(p.num_edges() == 4);

  oracle::Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    FractionalGraph g = oracle::random_multigraph(rng, 6, 8);
    FractionalGraph m = to_multigraph(g);
    auto ps = edge_partition_into_matchings(g);
    std::size_t total = 0;
    for (const auto& p : ps) {
      total += p.num_edges();
      CHECK(p.max_degree() <= 1);
    }
    CHECK(total == m.num_edges());
    if (is_bipartite(m)) CHECK(ps.size() == m.max_degree());
  }
}

TEST_CASE("graph file round trip") {
  FractionalGraph g = cat(3, 5);
  std::stringstream s;
  write_graph(s, g);
  CHECK(read_graph(s) == g);
  std::istringstream bad("d 2\ne 1 3 1\n");
  CHECK_THROWS(read_graph(bad));
}
