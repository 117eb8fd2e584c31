#include "gtensor/treewidth.hpp"
#include "gtensor/verify/oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace gtensor;

TEST_CASE("exact treewidth against all elimination orders") {
  CHECK(exact_treewidth(path(5)).width == 1);
  CHECK(exact_treewidth(clique(5)).width == 4);
  CHECK(exact_treewidth(empty_graph(3)).width == 0);
  CHECK(exact_treewidth(grid(3, 3)).width == 3);
  oracle::Rng rng(41);
  for (int i = 0; i < 25; ++i) {
    FractionalGraph g = oracle::random_multigraph(rng, 7, 10);
    auto r = exact_treewidth(g);
    CHECK(r.width == oracle::treewidth_by_orders(g));
    CHECK_FALSE(validation_error(r.td, g).has_value());
    CHECK(elimination_width(g, r.ordering) == r.width);
  }
}

TEST_CASE("line graphs of cliques") {
  CHECK(exact_treewidth(line_graph(clique(4))).width == 4);
  CHECK(exact_treewidth(line_graph(clique(5))).width == 7);
  for (int d = 1; d <= 10; ++d) CHECK(ltw_clique_closed_form(d) >= 0);
  CHECK(ltw_clique_closed_form(1) == 0);
  CHECK(ltw_clique_closed_form(3) == 2);
  CHECK(ltw_clique_closed_form(5) == 7);
  CHECK(ltw_clique_closed_form(8) == 18);
  CHECK(ltw_clique_closed_form(10) == 28);
}

TEST_CASE("heuristic bounds") {
  auto k5 = bounds_treewidth(clique(5));
  CHECK(k5.lower == 4);
  CHECK(k5.upper == 4);
  auto l8 = bounds_treewidth(line_graph(clique(8)));
  CHECK(l8.lower <= 18);
  CHECK(l8.upper >= 18);
  CHECK_FALSE(validation_error(l8.td, line_graph(clique(8))).has_value());
  auto e = bounds_treewidth(empty_graph(0));
  CHECK(e.upper <= 0);
  oracle::Rng rng(43);
  for (int i = 0; i < 15; ++i) {
    FractionalGraph g = oracle::random_multigraph(rng, 8, 12);
    auto b = bounds_treewidth(g);
    int w = exact_treewidth(g).width;
    CHECK(b.lower <= w);
    CHECK(w <= b.upper);
  }
}

TEST_CASE("line treewidth") {
  CHECK(ltw(path(5)).upper == 1);
  CHECK(ltw(clique(3)).upper == 2);
  CHECK(ltw(matching(3)).upper == 0);
  auto r = ltw(clique(4));
  CHECK(r.exact);
  CHECK(r.lower == 4);
}

TEST_CASE("sandwich between treewidth and line treewidth") {
  auto k4 = sandwich_check(clique(4));
  CHECK(k4.tw == 3);
  CHECK(k4.ltw == 4);
  CHECK(k4.pass);
  auto c5 = sandwich_check(cycle(5));
  CHECK(c5.tw == 2);
  CHECK(c5.ltw == 2);
  CHECK(c5.pass);
  CHECK(sandwich_check(star(5, 1)).pass);
  oracle::Rng rng(47);
  for (int i = 0; i < 10; ++i) CHECK(sandwich_check(oracle::random_multigraph(rng, 6, 7)).pass);
}

TEST_CASE("decompositions from orderings and PACE round trip") {
  FractionalGraph g = grid(3, 3);
  auto td = decomposition_from_ordering(g, g.vertices());
  validate(td, g);
  std::stringstream s;
  write_pace(s, td, g);
  auto back = read_pace(s, g);
  CHECK(back.bags == td.bags);
  TreeDecomposition missing;
  missing.bags = {{1, 2}};
  CHECK(validation_error(missing, g).has_value());
}
