#include "gtensor/exponents.hpp"
#include "gtensor/treewidth.hpp"

#include <doctest.h>

#include <sstream>

using namespace gtensor;

namespace {

Rational dec(const char* s) { return parse_rational(s); }

FractionalGraph edges_of(std::size_t n, std::initializer_list<std::pair<int, int>> es) {
  FractionalGraph g = empty_graph(n);
  for (auto [u, v] : es) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("omega table") {
  OmegaTable t = OmegaTable::defaults();
  CHECK(t.omega1() == dec("2.375477"));
  CHECK(t.lookup(Rational(1, 2)) == dec("2.046681"));
  CHECK(t.lookup(2) == dec("3.256689"));
  CHECK(t.tau4 == dec("0.772318"));
  CHECK_THROWS_AS(t.lookup(3), std::out_of_range);

  std::stringstream s;
  write_omega_table(s, t);
  OmegaTable back = read_omega_table(s);
  CHECK(back.omega == t.omega);
  CHECK(back.tau4 == t.tau4);

  std::istringstream no_tau("omega 1 2.4\n");
  CHECK_THROWS(read_omega_table(no_tau));
  std::istringstream small("omega 1 1.9\ntau 4 0.8\n");
  CHECK_THROWS(read_omega_table(small));
  std::istringstream zeros("# padded\nomega 1 2.0772318\ntau 4 0.0772318\n");
  CHECK(read_omega_table(zeros).tau4 == dec("0.0772318"));
}

TEST_CASE("derivation trees") {
  auto a = DerivationStep::leaf("a", "", 2);
  auto b = DerivationStep::scale("b", "", Rational(1, 3), DerivationStep::leaf("c", "", 6));
  auto s = DerivationStep::sum("s", "", {a, b});
  CHECK(s.value == 4);
  CHECK(recompute(s) == 4);
  CHECK(consistent(s));
  s.children[1].value = 5;
  CHECK_FALSE(consistent(s));
  std::ostringstream o;
  print_derivation(o, a);
  CHECK(o.str().find("2") != std::string::npos);
}

TEST_CASE("hand decompositions") {
  OmegaTable t = OmegaTable::defaults();
  ConicDecomposition k3;
  k3.target = clique(3);
  k3.triangles = {{1, 2, 3, 1, 1}};
  k3.leftover = empty_graph(3);
  k3.treewidth_part = empty_graph(3);
  CHECK(conic_bound(k3, t).value == t.omega1());

  ConicDecomposition two;
  two.target = multiple(clique(4), 2);
  Rational h(1, 2);
  two.triangles = {{1, 2, 3, h, 1}, {2, 1, 4, h, 1}, {3, 1, 4, h, 1}, {4, 2, 3, h, 1}};
  two.leftover = empty_graph(4);
  two.treewidth_part = edges_of(4, {{1, 4}, {2, 3}});
  auto b = conic_bound(two, t);
  CHECK(b.value == 4 * t.lookup(h) + 1);
  CHECK(consistent(b.derivation));

  ConicDecomposition c;
  c.target = cat(3, 5);
  c.triangles = {{1, 3, 5, 1, 1}, {1, 2, 3, 2, 1}};
  c.leftover = edges_of(5, {{4, 2}});
  c.treewidth_part = edges_of(5, {{3, 4}, {4, 1}, {1, 2}, {2, 5}});
  CHECK_FALSE(decomposition_error(c).has_value());
  CHECK(conic_bound(c, t).value == t.omega1() + t.lookup(2) + 3);

  ConicDecomposition self;
  self.target = cycle(5);
  self.leftover = empty_graph(5);
  self.treewidth_part = cycle(5);
  CHECK(conic_bound(self, t).value == ltw(cycle(5)).upper + 1);

  ConicDecomposition wrong = c;
  wrong.leftover = empty_graph(5);
  CHECK(decomposition_error(wrong).has_value());
  CHECK_THROWS(conic_bound(wrong, t));
}

TEST_CASE("optimized decompositions") {
  OmegaTable t = OmegaTable::defaults();
  auto k3 = decompose_optimize(clique(3), t);
  CHECK(k3.bound.value == t.omega1());
  CHECK(k3.decomposition.triangles.size() == 1);

  auto two = decompose_optimize(multiple(clique(4), 2), t);
  CHECK(two.certified);
  CHECK(two.bound.value == dec("9.186724"));
  CHECK(two.bound.value / 4 == Rational(1, 4) + t.lookup(Rational(1, 2)));
  CHECK(consistent(two.bound.derivation));
  CHECK_FALSE(decomposition_error(two.decomposition).has_value());

  auto c = decompose_optimize(cat(3, 5), t);
  CHECK(c.certified);
  CHECK(c.bound.value == 3 + t.omega1() + t.lookup(2));
  CHECK(c.bound.value == dec("8.632166"));
  CHECK(to_decimal(c.bound.value / 3, 6) == "2.877389");

  CHECK_THROWS(decompose_optimize(clique(7), t));
}

TEST_CASE("star sum bounds") {
  OmegaTable t = OmegaTable::defaults();
  CHECK(star_sum_bound(5, StarMethod::Rank, t).value == dec("3.089272"));
  CHECK(star_sum_bound(3, StarMethod::Rank, t).value == 2 * t.omega1() / 3);
  CHECK(star_sum_bound(6, StarMethod::Treewidth, t).value == Rational(11, 3));
  CHECK(star_sum_bound(10, StarMethod::Treewidth, t).value == Rational(29, 5));
  CHECK(star_sum_bound(4, StarMethod::Mixed, t).value == dec("2.296681"));
  CHECK(star_sum_bound(5, StarMethod::Mixed, t).value == (3 + t.omega1() + t.lookup(2)) / 3);
  for (int d = 3; d <= 10; ++d) {
    CHECK(star_sum_bound(d, StarMethod::Treewidth, t).value == clique_treewidth_closed_form(d));
    CHECK(consistent(star_sum_bound(d, StarMethod::Rank, t).derivation));
  }
  CHECK(parse_star_method("mixed") == StarMethod::Mixed);
  CHECK(std::string(star_method_name(StarMethod::Rank)) == "rank");
  CHECK_THROWS(parse_star_method("best"));
}

TEST_CASE("exponent table") {
  Table1 r = table1(OmegaTable::defaults());
  auto row = [](const std::vector<Rational>& v) {
    std::vector<std::string> s;
    for (const auto& x : v) s.push_back(to_decimal(x, 2));
    return s;
  };
  CHECK(r.ds == std::vector<int>{3, 4, 5, 6, 10});
  CHECK(row(r.rank_row) == std::vector<std::string>{"1.59", "2.32", "3.09", "3.87", "6.96"});
  CHECK(row(r.treewidth_row) == std::vector<std::string>{"2.00", "2.50", "3.20", "3.67", "5.80"});
  CHECK(to_decimal(r.specialized.at(4), 2) == "2.30");
  CHECK(to_decimal(r.specialized.at(5), 2) == "2.88");
  CHECK(r.flattening_row == std::vector<int>{1, 2, 2, 3, 5});
}

TEST_CASE("edge-chromatic circuit bounds") {
  auto g = matching_chromatic_bound(grid(2, 3), 3);
  CHECK(g.matchings == 3);
  CHECK(g.value == ipow(2, 3) * ipow(6, 3) * ipow(3, 3));
  auto m = matching_chromatic_bound(matching(2), 5);
  CHECK(m.matchings == 1);
  CHECK(m.value == 2 * 4 * 5);
  auto h = matching_chromatic_bound(hyperclique_incidence(3, 4), 7);
  CHECK(h.matchings == 3);
  CHECK(h.value == ipow(2, 3) * ipow(8, 3) * ipow(7, 3));
}
