#include "gtensor/exponents.hpp"
#include "gtensor/tensor.hpp"
#include "gtensor/verify/oracles.hpp"
#include "gtensor/verify/verify.hpp"

#include <doctest.h>

#include <sstream>

using namespace gtensor;

namespace {

FractionalGraph single_edge() {
  FractionalGraph g = empty_graph(2);
  g.add_edge(1, 2);
  return g;
}

}  // namespace

TEST_CASE("graph tensor of a single edge is the identity") {
  for (std::uint64_t n = 1; n <= 4; ++n) {
    SparseTensor t = graph_tensor(single_edge(), n);
    CHECK(t.dims() == std::vector<std::uint64_t>{n, n});
    CHECK(t.nnz() == n);
    for (std::uint64_t i = 0; i < n; ++i) CHECK(t.at({i, i}) == 1);
  }
}

TEST_CASE("graph tensor agrees with direct enumeration") {
  oracle::Rng rng(3);
  for (int i = 0; i < 15; ++i) {
    FractionalGraph g = oracle::random_multigraph(rng, 4, 5);
    for (std::uint64_t n : {2, 3}) CHECK(graph_tensor(g, n) == oracle::graph_tensor(g, n));
  }
  CHECK(graph_tensor(clique(4), 2) == oracle::graph_tensor(clique(4), 2));
  CHECK(graph_tensor(cat(2, 4), 2) == oracle::graph_tensor(to_multigraph(cat(2, 4)), 2));
}

TEST_CASE("all-ones evaluation counts assignments") {
  for (auto g : {clique(3), cycle(5), cat(2, 4)}) {
    FractionalGraph m = to_multigraph(g);
    SparseTensor t = graph_tensor(m, 2);
    std::vector<Vec> ones;
    for (auto d : t.dims()) ones.emplace_back(d, Rational(1));
    CHECK(evaluate(t, ones) == Rational(ipow(2, static_cast<unsigned>(m.num_edges()))));
  }
}

TEST_CASE("triangle tensor is matrix multiplication") {
  FractionalGraph k3 = clique(3);
  REQUIRE(k3.edges()[0].u == 1);
  REQUIRE(k3.edges()[0].v == 2);
  REQUIRE(k3.edges()[1].v == 3);
  SparseTensor t = graph_tensor(k3, 2);
  CHECK(t.nnz() == 8);
  oracle::Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    auto m = [&] {
      auto r = oracle::random_matrix(rng, 2);
      std::vector<std::vector<Rational>> out(2, std::vector<Rational>(2));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = Rational(r[i][j]);
      return out;
    };
    auto a = m(), b = m(), c = m();
    std::vector<Vec> in(3, Vec(4));
    for (int i0 = 0; i0 < 2; ++i0)
      for (int i1 = 0; i1 < 2; ++i1) {
        in[0][i0 + 2 * i1] = a[i1][i0];
        in[1][i0 + 2 * i1] = b[i0][i1];
        in[2][i0 + 2 * i1] = c[i1][i0];
      }
    Rational trace = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) trace += a[i][j] * b[j][k] * c[k][i];
    CHECK(evaluate(t, in) == trace);
  }
  CHECK(oracle::strassen_k3().to_tensor() == t);
}

TEST_CASE("kronecker products and canonical reindexings") {
  SparseTensor t = graph_tensor(clique(3), 2);
  SparseTensor one = rank_one({Vec{1}, Vec{1}, Vec{1}});
  CHECK(kronecker(t, one) == t);

  SparseTensor e2 = graph_tensor(single_edge(), 2);
  Reindex r = canonical_reindex_product(single_edge(), single_edge(), 2);
  CHECK(is_bijective(r));
  CHECK(r.target_dims == std::vector<std::uint64_t>{4, 4});
  CHECK(apply_reindex(kronecker(e2, e2), r) == graph_tensor(sum(single_edge(), single_edge()), 2));

  FractionalGraph k3 = clique(3);
  FractionalGraph s = sum(k3, k3);
  SparseTensor prod = kronecker(graph_tensor(k3, 2, s.vertices()), graph_tensor(k3, 2, s.vertices()));
  CHECK(apply_reindex(prod, canonical_reindex_product(k3, k3, 2)) == graph_tensor(s, 2));

  FractionalGraph c4 = cycle(4);
  CHECK(apply_reindex(kronecker(graph_tensor(c4, 2), graph_tensor(c4, 2)), canonical_reindex_length(c4, 2, 2)) ==
        graph_tensor(c4, 4));
}

TEST_CASE("sum rule") {
  CHECK(sum_rule_check(single_edge(), 2, 2).pass);
  CHECK(sum_rule_check(clique(3), 2, 2).pass);
  CHECK(sum_rule_check(path(3), 3, 2).pass);
  CHECK(sum_rule_check(cycle(4), 2, 3).pass);
}

TEST_CASE("random graph-sum and length-rule fixtures") {
  for (const auto& c : verify::graph_sum_fixtures(99, 8)) CHECK_MESSAGE(c.pass, c.detail);
  for (const auto& c : verify::length_rule_fixtures(99, 8)) CHECK_MESSAGE(c.pass, c.detail);
}

TEST_CASE("flattening ranks") {
  for (int k = 1; k <= 2; ++k)
    for (std::uint64_t n = 1; n <= 3; ++n) {
      SparseTensor t = graph_tensor(matching(k), n);
      std::vector<std::size_t> rows;
      for (int i = 0; i < k; ++i) rows.push_back(static_cast<std::size_t>(2 * i));
      CHECK(flattening_rank(t, rows) == upow(n, k));
      CHECK(oracle::flattening_rank(t, rows) == upow(n, k));
    }
  SparseTensor r1 = rank_one({Vec{1, 2}, Vec{0, 3, 1}, Vec{5, -1}});
  CHECK(flattening_rank(r1, {0}) == 1);
  CHECK(flattening_rank(r1, {0, 2}) == 1);
  SparseTensor k3 = graph_tensor(clique(3), 2);
  CHECK(flattening_rank(k3, {0}) == 4);
  CHECK(is_concise(k3));
  CHECK_FALSE(is_concise(rank_one({Vec{1, 0}, Vec{1, 1}})));
  oracle::Rng rng(17);
  for (int i = 0; i < 8; ++i) {
    FractionalGraph g = oracle::random_multigraph(rng, 4, 4);
    SparseTensor t = graph_tensor(g, 2);
    CHECK(flattening_rank(t, {0, 1}) == oracle::flattening_rank(t, {0, 1}));
    CHECK(is_concise(t) == oracle::concise(t));
  }
}

TEST_CASE("projections") {
  FractionalGraph k4 = clique(4);
  FractionalGraph tri = empty_graph(3);
  for (const auto& e : k4.edges())
    if (e.u <= 3 && e.v <= 3) tri.add_edge_with_id(e.id, e.u, e.v);
  SparseTensor projected = apply_substitution(graph_tensor(k4, 2), project_subgraph(k4, tri, 2));
  CHECK(projected == graph_tensor(tri, 2));
  CHECK(projected == graph_tensor(clique(3), 2));
  FractionalGraph c4 = cycle(4);
  FractionalGraph c3 = smooth_vertex(c4, 4);
  CHECK(c3.num_vertices() == 3);
  CHECK(apply_substitution(graph_tensor(c4, 2), project_subdivision(c4, 4, 2)) == graph_tensor(c3, 2));
  SparseTensor p = graph_tensor(cycle(3), 3);
  CHECK(apply_substitution(p, project_length(cycle(3), 3, 3)) == p);
  CHECK(apply_substitution(graph_tensor(path(3), 6), project_length(path(3), 6, 2)) == graph_tensor(path(3), 2));
}

TEST_CASE("star restriction round trip") {
  SparseTensor ghz({2, 2, 2});
  ghz.set({0, 0, 0}, 1);
  ghz.set({1, 1, 1}, 1);
  Substitution s = star_restriction(ghz, 3);
  std::size_t used = 0;
  for (const auto& img : s.modes[2].images) used += img.size();
  CHECK(used == 2);
  CHECK(apply_substitution(graph_tensor(star(3, 3), 2), s) == ghz);

  oracle::Rng rng(23);
  SparseTensor t({2, 2, 2});
  std::uniform_int_distribution<int> v(-3, 3);
  for (std::uint64_t a = 0; a < 2; ++a)
    for (std::uint64_t b = 0; b < 2; ++b)
      for (std::uint64_t c = 0; c < 2; ++c) t.set({a, b, c}, v(rng));
  for (std::size_t c = 1; c <= 3; ++c)
    CHECK(apply_substitution(graph_tensor(star(3, static_cast<int>(c)), 2), star_restriction(t, c)) == t);

  SparseTensor mm = graph_tensor(clique(3), 2);
  CHECK(apply_substitution(graph_tensor(star(3, 1), 4), star_restriction(mm, 1)) == mm);
}

TEST_CASE("mode contraction") {
  oracle::Rng rng(29);
  std::uniform_int_distribution<int> v(-3, 3);
  SparseTensor u({4, 4, 4});
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b)
      for (std::uint64_t c = 0; c < 4; ++c) u.set({a, b, c}, v(rng));
  std::vector<Vec> h(3, Vec(2));
  for (auto& x : h)
    for (auto& y : x) y = v(rng);
  SparseTensor c = contract_modes(u, h);
  CHECK(c.dims() == std::vector<std::uint64_t>{2, 2, 2});
  for (std::uint64_t a = 0; a < 2; ++a)
    for (std::uint64_t b = 0; b < 2; ++b)
      for (std::uint64_t d = 0; d < 2; ++d) {
        Rational want = 0;
        for (std::uint64_t i = 0; i < 2; ++i)
          for (std::uint64_t j = 0; j < 2; ++j)
            for (std::uint64_t k = 0; k < 2; ++k)
              want += u.at({a * 2 + i, b * 2 + j, d * 2 + k}) * h[0][i] * h[1][j] * h[2][k];
        CHECK(c.at({a, b, d}) == want);
      }
  CHECK(contract_vector(Vec{1, 2, 3, 4}, Vec{1, -1}) == Vec{-1, -1});
}

TEST_CASE("Coppersmith-Winograd tensors") {
  CHECK(cw_tensor(2, 3, false).nnz() == 6);
  CHECK(cw_tensor(2, 3, true).nnz() == 9);
  for (unsigned q : {1u, 2u, 3u})
    for (unsigned k : {3u, 4u}) CHECK(cw_tensor(q, k, true) == oracle::cw(q, k, true));
  auto r = cw_degeneration_check(2, 4);
  CHECK(r.pass());
  CHECK(r.rank_one_terms == 4);
}

TEST_CASE("monomial decomposition and powers") {
  SparseTensor t = graph_tensor(clique(3), 2);
  auto dec = monomial_decomposition(t);
  CHECK(dec.rank() == 8);
  CHECK(dec.to_tensor() == t);
  SparseTensor e = graph_tensor(single_edge(), 2);
  CHECK(tensor_power(e, 2).nnz() == 4);
  CHECK(tensor_power(e, 3).dims() == std::vector<std::uint64_t>{8, 8});
}

TEST_CASE("tensor file round trip") {
  SparseTensor t = graph_tensor(cat(2, 4), 2);
  std::stringstream s;
  write_tensor(s, t);
  CHECK(read_tensor(s) == t);
}
