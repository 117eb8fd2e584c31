#include "gtensor/circuit.hpp"
#include "gtensor/tensor.hpp"
#include "gtensor/treewidth.hpp"
#include "gtensor/verify/oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace gtensor;

namespace {

// Compares the circuit's first output with the tensor form on random integer inputs.
bool agrees(const Circuit& c, const SparseTensor& t, std::uint64_t seed, int batches = 20) {
  if (c.mode_dims() != t.dims()) return false;
  oracle::Rng rng(seed);
  for (int b = 0; b < batches; ++b) {
    auto in = oracle::random_inputs(rng, t.dims());
    if (evaluate_form(c, in) != oracle::tensor_form(t, in)) return false;
  }
  return true;
}

TreeDecomposition line_td(const FractionalGraph& g) { return exact_treewidth(line_graph(to_multigraph(g))).td; }

SparseTensor w_tensor() {
  SparseTensor w({2, 2, 2});
  w.set({0, 0, 0}, 1);
  w.set({0, 1, 1}, 1);
  w.set({1, 0, 1}, 1);
  return w;
}

}  // namespace

TEST_CASE("basic gates") {
  Circuit c({3});
  GateId x = c.input(0, 1);
  c.add_output(x);
  CHECK(evaluate_form(c, {Vec{4, 5, 6}}) == 5);
  CHECK(c.input(0, 1) == x);

  Circuit d({2, 2});
  GateId s = d.add({{d.mul({{d.input(0, 0), 1}, {d.input(1, 0), 1}}), 1},
                    {d.mul({{d.input(0, 1), 1}, {d.input(1, 1), 1}}), 1}});
  d.add_output(s);
  CHECK(evaluate_form(d, {Vec{1, 2}, Vec{3, 4}}) == 11);
  CHECK(count_wires(d) == d.size());
  CHECK(topological_order(d).size() == d.num_gates());
}

TEST_CASE("treedec circuits evaluate graph tensors") {
  for (auto g : {cycle(4), clique(4), grid(3, 3), clique(3), path(4), cat(2, 4)})
    for (std::uint64_t n : {2, 3}) {
      if (g.num_edges() > 8 && n == 3) continue;
      auto t = treedec_circuit(g, n, line_td(g));
      CHECK(agrees(t.circuit, graph_tensor(g, n), 100 + n));
    }
}

TEST_CASE("treedec contraction accounting") {
  for (auto g : {cycle(4), clique(4), grid(3, 3)})
    for (std::uint64_t n : {2, 3}) {
      int w = exact_treewidth(line_graph(g)).width;
      auto t = treedec_circuit(g, n, line_td(g));
      std::uint64_t scope = upow(n, static_cast<unsigned>(w + 1));
      CHECK(t.contraction_terms <= (g.num_vertices() - 1) * scope);
      CHECK(t.circuit.size() <= 3 * g.num_vertices() * scope);
      CHECK(treedec_size_bound(g, n, w) == g.num_vertices() * scope);
    }
  // a single edge already needs more than |V| n^{w+1} wires: 2n inputs, n products, one sum
  FractionalGraph e = path(2);
  auto t = treedec_circuit(e, 2, line_td(e));
  CHECK(t.circuit.size() > treedec_size_bound(e, 2, 0));
}

TEST_CASE("yates circuits") {
  SparseTensor id({2, 2});
  id.set({0, 0}, 1);
  id.set({1, 1}, 1);
  auto y1 = yates_circuit(id, monomial_decomposition(id), 1);
  CHECK(agrees(y1.circuit, id, 1));

  SparseTensor k3 = graph_tensor(clique(3), 2);
  auto y2 = yates_circuit(k3, monomial_decomposition(k3), 2);
  CHECK(agrees(y2.circuit, tensor_power(k3, 2), 2, 5));

  auto s = yates_circuit(k3, oracle::strassen_k3(), 2);
  CHECK(agrees(s.circuit, tensor_power(k3, 2), 3, 5));
  CHECK(s.circuit.size() <= yates_size_bound(3, 2, 7));

  SparseTensor w = w_tensor();
  auto dec = monomial_decomposition(w);
  REQUIRE(dec.rank() == 3);
  auto y3 = yates_circuit(w, dec, 3);
  CHECK(agrees(y3.circuit, tensor_power(w, 3), 4));
  CHECK(yates_size_bound(3, 3, 3) == kYatesConstant * 3 * 3 * 81);
  CHECK(y3.circuit.size() <= yates_size_bound(3, 3, 3));
}

TEST_CASE("contraction lifting") {
  FractionalGraph k3 = clique(3);
  auto c = contract(k3, {1, 2});
  auto inner = treedec_circuit(c.graph, 2, line_td(c.graph));
  Circuit lifted = contraction_circuit(k3, {1, 2}, 2, inner.circuit);
  CHECK(agrees(lifted, graph_tensor(k3, 2), 5));

  FractionalGraph g = grid(2, 2);
  auto r = contract(g, {1, 2});
  auto in2 = treedec_circuit(r.graph, 2, line_td(r.graph));
  CHECK(agrees(contraction_circuit(g, {1, 2}, 2, in2.circuit), graph_tensor(g, 2), 6));

  FractionalGraph p = path(3);
  p.add_vertex(4);
  auto iso = contract(p, {4});
  auto in3 = treedec_circuit(iso.graph, 2, line_td(iso.graph));
  CHECK(agrees(contraction_circuit(p, {4}, 2, in3.circuit), graph_tensor(p, 2), 7));
}

TEST_CASE("grid contraction schedules") {
  auto trivial = grid_contraction_schedule(2, 2, 2);
  CHECK(trivial.pass());
  auto four = grid_contraction_schedule(4, 2, 2);
  CHECK(four.bound == 34816);
  CHECK(four.pass());
  CHECK(four.result.num_vertices() == 4);
  auto six = grid_contraction_schedule(6, 3, 2);
  CHECK(six.pass());
  CHECK(six.result.num_vertices() == 9);
}

TEST_CASE("matching formula circuits") {
  auto m1 = matching_formula_circuit(1, 2, 1);
  CHECK(m1.core_wires <= 4);
  CHECK(agrees(m1.circuit, graph_tensor(matching(1), 2), 8));
  auto m2 = matching_formula_circuit(2, 2, 1);
  CHECK(agrees(m2.circuit, graph_tensor(matching(2), 2), 9));
  auto m3 = matching_formula_circuit(2, 2, 2);
  CHECK(agrees(m3.circuit, graph_tensor(matching(2), 4), 10));
  CHECK(agrees(m3.circuit, graph_tensor(multiple(matching(2), 2), 2), 11));
}

TEST_CASE("rank-times circuits") {
  oracle::Rng rng(31);
  std::uniform_int_distribution<int> v(-2, 2);
  auto random3 = [&] {
    SparseTensor t({2, 2, 2});
    for (std::uint64_t a = 0; a < 2; ++a)
      for (std::uint64_t b = 0; b < 2; ++b)
        for (std::uint64_t c = 0; c < 2; ++c) t.set({a, b, c}, v(rng));
    return t;
  };
  SparseTensor u = random3(), t = random3();
  auto dec = monomial_decomposition(t);
  auto uc = yates_circuit(u, monomial_decomposition(u), 1).circuit;
  for (unsigned k : {1u, 2u}) {
    auto rt = rank_times_circuit(dec, uc, k);
    CHECK(agrees(rt.circuit, kronecker(u, tensor_power(t, k)), 12 + k, 5));
  }
  SparseTensor r1 = rank_one({Vec{1, 2}, Vec{3, -1}, Vec{1, 1}});
  auto one = rank_times_circuit(monomial_decomposition(r1), uc, 1);
  CHECK(agrees(one.circuit, kronecker(u, r1), 14, 5));
}

TEST_CASE("folding and serialization") {
  Circuit c({2});
  GateId k = c.constant(0);
  GateId x = c.input(0, 0);
  GateId m = c.mul({{k, 1}, {x, 1}});
  c.add_output(c.add({{m, 1}, {c.input(0, 1), 3}}));
  auto f = fold_constants(c);
  CHECK(f.wires_after < f.wires_before);
  CHECK(evaluate_form(f.circuit, {Vec{5, 7}}) == 21);

  auto t = treedec_circuit(clique(4), 2, line_td(clique(4)));
  std::stringstream s;
  write_circuit(s, t.circuit);
  Circuit back = read_circuit(s);
  CHECK(back.size() == t.circuit.size());
  CHECK(agrees(back, graph_tensor(clique(4), 2), 15));
  std::istringstream bad("c 1 2\ng 0 add\nw 5 0 1\no 0\n");
  CHECK_THROWS(read_circuit(bad));
}
