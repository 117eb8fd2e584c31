#pragma once

#include "gtensor/graph.hpp"
#include "gtensor/rational.hpp"
#include "gtensor/reductions.hpp"
#include "gtensor/tensor.hpp"

#include <cstdint>
#include <random>
#include <vector>

// Reference implementations that share no code paths with the library routines they check.
namespace gtensor::oracle {

using Rng = std::mt19937_64;

BigInt ryser(const IntMatrix& a);

// Direct sum over all edge assignments; unit-weight graphs only.
SparseTensor graph_tensor(const FractionalGraph& g, std::uint64_t n);
Rational graph_form(const FractionalGraph& g, std::uint64_t n, const std::vector<Vec>& inputs);

Rational tensor_form(const SparseTensor& t, const std::vector<Vec>& inputs);

// Fraction Gaussian elimination with partial pivoting on the first nonzero.
std::size_t rank(std::vector<std::vector<Rational>> m);
std::size_t flattening_rank(const SparseTensor& t, const std::vector<std::size_t>& row_modes);
bool concise(const SparseTensor& t);

// Minimum elimination width over all vertex orders; at most 9 vertices.
int treewidth_by_orders(const FractionalGraph& g);

SparseTensor cw(unsigned q, unsigned k, bool big);

// Seven-term decomposition of T_{K3,2} (2x2 matrix multiplication) in graph-tensor indexing.
RankDecomposition strassen_k3();

FractionalGraph random_multigraph(Rng& rng, int vertices, int edges);
std::vector<Vec> random_inputs(Rng& rng, const std::vector<std::uint64_t>& dims, int lo = -3, int hi = 3);
IntMatrix random_matrix(Rng& rng, std::size_t n, int lo = -3, int hi = 3);

}  // namespace gtensor::oracle
