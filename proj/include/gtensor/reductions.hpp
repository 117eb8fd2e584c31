#pragma once

#include "gtensor/graph.hpp"
#include "gtensor/rational.hpp"
#include "gtensor/tensor.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace gtensor {

using IntMatrix = std::vector<std::vector<BigInt>>;

IntMatrix read_int_matrix(std::istream& in);  // whitespace-separated rows, must be square
IntMatrix read_int_matrix_file(const std::string& path);

// Slots of a grid vertex in clockwise order t, r, b, l; -1 where the neighbour is missing.
struct GridSlots {
  std::array<EdgeId, 4> edge{-1, -1, -1, -1};
};
enum Slot { kTop = 0, kRight = 1, kBottom = 2, kLeft = 3 };

struct PermanentGrid {
  std::size_t n = 0;
  FractionalGraph grid;                     // (n+2) x (n+2)
  std::vector<Vec> signatures;              // one per vertex, indexed by the graph-tensor local index
  std::vector<GridSlots> slots;             // per vertex in vertex order
  Rational corner_constant = 1;
};
inline constexpr std::size_t kPermanentMaxN = 6;
PermanentGrid permanent_grid(const IntMatrix& a, const Rational& corner_constant = 1);

struct PermanentResult {
  BigInt value;
  std::size_t grid_side = 0;
  int line_treewidth_upper = 0;
  std::size_t wires = 0;
  std::uint64_t contraction_terms = 0;
};
PermanentResult permanent_reduction(const IntMatrix& a);

struct BruteforceReport {
  BigInt value;
  std::uint64_t assignments = 0;
  std::uint64_t nonzero_assignments = 0;
  bool flips_form_permutations = true;  // exactly n flips, one per row and column, in every nonzero term
};
BruteforceReport permanent_bruteforce_check(const IntMatrix& a, unsigned threads = 1);

// H^N_{h,k}: modes are the h-subsets of [k] in lexicographic order, each of dimension N^h,
// with index sum_j f(s_j) N^j over the sorted elements s_j.
SparseTensor hyperclique_tensor(int h, int k, std::uint64_t big_n);

struct HypercliqueProjectionReport {
  bool pass = false;
  std::size_t source_nonzeros = 0;
  std::size_t target_nonzeros = 0;
};
inline constexpr std::uint64_t kHypercliqueProjectionMaxN = 2;
Substitution hyperclique_substitution(std::uint64_t big_n);
HypercliqueProjectionReport hyperclique_projection_check(std::uint64_t big_n);

struct HypercliqueCount {
  BigInt via_tensor;   // number of 4-cliques from evaluating H^N_{3,4}
  BigInt brute_force;  // number of 4-subsets with every triple a hyperedge
};
HypercliqueCount hyperclique_count(std::uint64_t big_n, const std::vector<std::array<int, 3>>& hyperedges);

}  // namespace gtensor
