#pragma once

#include "gtensor/graph.hpp"
#include "gtensor/rational.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gtensor {

// Upper bounds on omega(t) for the aspect ratios listed, plus tau(4). Never interpolated.
struct OmegaTable {
  std::map<Rational, Rational> omega;
  Rational tau4;

  static OmegaTable defaults();
  Rational lookup(const Rational& t) const;  // throws naming t when absent
  Rational omega1() const { return lookup(Rational(1)); }
};
// Lines "omega <t> <decimal>" and "tau 4 <decimal>"; '#' starts a comment.
OmegaTable read_omega_table(std::istream& in);
OmegaTable read_omega_table_file(const std::string& path);
void write_omega_table(std::ostream& out, const OmegaTable& table);

// One node of a derivation: a leaf constant, a sum of children, or factor * (single child).
struct DerivationStep {
  enum class Op { Leaf, Sum, Scale };
  std::string rule;
  std::string detail;
  Op op = Op::Leaf;
  Rational factor = 1;
  Rational value;
  std::vector<DerivationStep> children;

  static DerivationStep leaf(std::string rule, std::string detail, Rational value);
  static DerivationStep sum(std::string rule, std::string detail, std::vector<DerivationStep> children);
  static DerivationStep scale(std::string rule, std::string detail, Rational factor, DerivationStep child);
};
Rational recompute(const DerivationStep& s);
bool consistent(const DerivationStep& s);  // every node's value equals its recomputation
void print_derivation(std::ostream& out, const DerivationStep& s, int indent = 0);

struct ExponentBound {
  Rational value;
  DerivationStep derivation;
};

// lambda * Delta(i,j,k) with weight t on {j,k} and weight 1 on {i,j}, {k,i}.
struct WeightedTriangle {
  VertexId i, j, k;
  Rational t;
  Rational lambda;
};
struct ConicDecomposition {
  FractionalGraph target;
  std::vector<WeightedTriangle> triangles;
  FractionalGraph leftover;        // each edge costs 1
  FractionalGraph treewidth_part;  // costs ltw + 1 when nonempty
};
std::optional<std::string> decomposition_error(const ConicDecomposition& dec);
ExponentBound conic_bound(const ConicDecomposition& dec, const OmegaTable& table);

Rational omega_bound_triangle(const Rational& t, const OmegaTable& table);

struct SearchConfig {
  std::size_t vertex_limit = 6;
  std::size_t leftover_edges = 2;   // B2
  std::size_t treewidth_edges = 5;  // B3
  std::size_t mixed_edge_limit = 12;  // cat(k,d) with more expanded edges is skipped
};
struct DecomposeResult {
  ConicDecomposition decomposition;
  ExponentBound bound;
  std::size_t candidates = 0;   // (G2, G3) pairs enumerated
  std::size_t lps_solved = 0;
  bool certified = false;
};
DecomposeResult decompose_optimize(const FractionalGraph& g, const OmegaTable& table,
                                   const SearchConfig& config = {});

enum class StarMethod { Rank, Treewidth, Mixed };
StarMethod parse_star_method(const std::string& s);
const char* star_method_name(StarMethod m);
ExponentBound star_sum_bound(int d, StarMethod method, const OmegaTable& table, const SearchConfig& config = {});
// d/2 + 1 - (7 + (-1)^d) / (4d)
Rational clique_treewidth_closed_form(int d);

struct MatchingChromaticBound {
  std::size_t matchings;   // t
  std::size_t multiplicity;  // b
  std::size_t vertices;
  BigInt value;  // 2^t |V|^t N^{tb}, conditional on submultiplicativity
};
MatchingChromaticBound matching_chromatic_bound(const FractionalGraph& g, std::uint64_t big_n);

struct Table1 {
  std::vector<int> ds;
  std::vector<Rational> rank_row, treewidth_row;      // rounded up to 2 decimals
  std::vector<ExponentBound> rank_exact, treewidth_exact;
  std::map<int, Rational> specialized;                 // d in {4,5}, rounded
  std::map<int, ExponentBound> specialized_exact;
  std::vector<int> flattening_row;
};
Table1 table1(const OmegaTable& table, const SearchConfig& config = {});
void print_table1(std::ostream& out, const Table1& t);

struct SumRuleReport {
  bool pass;
  std::size_t nonzeros;
};
SumRuleReport sum_rule_check(const FractionalGraph& g, unsigned k, std::uint64_t n);

}  // namespace gtensor
