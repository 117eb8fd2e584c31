#pragma once

#include "gtensor/graph.hpp"
#include "gtensor/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gtensor {

using Index = std::vector<std::uint64_t>;  // 0-based, one entry per mode
using Vec = std::vector<Rational>;

class SparseTensor {
 public:
  SparseTensor() = default;
  explicit SparseTensor(std::vector<std::uint64_t> dims);

  const std::vector<std::uint64_t>& dims() const { return dims_; }
  std::size_t order() const { return dims_.size(); }
  const std::map<Index, Rational>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  void add(const Index& idx, const Rational& c);
  void set(const Index& idx, const Rational& c);
  Rational at(const Index& idx) const;

  bool operator==(const SparseTensor& o) const = default;

 private:
  void check(const Index& idx) const;
  std::vector<std::uint64_t> dims_;
  std::map<Index, Rational> entries_;
};

inline constexpr std::uint64_t kDefaultNonzeroLimit = std::uint64_t(1) << 24;

// Per-vertex local indexing: incident edges ascending by id, index = sum_j f(e_j) n^j with
// 0-based edge values (first edge least significant).
class GraphTensorIndexing {
 public:
  GraphTensorIndexing(const FractionalGraph& multigraph, std::uint64_t n,
                      const std::vector<VertexId>& vertex_order = {});

  std::size_t num_modes() const { return incident_.size(); }
  std::uint64_t n() const { return n_; }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<EdgeId>& incident(std::size_t mode) const { return incident_[mode]; }
  std::uint64_t dim(std::size_t mode) const { return dims_[mode]; }
  const std::vector<std::uint64_t>& dims() const { return dims_; }

  std::uint64_t encode(std::size_t mode, const std::vector<std::uint64_t>& values) const;
  std::vector<std::uint64_t> decode(std::size_t mode, std::uint64_t index) const;
  // Index of mode for a global assignment given as edge-id -> value.
  std::uint64_t index_of(std::size_t mode, const std::map<EdgeId, std::uint64_t>& f) const;

 private:
  std::uint64_t n_;
  std::vector<VertexId> vertices_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::uint64_t> dims_;
};

// T_{G,n}. Non-unit weights are expanded first. When vertex_order is given the modes follow
// it; listed vertices absent from g become dimension-1 modes.
SparseTensor graph_tensor(const FractionalGraph& g, std::uint64_t n,
                          const std::vector<VertexId>& vertex_order = {},
                          std::uint64_t nonzero_limit = kDefaultNonzeroLimit);

// Combined index of (i, j) is i * dim_t + j.
SparseTensor kronecker(const SparseTensor& s, const SparseTensor& t);
SparseTensor tensor_power(const SparseTensor& t, unsigned k);
SparseTensor rank_one(const std::vector<Vec>& factors);

// A mode-wise bijection of indices.
struct Reindex {
  std::vector<std::uint64_t> target_dims;
  std::vector<std::vector<std::uint64_t>> maps;  // maps[mode][source index] = target index
};
SparseTensor apply_reindex(const SparseTensor& t, const Reindex& r);
bool is_bijective(const Reindex& r);

// Maps kronecker(T_{g,n}, T_{h,n}) (both over the vertex order of g+h) onto T_{g+h,n}.
Reindex canonical_reindex_product(const FractionalGraph& g, const FractionalGraph& h, std::uint64_t n);
// Maps kronecker(T_{g,n1}, T_{g,n2}) onto T_{g,n1*n2}.
Reindex canonical_reindex_length(const FractionalGraph& g, std::uint64_t n1, std::uint64_t n2);
// Maps T_{k*g,n} onto T_{g,n^k}.
Reindex canonical_reindex_sum_rule(const FractionalGraph& g, unsigned k, std::uint64_t n);

// Set-multilinear substitution. Each source mode either maps into one target mode (each index
// to a linear combination of target indices) or is dropped (each index to a scalar).
struct ModeSubstitution {
  std::optional<std::size_t> target_mode;
  // images[i] = list of (target index, coefficient); for dropped modes the index is ignored.
  std::vector<std::vector<std::pair<std::uint64_t, Rational>>> images;
};
struct Substitution {
  std::vector<std::uint64_t> target_dims;
  std::vector<ModeSubstitution> modes;
};
SparseTensor apply_substitution(const SparseTensor& t, const Substitution& s);

Substitution project_subgraph(const FractionalGraph& g, const FractionalGraph& h, std::uint64_t n);
Substitution project_length(const FractionalGraph& g, std::uint64_t n, std::uint64_t m);
// Suppresses the degree-2 vertex w; the merged edge keeps the smaller of the two edge ids.
FractionalGraph smooth_vertex(const FractionalGraph& g, VertexId w);
Substitution project_subdivision(const FractionalGraph& g, VertexId w, std::uint64_t n);

// Witness for t <= T_{S_d(center),n}; center is a 1-based mode number.
Substitution star_restriction(const SparseTensor& t, std::size_t center);

// Mode i of u has dimension m_i * n_i with index j * n_i + k; contracts k against h_i.
SparseTensor contract_modes(const SparseTensor& u, const std::vector<Vec>& h);
// (z . h)_j = sum_k z[j * n + k] h[k], for z of length m * n.
Vec contract_vector(const Vec& z, const Vec& h);

Rational evaluate(const SparseTensor& t, const std::vector<Vec>& inputs);

inline constexpr std::uint64_t kFlatteningLimit = 4096;
std::size_t flattening_rank(const SparseTensor& t, const std::vector<std::size_t>& row_modes,
                            std::uint64_t limit = kFlatteningLimit);
std::size_t matrix_rank(std::vector<std::vector<Rational>> rows);
bool is_concise(const SparseTensor& t, std::uint64_t limit = kFlatteningLimit);

// Exact decomposition T = sum_r (x) factors[r][mode].
struct RankDecomposition {
  std::vector<std::uint64_t> dims;
  std::vector<std::vector<Vec>> terms;
  std::size_t rank() const { return terms.size(); }
  SparseTensor to_tensor() const;
};
RankDecomposition monomial_decomposition(const SparseTensor& t);

// Coppersmith-Winograd k-tensors over dims q+2 with basis x_0 .. x_{q+1}.
SparseTensor cw_tensor(unsigned q, unsigned k, bool big);

class EpsilonPolyTensor {
 public:
  using Poly = std::vector<Rational>;  // coefficient of eps^i at position i
  EpsilonPolyTensor(std::vector<std::uint64_t> dims, std::size_t max_degree);

  const std::vector<std::uint64_t>& dims() const { return dims_; }
  std::size_t max_degree() const { return max_degree_; }
  const std::map<Index, Poly>& entries() const { return entries_; }
  // Number of dropped nonzero monomial contributions above max_degree.
  std::size_t truncated_terms() const { return truncated_; }

  // Adds scalar(eps) * (x) factors[mode](eps).
  void add_rank_one(const Poly& scalar, const std::vector<std::vector<Poly>>& factors);
  SparseTensor coefficient(std::size_t degree) const;

 private:
  std::vector<std::uint64_t> dims_;
  std::size_t max_degree_;
  std::map<Index, Poly> entries_;
  std::size_t truncated_ = 0;
};

struct CwDegenerationReport {
  unsigned q = 0, k = 0;
  std::size_t rank_one_terms = 0;
  bool low_orders_vanish = false;
  bool leading_matches = false;
  std::size_t entries_checked = 0;
  std::size_t truncated_terms = 0;
  bool pass() const { return low_orders_vanish && leading_matches; }
};
CwDegenerationReport cw_degeneration_check(unsigned q, unsigned k);

// Dump: "t <d> <dim_1> ... <dim_d>" then "<i_1> ... <i_d> <num>/<den>" with 1-based indices.
void write_tensor(std::ostream& out, const SparseTensor& t);
SparseTensor read_tensor(std::istream& in);

}  // namespace gtensor
