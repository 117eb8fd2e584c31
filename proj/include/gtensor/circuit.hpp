#pragma once

#include "gtensor/graph.hpp"
#include "gtensor/rational.hpp"
#include "gtensor/tensor.hpp"
#include "gtensor/treewidth.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

namespace gtensor {

using GateId = std::size_t;

enum class GateKind { Input, Constant, Add, Mul };
const char* gate_kind_name(GateKind k);

struct Wire {
  GateId source;
  Rational label;
};

struct Gate {
  GateKind kind = GateKind::Constant;
  std::size_t mode = 0;     // Input only
  std::uint64_t index = 0;  // Input only
  Rational constant;        // Constant only
  std::vector<Wire> inputs;
};

// Arithmetic circuit over the variables x^{(mode)}_{index}. Size is the number of wires.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::vector<std::uint64_t> mode_dims) : mode_dims_(std::move(mode_dims)) {}

  const std::vector<std::uint64_t>& mode_dims() const { return mode_dims_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<GateId>& outputs() const { return outputs_; }
  std::size_t size() const { return wires_; }
  std::size_t num_gates() const { return gates_.size(); }

  // Builders append in topological order. Input gates are shared per variable.
  GateId input(std::size_t mode, std::uint64_t index);
  GateId constant(const Rational& c);
  GateId add(std::vector<Wire> in);
  GateId mul(std::vector<Wire> in);
  void add_output(GateId g);

  // Raw append without ordering checks (for parsed circuits).
  GateId push(Gate g);

 private:
  GateId append(Gate g, bool check_order);
  std::vector<std::uint64_t> mode_dims_;
  std::vector<Gate> gates_;
  std::vector<GateId> outputs_;
  std::map<std::pair<std::size_t, std::uint64_t>, GateId> input_cache_;
  std::size_t wires_ = 0;
};

// Throws on a cycle or a dangling wire.
std::vector<GateId> topological_order(const Circuit& c);
std::size_t count_wires(const Circuit& c);
std::vector<Rational> evaluate_circuit(const Circuit& c, const std::vector<Vec>& inputs);
Rational evaluate_form(const Circuit& c, const std::vector<Vec>& inputs);  // first output

struct FoldResult {
  Circuit circuit;
  std::size_t wires_before;
  std::size_t wires_after;
};
// Drops zero-labelled wires, folds constant subexpressions, removes dead gates.
FoldResult fold_constants(const Circuit& c);

// Copies src into dst with each input gate replaced by input_map(mode, index); returns the
// images of src's outputs.
std::vector<GateId> splice(Circuit& dst, const Circuit& src,
                           const std::function<GateId(std::size_t, std::uint64_t)>& input_map);

// Yates's algorithm. For z of length n^k (first factor most significant) builds the r^k forms
// sum_p prod_s lambda[i_s][p_s] z_p; lambda is r x n.
std::vector<GateId> yates_forms(Circuit& c, const std::vector<GateId>& z, const std::vector<Vec>& lambda,
                                unsigned k, std::vector<std::size_t>* stage_wires = nullptr);

struct YatesCircuit {
  Circuit circuit;
  std::vector<std::size_t> stage_wires;  // summed over modes, stage q at position q-1
  std::size_t top_wires = 0;
};
inline constexpr std::size_t kYatesConstant = 2;
// Circuit for the form T^{(x)k}; dec must be an exact decomposition of the concise tensor t.
YatesCircuit yates_circuit(const SparseTensor& t, const RankDecomposition& dec, unsigned k);
std::uint64_t yates_size_bound(std::size_t d, unsigned k, std::size_t r);

struct TreedecCircuit {
  Circuit circuit;
  std::size_t contraction_steps = 0;  // bag contractions that multiply at least two factors
  std::uint64_t contraction_terms = 0;  // sum over those steps of n^{|scope|}
};
// Circuit for the form T_{g,n} by contracting along a decomposition of line_graph(g).
TreedecCircuit treedec_circuit(const FractionalGraph& g, std::uint64_t n, const TreeDecomposition& td);
std::uint64_t treedec_size_bound(const FractionalGraph& g, std::uint64_t n, int width);

inline constexpr std::size_t kContractionInternalLimit = 12;
// Lifts a circuit for T_{g/U,n} to one for T_{g,n}.
Circuit contraction_circuit(const FractionalGraph& g, const std::vector<VertexId>& u_set, std::uint64_t n,
                            const Circuit& inner);

struct ContractionStep {
  std::vector<VertexId> u_set;  // vertex ids in the graph current at that step
  std::size_t a_cost;
  BigInt cost;  // |U| * b^{a(U)}
};
struct GridSchedule {
  int n_side, k_side;
  std::uint64_t b;
  std::vector<ContractionStep> steps;
  BigInt total_cost;
  BigInt bound;  // (2b^4 + b) n^2 b^{3n/k}
  FractionalGraph result;
  bool pass() const { return total_cost <= bound; }
};
// Contracts each (n/k)x(n/k) block of the n x n grid: rows first, then the resulting path.
GridSchedule grid_contraction_schedule(int n_side, int k_side, std::uint64_t b);

struct MatchingCircuit {
  Circuit circuit;
  std::size_t core_wires;  // 2k n^b product wires
};
// prod_i sum_a x^{(2i-1)}_a x^{(2i)}_a: the form of T_{b*matching(k),n}.
MatchingCircuit matching_formula_circuit(int k, std::uint64_t n, unsigned b);

struct RankTimesCircuit {
  Circuit circuit;
  std::size_t copies;
  std::size_t linear_wires;
};
// Circuit for U' (x) T^{(x)k} from a circuit for U' and a decomposition of T.
RankTimesCircuit rank_times_circuit(const RankDecomposition& dec, const Circuit& u, unsigned k);

// Dump: "c <modes> <dim...>", "g <id> input <mode> <index>" | "g <id> const <q>" | "g <id> add"
// | "g <id> mul", "w <src> <dst> <q>", "o <id>". Ids and modes 0-based.
void write_circuit(std::ostream& out, const Circuit& c);
Circuit read_circuit(std::istream& in);

}  // namespace gtensor
