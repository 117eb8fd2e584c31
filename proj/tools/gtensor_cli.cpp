#include "gtensor/circuit.hpp"
#include "gtensor/config.hpp"
#include "gtensor/exponents.hpp"
#include "gtensor/graph.hpp"
#include "gtensor/laser.hpp"
#include "gtensor/reductions.hpp"
#include "gtensor/tensor.hpp"
#include "gtensor/treewidth.hpp"
#include "gtensor/verify/oracles.hpp"
#include "gtensor/verify/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace gtensor;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig config;
  OmegaTable table;
  std::ostringstream text;  // extra human-readable output for text mode
};

using Action = std::function<DerivationReport(Context&)>;

std::string graph_string(const FractionalGraph& g) {
  std::ostringstream o;
  write_graph(o, g);
  return o.str();
}

void emit_file(const std::string& path, const std::string& content, Context& ctx, DerivationReport& r,
               const char* key) {
  if (path.empty()) {
    r.results[key] = content;
  } else {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
    r.results[std::string(key) + "_file"] = path;
  }
  (void)ctx;
}

template <class T, class F>
T read_with(const std::string& path, F&& reader) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return reader(in);
}

std::vector<std::size_t> parse_modes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    long v = std::stol(tok);
    if (v < 1) throw std::invalid_argument("modes are 1-based");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

std::vector<Vec> read_inputs(const std::string& path, const std::vector<std::uint64_t>& dims) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Vec> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    Vec v;
    std::string tok;
    while (ls >> tok) v.push_back(parse_rational(tok));
    if (!v.empty()) out.push_back(std::move(v));
  }
  if (out.size() != dims.size()) throw std::invalid_argument("inputs: expected one line per mode");
  for (std::size_t m = 0; m < dims.size(); ++m)
    if (out[m].size() != dims[m]) throw std::invalid_argument("inputs: wrong length on line " + std::to_string(m + 1));
  return out;
}

Json ints(const std::vector<std::uint64_t>& v) { return Json(v); }

FractionalGraph generate(const std::string& kind, const std::vector<int>& a) {
  auto need = [&](std::size_t k) {
    if (a.size() != k) throw std::invalid_argument(kind + " takes " + std::to_string(k) + " integer argument(s)");
  };
  if (kind == "clique") return need(1), clique(a[0]);
  if (kind == "star") return need(2), star(a[0], a[1]);
  if (kind == "matching") return need(1), matching(a[0]);
  if (kind == "path") return need(1), path(a[0]);
  if (kind == "cycle") return need(1), cycle(a[0]);
  if (kind == "grid") return need(2), grid(a[0], a[1]);
  if (kind == "cat") return need(2), cat(a[0], a[1]);
  if (kind == "hyperclique") return need(2), hyperclique_incidence(a[0], a[1]);
  if (kind == "empty") return need(1), empty_graph(static_cast<std::size_t>(a[0]));
  throw std::invalid_argument("unknown graph kind '" + kind + "'");
}

TreeDecomposition best_decomposition(const FractionalGraph& g, const RunConfig& c, int& width, bool& exact) {
  if (g.num_vertices() <= c.treewidth_vertex_limit) {
    auto r = exact_treewidth(g, c.treewidth_vertex_limit);
    width = r.width;
    exact = true;
    return r.td;
  }
  auto b = bounds_treewidth(g);
  width = b.upper;
  exact = false;
  return b.td;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph tensors, arithmetic circuits and exponent bounds"};
  app.require_subcommand(1);
  std::string config_path, format, omega_path, output_dir;
  unsigned threads = 0;
  app.add_option("--config", config_path, "JSON run configuration (overrides $GTENSOR_CONFIG)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--omega-table", omega_path, "Omega table file");
  app.add_option("--output-dir", output_dir, "Directory for persisted JSON reports");
  app.add_option("--threads", threads, "Worker cap")->check(CLI::PositiveNumber);

  Action action;
  auto set = [&](Action a) { action = std::move(a); };

  // graph
  auto* graph = app.add_subcommand("graph", "Graph generation and inspection");
  graph->require_subcommand(1);
  std::string g_kind, g_file, g_file2, g_out, g_set;
  std::vector<int> g_args;
  auto* gen = graph->add_subcommand("gen", "Generate a named graph");
  gen->add_option("kind", g_kind, "clique|star|matching|path|cycle|grid|cat|hyperclique|empty")->required();
  gen->add_option("args", g_args, "Integer parameters")->required();
  gen->add_option("-o,--output", g_out);
  gen->callback([&] {
    set([&](Context& ctx) {
      FractionalGraph g = generate(g_kind, g_args);
      DerivationReport r;
      r.command = "graph gen";
      r.inputs = {{"kind", g_kind}, {"args", g_args}};
      r.results = {{"vertices", g.num_vertices()}, {"edges", g.num_edges()}};
      emit_file(g_out, graph_string(g), ctx, r, "graph");
      return r;
    });
  });
  auto* info = graph->add_subcommand("info", "Degrees, bipartiteness, matchings and treewidths");
  info->add_option("graph", g_file)->required()->check(CLI::ExistingFile);
  info->callback([&] {
    set([&](Context& ctx) {
      FractionalGraph g = read_graph_file(g_file);
      FractionalGraph m = to_multigraph(g);
      DerivationReport r;
      r.command = "graph info";
      r.inputs = {{"graph", g_file}};
      r.results = {{"vertices", g.num_vertices()},
                   {"edges", g.num_edges()},
                   {"expanded_edges", m.num_edges()},
                   {"max_degree", m.max_degree()},
                   {"bipartite", is_bipartite(m)},
                   {"matchings", edge_partition_into_matchings(m).size()}};
      auto tb = bounds_treewidth(g);
      r.results["treewidth_bounds"] = {tb.lower, tb.upper};
      auto l = ltw(m, ctx.config.treewidth_vertex_limit);
      r.results["line_treewidth"] = {{"lower", l.lower}, {"upper", l.upper}, {"exact", l.exact}};
      return r;
    });
  });
  auto* lineg = graph->add_subcommand("line", "Line graph");
  lineg->add_option("graph", g_file)->required()->check(CLI::ExistingFile);
  lineg->add_option("-o,--output", g_out);
  lineg->callback([&] {
    set([&](Context& ctx) {
      FractionalGraph l = line_graph(read_graph_file(g_file));
      DerivationReport r;
      r.command = "graph line";
      r.inputs = {{"graph", g_file}};
      r.results = {{"vertices", l.num_vertices()}, {"edges", l.num_edges()}};
      emit_file(g_out, graph_string(l), ctx, r, "graph");
      return r;
    });
  });
  auto* iso = graph->add_subcommand("iso", "Isomorphism test");
  iso->add_option("a", g_file)->required()->check(CLI::ExistingFile);
  iso->add_option("b", g_file2)->required()->check(CLI::ExistingFile);
  iso->callback([&] {
    set([&](Context& ctx) {
      FractionalGraph a = read_graph_file(g_file), b = read_graph_file(g_file2);
      auto m = find_isomorphism(a, b, ctx.config.isomorphism_vertex_limit);
      DerivationReport r;
      r.command = "graph iso";
      r.inputs = {{"a", g_file}, {"b", g_file2}};
      r.results["isomorphic"] = m.has_value();
      if (m) {
        Json vm = Json::object();
        for (auto [x, y] : m->vertex_map) vm[std::to_string(x)] = y;
        r.results["vertex_map"] = vm;
        r.results["verified"] = check_isomorphism(a, b, *m);
      }
      return r;
    });
  });
  auto* gsum = graph->add_subcommand("sum", "Graph sum (edge ids of the second graph are shifted)");
  gsum->add_option("a", g_file)->required()->check(CLI::ExistingFile);
  gsum->add_option("b", g_file2)->required()->check(CLI::ExistingFile);
  gsum->add_option("-o,--output", g_out);
  gsum->callback([&] {
    set([&](Context& ctx) {
      FractionalGraph s = sum(read_graph_file(g_file), read_graph_file(g_file2));
      DerivationReport r;
      r.command = "graph sum";
      r.inputs = {{"a", g_file}, {"b", g_file2}};
      r.results = {{"vertices", s.num_vertices()}, {"edges", s.num_edges()}};
      emit_file(g_out, graph_string(s), ctx, r, "graph");
      return r;
    });
  });
  auto* gcon = graph->add_subcommand("contract", "Contract a vertex set");
  gcon->add_option("graph", g_file)->required()->check(CLI::ExistingFile);
  gcon->add_option("--set", g_set, "Comma-separated vertex ids")->required();
  gcon->add_option("-o,--output", g_out);
  gcon->callback([&] {
    set([&](Context& ctx) {
      std::vector<VertexId> u;
      std::stringstream ss(g_set);
      std::string tok;
      while (std::getline(ss, tok, ',')) u.push_back(std::stoi(tok));
      auto c = contract(read_graph_file(g_file), u);
      DerivationReport r;
      r.command = "graph contract";
      r.inputs = {{"graph", g_file}, {"set", u}};
      r.results = {{"new_vertex", c.new_vertex}, {"a_cost", c.a_cost}, {"edges", c.graph.num_edges()}};
      emit_file(g_out, graph_string(c.graph), ctx, r, "graph");
      return r;
    });
  });

  // tensor
  auto* tensor = app.add_subcommand("tensor", "Graph tensors, flattenings, CW degenerations");
  tensor->require_subcommand(1);
  std::string t_file, t_rows, t_out;
  std::uint64_t t_n = 2;
  unsigned t_q = 2, t_k = 3;
  bool t_big = false;
  auto* tb = tensor->add_subcommand("build", "Build T_{G,n}");
  tb->add_option("graph", t_file)->required()->check(CLI::ExistingFile);
  tb->add_option("--n", t_n)->required()->check(CLI::PositiveNumber);
  tb->add_option("-o,--output", t_out);
  tb->callback([&] {
    set([&](Context& ctx) {
      SparseTensor t = graph_tensor(read_graph_file(t_file), t_n, {}, ctx.config.tensor_nonzero_limit);
      DerivationReport r;
      r.command = "tensor build";
      r.inputs = {{"graph", t_file}, {"n", t_n}};
      r.results = {{"dims", ints(t.dims())}, {"nonzeros", t.nnz()}};
      std::ostringstream o;
      write_tensor(o, t);
      emit_file(t_out, o.str(), ctx, r, "tensor");
      return r;
    });
  });
  auto* tf = tensor->add_subcommand("flatten", "Flattening rank");
  tf->add_option("tensor", t_file)->required()->check(CLI::ExistingFile);
  tf->add_option("--rows", t_rows, "Comma-separated 1-based row modes")->required();
  tf->callback([&] {
    set([&](Context&) {
      SparseTensor t = read_with<SparseTensor>(t_file, [](std::istream& in) { return read_tensor(in); });
      DerivationReport r;
      r.command = "tensor flatten";
      r.inputs = {{"tensor", t_file}, {"rows", t_rows}};
      r.results = {{"rank", flattening_rank(t, parse_modes(t_rows))}};
      return r;
    });
  });
  auto* tc = tensor->add_subcommand("concise", "Conciseness test");
  tc->add_option("tensor", t_file)->required()->check(CLI::ExistingFile);
  tc->callback([&] {
    set([&](Context&) {
      SparseTensor t = read_with<SparseTensor>(t_file, [](std::istream& in) { return read_tensor(in); });
      DerivationReport r;
      r.command = "tensor concise";
      r.inputs = {{"tensor", t_file}};
      r.results = {{"concise", is_concise(t)}};
      return r;
    });
  });
  auto* tcw = tensor->add_subcommand("cw", "Coppersmith-Winograd tensors and the border-rank degeneration");
  tcw->add_option("--q", t_q)->check(CLI::Range(1u, 16u));
  tcw->add_option("--k", t_k)->check(CLI::Range(2u, 6u));
  tcw->add_flag("--big", t_big);
  tcw->add_option("-o,--output", t_out);
  tcw->callback([&] {
    set([&](Context& ctx) {
      SparseTensor t = cw_tensor(t_q, t_k, t_big);
      DerivationReport r;
      r.command = "tensor cw";
      r.inputs = {{"q", t_q}, {"k", t_k}, {"big", t_big}};
      r.results = {{"dims", ints(t.dims())}, {"nonzeros", t.nnz()}};
      auto rep = cw_degeneration_check(t_q, t_k);
      r.results["degeneration"] = {{"rank_one_terms", rep.rank_one_terms},
                                   {"low_orders_vanish", rep.low_orders_vanish},
                                   {"leading_matches", rep.leading_matches},
                                   {"entries_checked", rep.entries_checked}};
      r.ok = rep.pass();
      if (!t_out.empty()) {
        std::ostringstream o;
        write_tensor(o, t);
        emit_file(t_out, o.str(), ctx, r, "tensor");
      }
      return r;
    });
  });
  unsigned t_copies = 2;
  auto* tsr = tensor->add_subcommand("sum-rule", "Check T_{kG,n} ~ T_{G,n^k}");
  tsr->add_option("graph", t_file)->required()->check(CLI::ExistingFile);
  tsr->add_option("--k", t_copies)->check(CLI::Range(1u, 6u));
  tsr->add_option("--n", t_n)->check(CLI::PositiveNumber);
  tsr->callback([&] {
    set([&](Context&) {
      auto rep = sum_rule_check(read_graph_file(t_file), t_copies, t_n);
      DerivationReport r;
      r.command = "tensor sum-rule";
      r.inputs = {{"graph", t_file}, {"k", t_copies}, {"n", t_n}};
      r.results = {{"equal", rep.pass}, {"nonzeros", rep.nonzeros}};
      r.ok = rep.pass;
      return r;
    });
  });

  // tw
  auto* tw = app.add_subcommand("tw", "Treewidth and line-treewidth");
  std::string tw_file, tw_pace;
  bool tw_line = false;
  tw->add_option("graph", tw_file)->required()->check(CLI::ExistingFile);
  tw->add_flag("--line", tw_line, "Work on the line graph");
  tw->add_option("--pace", tw_pace, "Write the decomposition in PACE .td format");
  tw->callback([&] {
    set([&](Context& ctx) {
      FractionalGraph g = read_graph_file(tw_file);
      FractionalGraph h = tw_line ? line_graph(g) : g;
      DerivationReport r;
      r.command = "tw";
      r.inputs = {{"graph", tw_file}, {"line", tw_line}};
      int width = 0;
      bool exact = false;
      TreeDecomposition td = best_decomposition(h, ctx.config, width, exact);
      auto b = bounds_treewidth(h);
      r.results = {{"vertices", h.num_vertices()}, {"width", width}, {"exact", exact}, {"lower", exact ? width : b.lower},
                   {"bags", td.bags.size()}};
      if (tw_line) {
        auto s = sandwich_check(g);
        r.results["sandwich"] = {{"tw", s.tw}, {"ltw", s.ltw}, {"max_degree", s.max_degree}, {"holds", s.pass}};
      }
      if (!tw_pace.empty()) {
        std::ofstream f(tw_pace);
        if (!f) throw std::runtime_error("cannot write " + tw_pace);
        write_pace(f, td, h);
        r.results["pace_file"] = tw_pace;
      }
      return r;
    });
  });

  // circuit
  auto* circuit = app.add_subcommand("circuit", "Arithmetic circuits");
  circuit->require_subcommand(1);
  auto* cb = circuit->add_subcommand("build", "Construct a circuit");
  std::string c_kind, c_graph, c_out, c_inputs, c_file;
  std::uint64_t c_n = 2, c_seed = 1;
  unsigned c_k = 1, c_b = 1, c_side = 4, c_blocks = 2, c_batches = 20;
  cb->add_option("kind", c_kind, "treedec|yates|matching|grid-schedule")
      ->required()
      ->check(CLI::IsMember({"treedec", "yates", "matching", "grid-schedule"}));
  cb->add_option("graph", c_graph, "Graph file (treedec, yates)");
  cb->add_option("--n", c_n)->check(CLI::PositiveNumber);
  cb->add_option("--k", c_k, "Kronecker power (yates) or matching size");
  cb->add_option("--b", c_b, "Edge multiplicity (matching) or block length (grid-schedule)");
  cb->add_option("--side", c_side, "Grid side (grid-schedule)");
  cb->add_option("--blocks", c_blocks, "Blocks per side (grid-schedule)");
  cb->add_option("-o,--output", c_out);
  cb->callback([&] {
    set([&](Context& ctx) {
      DerivationReport r;
      r.command = "circuit build " + c_kind;
      r.inputs = {{"kind", c_kind}, {"n", c_n}};
      auto need_graph = [&] {
        if (c_graph.empty()) throw UsageError(c_kind + " needs a graph file");
        r.inputs["graph"] = c_graph;
        return read_graph_file(c_graph);
      };
      std::optional<Circuit> out;
      if (c_kind == "treedec") {
        FractionalGraph g = to_multigraph(need_graph());
        int width = 0;
        bool exact = false;
        TreeDecomposition td = best_decomposition(line_graph(g), ctx.config, width, exact);
        auto t = treedec_circuit(g, c_n, td);
        std::uint64_t scope = upow(c_n, static_cast<unsigned>(width + 1));
        r.results = {{"wires", t.circuit.size()},
                     {"ltw", width},
                     {"ltw_exact", exact},
                     {"bound_vertices_n_ltw1", treedec_size_bound(g, c_n, width)},
                     {"contraction_steps", t.contraction_steps},
                     {"contraction_terms", t.contraction_terms},
                     {"contraction_terms_bound", (g.num_vertices() - 1) * scope}};
        out = std::move(t.circuit);
      } else if (c_kind == "yates") {
        SparseTensor t = graph_tensor(need_graph(), c_n, {}, ctx.config.tensor_nonzero_limit);
        auto dec = monomial_decomposition(t);
        auto y = yates_circuit(t, dec, c_k);
        r.inputs["k"] = c_k;
        r.results = {{"wires", y.circuit.size()},
                     {"rank", dec.rank()},
                     {"stage_wires", y.stage_wires},
                     {"top_wires", y.top_wires},
                     {"bound", yates_size_bound(t.order(), c_k, dec.rank())},
                     {"constant", kYatesConstant}};
        out = std::move(y.circuit);
      } else if (c_kind == "matching") {
        auto m = matching_formula_circuit(static_cast<int>(c_k), c_n, c_b);
        r.inputs["k"] = c_k;
        r.inputs["b"] = c_b;
        r.results = {{"wires", m.circuit.size()}, {"core_wires", m.core_wires}};
        out = std::move(m.circuit);
      } else {
        auto s = grid_contraction_schedule(static_cast<int>(c_side), static_cast<int>(c_blocks), c_b);
        r.inputs = {{"kind", c_kind}, {"side", c_side}, {"blocks", c_blocks}, {"b", c_b}};
        Json steps = Json::array();
        for (const auto& st : s.steps) steps.push_back({{"set", st.u_set}, {"a", st.a_cost}, {"cost", st.cost.str()}});
        r.results = {{"steps", steps}, {"total_cost", s.total_cost.str()}, {"bound", s.bound.str()},
                     {"within_bound", s.pass()}};
        r.ok = s.pass();
      }
      if (out) {
        std::ostringstream o;
        write_circuit(o, *out);
        if (c_out.empty()) r.results["circuit_gates"] = out->num_gates();
        else emit_file(c_out, o.str(), ctx, r, "circuit");
      }
      return r;
    });
  });
  auto* ce = circuit->add_subcommand("eval", "Evaluate a circuit");
  ce->add_option("circuit", c_file)->required()->check(CLI::ExistingFile);
  ce->add_option("--inputs", c_inputs, "One line of values per mode");
  ce->add_option("--seed", c_seed, "Random integer inputs in [-3,3] when no inputs file is given");
  ce->callback([&] {
    set([&](Context&) {
      Circuit c = read_with<Circuit>(c_file, [](std::istream& in) { return read_circuit(in); });
      std::vector<Vec> in;
      if (!c_inputs.empty()) {
        in = read_inputs(c_inputs, c.mode_dims());
      } else {
        oracle::Rng rng(c_seed);
        in = oracle::random_inputs(rng, c.mode_dims());
      }
      DerivationReport r;
      r.command = "circuit eval";
      r.inputs = {{"circuit", c_file}};
      if (!c_inputs.empty()) r.inputs["inputs"] = c_inputs;
      else r.inputs["seed"] = c_seed;
      Json vals = Json::array();
      for (const auto& v : evaluate_circuit(c, in)) vals.push_back(to_string(v));
      r.results = {{"outputs", vals}, {"wires", c.size()}};
      return r;
    });
  });
  auto* cc = circuit->add_subcommand("check", "Compare a circuit with T_{G,n} on random inputs");
  cc->add_option("circuit", c_file)->required()->check(CLI::ExistingFile);
  cc->add_option("graph", c_graph)->required()->check(CLI::ExistingFile);
  cc->add_option("--n", c_n)->required()->check(CLI::PositiveNumber);
  cc->add_option("--batches", c_batches)->check(CLI::PositiveNumber);
  cc->add_option("--seed", c_seed);
  cc->callback([&] {
    set([&](Context& ctx) {
      Circuit c = read_with<Circuit>(c_file, [](std::istream& in) { return read_circuit(in); });
      SparseTensor t = graph_tensor(read_graph_file(c_graph), c_n, {}, ctx.config.tensor_nonzero_limit);
      if (c.mode_dims() != t.dims()) throw std::invalid_argument("circuit and graph tensor have different formats");
      oracle::Rng rng(c_seed);
      std::size_t ok = 0;
      for (unsigned b = 0; b < c_batches; ++b) {
        auto in = oracle::random_inputs(rng, t.dims());
        ok += evaluate_form(c, in) == evaluate(t, in);
      }
      DerivationReport r;
      r.command = "circuit check";
      r.inputs = {{"circuit", c_file}, {"graph", c_graph}, {"n", c_n}, {"batches", c_batches}, {"seed", c_seed}};
      r.results = {{"agree", ok}, {"batches", c_batches}, {"wires", c.size()}};
      r.ok = ok == c_batches;
      return r;
    });
  });
  auto* cf = circuit->add_subcommand("fold", "Constant folding and dead-gate removal");
  cf->add_option("circuit", c_file)->required()->check(CLI::ExistingFile);
  cf->add_option("-o,--output", c_out);
  cf->callback([&] {
    set([&](Context& ctx) {
      Circuit c = read_with<Circuit>(c_file, [](std::istream& in) { return read_circuit(in); });
      auto f = fold_constants(c);
      DerivationReport r;
      r.command = "circuit fold";
      r.inputs = {{"circuit", c_file}};
      r.results = {{"wires_before", f.wires_before}, {"wires_after", f.wires_after}};
      if (!c_out.empty()) {
        std::ostringstream o;
        write_circuit(o, f.circuit);
        emit_file(c_out, o.str(), ctx, r, "circuit");
      }
      return r;
    });
  });

  // bound
  auto* bound = app.add_subcommand("bound", "Exponent bound for the d-star sum, or a matching-chromatic bound");
  int b_d = 0;
  std::string b_method = "treewidth", b_graph;
  std::uint64_t b_N = 2;
  bound->add_option("--d", b_d, "Number of modes");
  bound->add_option("--method", b_method)->check(CLI::IsMember({"rank", "treewidth", "mixed"}));
  bound->add_option("--graph", b_graph, "Graph for the edge-chromatic circuit bound")->check(CLI::ExistingFile);
  bound->add_option("--N", b_N, "Length for the edge-chromatic bound")->check(CLI::PositiveNumber);
  bound->callback([&] {
    set([&](Context& ctx) {
      DerivationReport r;
      r.command = "bound";
      if (!b_graph.empty()) {
        auto m = matching_chromatic_bound(read_graph_file(b_graph), b_N);
        r.inputs = {{"graph", b_graph}, {"N", b_N}};
        r.results = {{"matchings", m.matchings}, {"multiplicity", m.multiplicity}, {"vertices", m.vertices},
                     {"wires", m.value.str()}};
        return r;
      }
      if (b_d < 3) throw UsageError("bound needs --d >= 3 or --graph");
      auto b = star_sum_bound(b_d, parse_star_method(b_method), ctx.table, ctx.config.search);
      r.inputs = {{"d", b_d}, {"method", b_method}};
      r.results = {{"bound", rational_json(b.value)}, {"rounded", to_decimal(round_up(b.value, 2), 2)},
                   {"derivation", derivation_json(b.derivation)}};
      print_derivation(ctx.text, b.derivation);
      return r;
    });
  });

  // decompose
  auto* dec = app.add_subcommand("decompose", "Optimal conic decomposition of a small fractional graph");
  std::string d_file;
  dec->add_option("graph", d_file)->required()->check(CLI::ExistingFile);
  dec->callback([&] {
    set([&](Context& ctx) {
      auto res = decompose_optimize(read_graph_file(d_file), ctx.table, ctx.config.search);
      DerivationReport r;
      r.command = "decompose";
      r.inputs = {{"graph", d_file}};
      Json tri = Json::array();
      for (const auto& t : res.decomposition.triangles)
        tri.push_back({{"i", t.i}, {"j", t.j}, {"k", t.k}, {"t", to_string(t.t)}, {"lambda", to_string(t.lambda)}});
      r.results = {{"bound", rational_json(res.bound.value)},
                   {"triangles", tri},
                   {"leftover", graph_string(res.decomposition.leftover)},
                   {"treewidth_part", graph_string(res.decomposition.treewidth_part)},
                   {"candidates", res.candidates},
                   {"lps_solved", res.lps_solved},
                   {"certified", res.certified},
                   {"derivation", derivation_json(res.bound.derivation)}};
      r.ok = res.certified;
      print_derivation(ctx.text, res.bound.derivation);
      return r;
    });
  });

  // table
  auto* tab = app.add_subcommand("table", "Reproduce the exponent table for d = 3, 4, 5, 6, 10");
  tab->callback([&] {
    set([&](Context& ctx) {
      Table1 t = table1(ctx.table, ctx.config.search);
      DerivationReport r;
      r.command = "table";
      Json rows = Json::object();
      auto row = [](const std::vector<Rational>& v) {
        Json a = Json::array();
        for (const auto& x : v) a.push_back(to_decimal(x, 2));
        return a;
      };
      r.results["d"] = t.ds;
      r.results["rank"] = row(t.rank_row);
      r.results["treewidth"] = row(t.treewidth_row);
      r.results["specialized"] = {{"4", to_decimal(t.specialized.at(4), 2)}, {"5", to_decimal(t.specialized.at(5), 2)}};
      r.results["flattening"] = t.flattening_row;
      Json exact = Json::object();
      for (std::size_t i = 0; i < t.ds.size(); ++i)
        exact[std::to_string(t.ds[i])] = {{"rank", to_string(t.rank_exact[i].value)},
                                          {"treewidth", to_string(t.treewidth_exact[i].value)}};
      for (const auto& [d, b] : t.specialized_exact) exact[std::to_string(d)]["specialized"] = to_string(b.value);
      r.results["exact"] = exact;
      print_table1(ctx.text, t);
      return r;
    });
  });

  // laser
  auto* las = app.add_subcommand("laser", "Laser-method bound for tau(K4)");
  std::string l_mode;
  std::vector<unsigned> l_q;
  double l_gamma = 0;
  bool l_opt = false;
  std::size_t l_sweep = 0;
  las->add_option("mode", l_mode, "tau-k4")->check(CLI::IsMember({"tau-k4"}));
  las->add_option("--q", l_q, "q values (default 7, or 2..16 with --optimize)")->check(CLI::Range(2u, 64u));
  las->add_option("--gamma", l_gamma)->check(CLI::Range(0.0, 0.25));
  las->add_flag("--optimize", l_opt);
  las->add_option("--sweep", l_sweep, "Check the entropy inequalities on N grid points");
  las->callback([&] {
    set([&](Context& ctx) {
      DerivationReport r;
      r.command = "laser tau-k4";
      std::vector<unsigned> qs = l_q;
      if (qs.empty()) {
        if (l_opt)
          for (unsigned q = 2; q <= 16; ++q) qs.push_back(q);
        else
          qs.push_back(7);
      }
      r.inputs = {{"q", qs}, {"gamma", l_gamma}, {"optimize", l_opt}, {"sweep", l_sweep}};
      if (l_opt) {
        auto o = laser::optimize_tau_k4(qs, ctx.config.optimize_tolerance);
        Json per = Json::array();
        for (const auto& p : o.per_q) per.push_back({{"q", p.q}, {"gamma", p.gamma}, {"bound", p.bound}});
        r.results["best"] = {{"q", o.best.q}, {"gamma", o.best.gamma}, {"bound", o.best.bound},
                             {"mu", laser::mu(o.best.gamma)}};
        r.results["per_q"] = per;
      } else {
        if (l_gamma >= 0.25) throw UsageError("--gamma must be below 1/4");
        Json vals = Json::array();
        for (unsigned q : qs)
          vals.push_back({{"q", q}, {"bound", laser::tau_k4_bound(q, l_gamma)}});
        auto m = laser::mu_verbose(l_gamma);
        r.results["values"] = vals;
        r.results["mu"] = {{"value", m.mu}, {"min_over_R", m.min_over_r}, {"consistent", m.consistent}};
      }
      if (l_sweep > 0) {
        auto s = laser::verify_lemmas_sweep(l_sweep);
        r.results["sweep"] = {{"points", s.points},          {"min_D", s.min_d},
                              {"max_D2_rel_err", s.max_d2_rel_err}, {"max_Q_excess", s.max_q_excess},
                              {"pass", s.pass()}};
        r.ok = s.pass();
      }
      return r;
    });
  });

  // reduce
  auto* red = app.add_subcommand("reduce", "Hardness reductions");
  red->require_subcommand(1);
  std::string r_matrix;
  bool r_brute = false;
  std::uint64_t r_N = 2;
  auto* perm = red->add_subcommand("permanent", "Permanent via the grid graph tensor");
  perm->add_option("--matrix", r_matrix, "Whitespace-separated integer rows")->required()->check(CLI::ExistingFile);
  perm->add_flag("--bruteforce", r_brute, "Also sum the Holant over all 2^24 assignments (n = 2 only)");
  perm->callback([&] {
    set([&](Context& ctx) {
      IntMatrix a = read_int_matrix_file(r_matrix);
      auto p = permanent_reduction(a);
      BigInt ry = oracle::ryser(a);
      DerivationReport r;
      r.command = "reduce permanent";
      r.inputs = {{"matrix", r_matrix}, {"n", a.size()}};
      r.results = {{"permanent", p.value.str()},       {"ryser", ry.str()},
                   {"grid_side", p.grid_side},          {"line_treewidth_upper", p.line_treewidth_upper},
                   {"wires", p.wires},                  {"contraction_terms", p.contraction_terms}};
      r.ok = p.value == ry;
      if (r_brute) {
        auto b = permanent_bruteforce_check(a, ctx.config.threads);
        r.results["bruteforce"] = {{"value", b.value.str()},
                                   {"assignments", b.assignments},
                                   {"nonzero_assignments", b.nonzero_assignments},
                                   {"flips_form_permutations", b.flips_form_permutations}};
        r.ok = r.ok && b.value == p.value && b.flips_form_permutations;
      }
      return r;
    });
  });
  auto* hc = red->add_subcommand("hyperclique", "Project T_{I,N} onto the hyperclique tensor");
  hc->add_option("--N", r_N)->check(CLI::Range(1, 2));
  hc->callback([&] {
    set([&](Context&) {
      auto h = hyperclique_projection_check(r_N);
      auto parts = edge_partition_into_matchings(hyperclique_incidence(3, 4));
      DerivationReport r;
      r.command = "reduce hyperclique";
      r.inputs = {{"N", r_N}};
      r.results = {{"equal", h.pass},
                   {"source_nonzeros", h.source_nonzeros},
                   {"target_nonzeros", h.target_nonzeros},
                   {"incidence_matchings", parts.size()}};
      r.ok = h.pass;
      return r;
    });
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  std::string v_suite = "all";
  ver->add_option("suite", v_suite)->check(CLI::IsMember(verify::suite_names()));
  ver->callback([&] {
    set([&](Context& ctx) {
      verify::VerifyOptions vo;
      vo.threads = ctx.config.threads;
      vo.sweep_grid = ctx.config.sweep_grid;
      vo.omega_table_path = ctx.config.omega_table_path;
      auto s = verify::run_suite(v_suite, vo, ctx.config.format == OutputFormat::Text ? &ctx.text : nullptr);
      DerivationReport r;
      r.command = "verify " + v_suite;
      Json checks = Json::array();
      for (const auto& c : s.checks)
        checks.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      r.results = {{"passed", s.passed()}, {"total", s.checks.size()}, {"checks", checks}};
      ctx.text << s.passed() << "/" << s.checks.size() << " checks pass\n";
      r.ok = s.pass();
      return r;
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Context ctx;
  try {
    ctx.config = resolve_config(config_path);
    if (!format.empty()) ctx.config.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    if (!omega_path.empty()) ctx.config.omega_table_path = omega_path;
    if (!output_dir.empty()) ctx.config.output_dir = output_dir;
    if (threads > 0) ctx.config.threads = threads;
    validate(ctx.config);
    ctx.table = load_omega_table(ctx.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    auto t0 = std::chrono::steady_clock::now();
    DerivationReport r = action(ctx);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.omega_table = omega_table_json(ctx.table);
    if (ctx.config.format == OutputFormat::Text && !ctx.text.str().empty()) std::cout << ctx.text.str();
    write_report(std::cout, r, ctx.config.format);
    persist_report(ctx.config, r);
    return r.ok ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
