#include "gtensor/exponents.hpp"

#include "gtensor/tensor.hpp"
#include "gtensor/treewidth.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gtensor {

OmegaTable OmegaTable::defaults() {
  OmegaTable t;
  t.omega[Rational(1, 2)] = parse_rational("2.046681");
  t.omega[Rational(1)] = parse_rational("2.375477");
  t.omega[Rational(2)] = parse_rational("3.256689");
  t.tau4 = parse_rational("0.772318");
  return t;
}

Rational OmegaTable::lookup(const Rational& t) const {
  auto it = omega.find(t);
  if (it == omega.end()) throw std::out_of_range("omega table has no entry for t = " + to_string(t));
  return it->second;
}

OmegaTable read_omega_table(std::istream& in) {
  OmegaTable table;
  bool have_tau = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tag, a, b;
    if (!(ls >> tag)) continue;
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("omega table line " + std::to_string(lineno) + ": " + what);
    };
    if (!(ls >> a >> b)) fail("expected two fields after '" + tag + "'");
    Rational key = parse_rational(a), val = parse_rational(b);
    if (tag == "omega") {
      if (key <= 0) fail("aspect ratio must be positive");
      if (val < 2) fail("omega bounds are at least 2");
      table.omega[key] = val;
    } else if (tag == "tau") {
      if (key != 4) fail("only tau 4 is supported");
      if (val <= 0) fail("tau must be positive");
      table.tau4 = val;
      have_tau = true;
    } else {
      fail("unknown tag '" + tag + "'");
    }
  }
  if (!have_tau) throw std::invalid_argument("omega table: missing 'tau 4' line");
  if (!table.omega.count(Rational(1))) throw std::invalid_argument("omega table: missing 'omega 1' line");
  return table;
}

OmegaTable read_omega_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_omega_table(in);
}

void write_omega_table(std::ostream& out, const OmegaTable& table) {
  for (const auto& [t, w] : table.omega) out << "omega " << to_fraction_string(t) << " " << to_decimal(w, 6) << "\n";
  out << "tau 4 " << to_decimal(table.tau4, 6) << "\n";
}

DerivationStep DerivationStep::leaf(std::string rule, std::string detail, Rational value) {
  DerivationStep s;
  s.rule = std::move(rule);
  s.detail = std::move(detail);
  s.value = std::move(value);
  return s;
}

DerivationStep DerivationStep::sum(std::string rule, std::string detail, std::vector<DerivationStep> children) {
  DerivationStep s;
  s.rule = std::move(rule);
  s.detail = std::move(detail);
  s.op = Op::Sum;
  s.children = std::move(children);
  s.value = recompute(s);
  return s;
}

DerivationStep DerivationStep::scale(std::string rule, std::string detail, Rational factor, DerivationStep child) {
  DerivationStep s;
  s.rule = std::move(rule);
  s.detail = std::move(detail);
  s.op = Op::Scale;
  s.factor = std::move(factor);
  s.children.push_back(std::move(child));
  s.value = recompute(s);
  return s;
}

Rational recompute(const DerivationStep& s) {
  switch (s.op) {
    case DerivationStep::Op::Leaf: return s.value;
    case DerivationStep::Op::Sum: {
      Rational v = 0;
      for (const auto& c : s.children) v += recompute(c);
      return v;
    }
    case DerivationStep::Op::Scale:
      if (s.children.size() != 1) throw std::logic_error("scale step needs one child");
      return s.factor * recompute(s.children[0]);
  }
  return 0;
}

bool consistent(const DerivationStep& s) {
  for (const auto& c : s.children)
    if (!consistent(c)) return false;
  return recompute(s) == s.value;
}

void print_derivation(std::ostream& out, const DerivationStep& s, int indent) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << s.rule;
  if (!s.detail.empty()) out << " [" << s.detail << "]";
  if (s.op == DerivationStep::Op::Scale) out << " x " << to_string(s.factor);
  out << " = " << to_string(s.value) << " (" << to_decimal(s.value, 6) << ")\n";
  for (const auto& c : s.children) print_derivation(out, c, indent + 1);
}

Rational omega_bound_triangle(const Rational& t, const OmegaTable& table) { return table.lookup(t); }

namespace {

using PairMap = std::map<std::pair<VertexId, VertexId>, Rational>;

std::pair<VertexId, VertexId> key(VertexId a, VertexId b) { return {std::min(a, b), std::max(a, b)}; }

void add_graph(PairMap& m, const FractionalGraph& g) {
  for (const auto& e : g.edges()) m[key(e.u, e.v)] += e.weight;
}

}  // namespace

std::optional<std::string> decomposition_error(const ConicDecomposition& dec) {
  PairMap target, got;
  add_graph(target, dec.target);
  for (const auto& tr : dec.triangles) {
    if (tr.i == tr.j || tr.j == tr.k || tr.k == tr.i) return "degenerate triangle";
    for (VertexId v : {tr.i, tr.j, tr.k})
      if (!dec.target.has_vertex(v)) return "triangle vertex outside the target graph";
    if (tr.t <= 0) return "triangle aspect must be positive";
    if (tr.lambda < 0) return "negative triangle weight";
    got[key(tr.j, tr.k)] += tr.lambda * tr.t;
    got[key(tr.i, tr.j)] += tr.lambda;
    got[key(tr.k, tr.i)] += tr.lambda;
  }
  for (const auto* part : {&dec.leftover, &dec.treewidth_part}) {
    if (!part->integral_weights()) return "leftover and treewidth parts need integer weights";
    add_graph(got, *part);
  }
  for (auto it = got.begin(); it != got.end();)
    it = it->second == 0 ? got.erase(it) : std::next(it);
  if (got != target) return "parts do not sum to the target graph";
  return std::nullopt;
}

ExponentBound conic_bound(const ConicDecomposition& dec, const OmegaTable& table) {
  if (auto err = decomposition_error(dec)) throw std::invalid_argument("conic_bound: " + *err);
  std::vector<DerivationStep> tri;
  for (const auto& t : dec.triangles) {
    if (t.lambda == 0) continue;
    std::ostringstream d;
    d << "triangle (" << t.i << "," << t.j << "," << t.k << "), weight " << to_string(t.t) << " on {" << t.j
      << "," << t.k << "}";
    tri.push_back(DerivationStep::scale(
        "triangle weight", d.str(), t.lambda,
        DerivationStep::leaf("omega table", "omega(" + to_string(t.t) + ")", omega_bound_triangle(t.t, table))));
  }
  std::vector<DerivationStep> parts;
  parts.push_back(DerivationStep::sum("fractional triangle cover", "sum of lambda * omega(t)", std::move(tri)));
  Rational leftover = 0;
  for (const auto& e : dec.leftover.edges()) leftover += e.weight;
  parts.push_back(DerivationStep::leaf("leftover edges", "one per edge", leftover));
  Rational tw_cost = 0;
  std::string detail = "empty";
  if (dec.treewidth_part.num_edges() > 0) {
    auto l = ltw(dec.treewidth_part);
    tw_cost = l.upper + 1;
    detail = "ltw " + std::to_string(l.upper) + (l.exact ? "" : " (upper bound)") + ", plus one";
  }
  parts.push_back(DerivationStep::leaf("line treewidth", detail, tw_cost));
  auto root = DerivationStep::sum("conic decomposition", "triangles + leftover + treewidth part", std::move(parts));
  return {root.value, root};
}

Rational clique_treewidth_closed_form(int d) {
  return Rational(d, 2) + 1 - Rational(7 + (d % 2 == 0 ? 1 : -1), 4 * d);
}

StarMethod parse_star_method(const std::string& s) {
  if (s == "rank") return StarMethod::Rank;
  if (s == "treewidth") return StarMethod::Treewidth;
  if (s == "mixed") return StarMethod::Mixed;
  throw std::invalid_argument("unknown method '" + s + "' (rank, treewidth, mixed)");
}

const char* star_method_name(StarMethod m) {
  switch (m) {
    case StarMethod::Rank: return "rank";
    case StarMethod::Treewidth: return "treewidth";
    case StarMethod::Mixed: return "mixed";
  }
  return "?";
}

ExponentBound star_sum_bound(int d, StarMethod method, const OmegaTable& table, const SearchConfig& config) {
  if (d < 3) throw std::invalid_argument("star_sum_bound: d must be at least 3");
  std::string dd = "d=" + std::to_string(d);
  switch (method) {
    case StarMethod::Rank: {
      DerivationStep s =
          d == 3 ? DerivationStep::scale("star sum, rank", dd + ": 2 omega / 3", Rational(2, 3),
                                         DerivationStep::leaf("omega table", "omega(1)", table.omega1()))
                 : DerivationStep::scale("star sum, rank", dd + ": (d-1) tau(4)", Rational(d - 1),
                                         DerivationStep::leaf("omega table", "tau(4)", table.tau4));
      return {s.value, s};
    }
    case StarMethod::Treewidth: {
      int l = ltw_clique_closed_form(d);
      auto s = DerivationStep::scale(
          "clique treewidth", dd + ": (2/d)(ltw(K_d)+1)", Rational(2, d),
          DerivationStep::leaf("line treewidth of clique", "ltw(K_" + std::to_string(d) + ") + 1 = " +
                                                                std::to_string(l) + " + 1",
                               Rational(l + 1)));
      return {s.value, s};
    }
    case StarMethod::Mixed: {
      std::optional<ExponentBound> best;
      for (int k = 1; k <= d; ++k) {
        FractionalGraph g = cat(k, d);
        if (g.num_edges() > config.mixed_edge_limit) continue;
        auto r = decompose_optimize(g, table, config);
        auto s = DerivationStep::scale("star sum, mixed",
                                       dd + ": cat(" + std::to_string(k) + "," + std::to_string(d) + ") / " +
                                           std::to_string(k),
                                       Rational(1, k), r.bound.derivation);
        if (!best || s.value < best->value) best = ExponentBound{s.value, s};
      }
      if (!best) throw std::invalid_argument("star_sum_bound: no cat(k,d) within the edge limit");
      return *best;
    }
  }
  throw std::logic_error("unreachable");
}

MatchingChromaticBound matching_chromatic_bound(const FractionalGraph& g0, std::uint64_t big_n) {
  if (!g0.integral_weights()) throw std::invalid_argument("matching_chromatic_bound: integer weights required");
  FractionalGraph g = to_multigraph(g0);
  auto parts = edge_partition_into_matchings(g);
  std::map<std::pair<VertexId, VertexId>, std::size_t> mult;
  std::size_t b = 0;
  for (const auto& e : g.edges()) b = std::max(b, ++mult[key(e.u, e.v)]);
  const std::size_t t = parts.size();
  BigInt v = ipow(BigInt(2), static_cast<unsigned>(t)) * ipow(BigInt(g.num_vertices()), static_cast<unsigned>(t)) *
             ipow(BigInt(big_n), static_cast<unsigned>(t * b));
  return {t, b, g.num_vertices(), v};
}

Table1 table1(const OmegaTable& table, const SearchConfig& config) {
  Table1 t;
  t.ds = {3, 4, 5, 6, 10};
  for (int d : t.ds) {
    t.rank_exact.push_back(star_sum_bound(d, StarMethod::Rank, table, config));
    t.rank_row.push_back(round_up(t.rank_exact.back().value, 2));
    t.treewidth_exact.push_back(star_sum_bound(d, StarMethod::Treewidth, table, config));
    t.treewidth_row.push_back(round_up(t.treewidth_exact.back().value, 2));
    t.flattening_row.push_back(d / 2);
  }
  for (int d : {4, 5}) {
    auto b = star_sum_bound(d, StarMethod::Mixed, table, config);
    t.specialized[d] = round_up(b.value, 2);
    t.specialized_exact.emplace(d, b);
  }
  return t;
}

void print_table1(std::ostream& out, const Table1& t) {
  out << "d            ";
  for (int d : t.ds) out << "  " << (d < 10 ? " " : "") << d << "  ";
  out << "\n";
  out << "AR (rank)    ";
  for (const auto& v : t.rank_row) out << " " << to_decimal(v, 2);
  out << "\nAC (tw)      ";
  for (const auto& v : t.treewidth_row) out << " " << to_decimal(v, 2);
  out << "\nAC (special) ";
  for (int d : t.ds) out << " " << (t.specialized.count(d) ? to_decimal(t.specialized.at(d), 2) : "   - ");
  out << "\nflattening   ";
  for (int f : t.flattening_row) out << "    " << f;
  out << "\n";
}

SumRuleReport sum_rule_check(const FractionalGraph& g, unsigned k, std::uint64_t n) {
  SparseTensor big = graph_tensor(multiple(to_multigraph(g), k), n);
  SparseTensor direct = graph_tensor(g, upow(n, k));
  Reindex r = canonical_reindex_sum_rule(g, k, n);
  return {is_bijective(r) && apply_reindex(big, r) == direct, direct.nnz()};
}

}  // namespace gtensor
