#include "gtensor/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace gtensor {

std::vector<GateId> yates_forms(Circuit& c, const std::vector<GateId>& z, const std::vector<Vec>& lambda,
                                unsigned k, std::vector<std::size_t>* stage_wires) {
  if (lambda.empty()) throw std::invalid_argument("yates: empty decomposition");
  const std::size_t r = lambda.size(), n = lambda[0].size();
  for (const auto& row : lambda)
    if (row.size() != n) throw std::invalid_argument("yates: ragged coefficient matrix");
  if (z.size() != upow(n, k)) throw std::invalid_argument("yates: input length must be n^k");
  // layer[h * r^q + i]: h over the remaining n-digits, i over the r-digits produced so far
  std::vector<GateId> layer = z;
  std::size_t rq = 1;  // r^{q-1}
  for (unsigned q = 1; q <= k; ++q) {
    const std::size_t hcount = layer.size() / (n * rq);  // n^{k-q}
    std::vector<GateId> next(hcount * rq * r);
    std::size_t before = c.size();
    for (std::size_t h = 0; h < hcount; ++h)
      for (std::size_t t = 0; t < r; ++t)
        for (std::size_t i = 0; i < rq; ++i) {
          std::vector<Wire> ws;
          for (std::size_t p = 0; p < n; ++p) ws.push_back({layer[(h * n + p) * rq + i], lambda[t][p]});
          next[h * rq * r + t * rq + i] = c.add(std::move(ws));
        }
    if (stage_wires) {
      if (stage_wires->size() < q) stage_wires->resize(q, 0);
      (*stage_wires)[q - 1] += c.size() - before;
    }
    layer = std::move(next);
    rq *= r;
  }
  return layer;
}

YatesCircuit yates_circuit(const SparseTensor& t, const RankDecomposition& dec, unsigned k) {
  if (k == 0) throw std::invalid_argument("yates_circuit: k must be positive");
  if (dec.dims != t.dims()) throw std::invalid_argument("yates_circuit: decomposition dims differ from tensor");
  if (dec.rank() == 0) throw std::invalid_argument("yates_circuit: empty decomposition");
  for (const auto& term : dec.terms) {
    if (term.size() != t.order()) throw std::invalid_argument("yates_circuit: term arity mismatch");
    for (std::size_t j = 0; j < term.size(); ++j)
      if (term[j].size() != t.dims()[j]) throw std::invalid_argument("yates_circuit: factor length mismatch");
  }
  if (!(dec.to_tensor() == t)) throw std::invalid_argument("yates_circuit: inconsistent decomposition");
  if (!is_concise(t)) throw std::invalid_argument("yates_circuit: tensor is not concise");
  const std::size_t d = t.order(), r = dec.rank();
  for (auto nj : t.dims())
    if (r < nj) throw std::invalid_argument("yates_circuit: rank below a mode dimension");
  std::vector<std::uint64_t> dims;
  for (auto nj : t.dims()) dims.push_back(upow(nj, k));
  YatesCircuit out{Circuit(dims), {}, 0};
  Circuit& c = out.circuit;
  std::vector<std::vector<GateId>> forms(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<GateId> z;
    for (std::uint64_t h = 0; h < dims[j]; ++h) z.push_back(c.input(j, h));
    std::vector<Vec> lambda;
    for (const auto& term : dec.terms) lambda.push_back(term[j]);
    forms[j] = yates_forms(c, z, lambda, k, &out.stage_wires);
  }
  std::size_t before = c.size();
  std::vector<Wire> top;
  for (std::size_t i = 0; i < forms[0].size(); ++i) {
    std::vector<Wire> ws;
    for (std::size_t j = 0; j < d; ++j) ws.push_back({forms[j][i], Rational(1)});
    top.push_back({c.mul(std::move(ws)), Rational(1)});
  }
  c.add_output(c.add(std::move(top)));
  out.top_wires = c.size() - before;
  return out;
}

std::uint64_t yates_size_bound(std::size_t d, unsigned k, std::size_t r) {
  return kYatesConstant * d * k * upow(r, k + 1);
}

std::uint64_t treedec_size_bound(const FractionalGraph& g, std::uint64_t n, int width) {
  return g.num_vertices() * upow(n, static_cast<unsigned>(width + 1));
}

namespace {

// Removes nodes whose bag is contained in a neighbour's bag.
TreeDecomposition compress(const TreeDecomposition& td) {
  const std::size_t nb = td.bags.size();
  std::vector<std::set<std::size_t>> adj(nb);
  for (auto [a, b] : td.tree_edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<bool> alive(nb, true);
  auto subset = [&](std::size_t a, std::size_t b) {
    return std::includes(td.bags[b].begin(), td.bags[b].end(), td.bags[a].begin(), td.bags[a].end());
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < nb && !changed; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b : adj[a]) {
        if (!subset(a, b)) continue;
        for (std::size_t x : adj[a])
          if (x != b) {
            adj[x].erase(a);
            adj[x].insert(b);
            adj[b].insert(x);
          }
        adj[b].erase(a);
        adj[a].clear();
        alive[a] = false;
        changed = true;
        break;
      }
    }
  }
  TreeDecomposition out;
  std::vector<std::size_t> id(nb, 0);
  for (std::size_t a = 0; a < nb; ++a)
    if (alive[a]) {
      id[a] = out.bags.size();
      out.bags.push_back(td.bags[a]);
    }
  for (std::size_t a = 0; a < nb; ++a)
    if (alive[a])
      for (std::size_t b : adj[a])
        if (a < b) out.tree_edges.push_back({id[a], id[b]});
  return out;
}

std::uint64_t encode_digits(const std::vector<std::uint64_t>& digits, std::uint64_t n) {
  std::uint64_t idx = 0;
  for (std::size_t j = digits.size(); j-- > 0;) idx = idx * n + digits[j];
  return idx;
}

}  // namespace

TreedecCircuit treedec_circuit(const FractionalGraph& g0, std::uint64_t n, const TreeDecomposition& td0) {
  const FractionalGraph g = to_multigraph(g0);
  validate(td0, line_graph(g));
  GraphTensorIndexing ix(g, n);
  TreedecCircuit result{Circuit(ix.dims())};
  Circuit& c = result.circuit;
  TreeDecomposition td = compress(td0);
  if (td.bags.empty()) td.bags.push_back({});
  const std::size_t nb = td.bags.size();

  std::vector<std::vector<std::size_t>> adj(nb);
  for (auto [a, b] : td.tree_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::size_t> parent(nb, nb), bfs{0};
  std::vector<bool> seen(nb, false);
  seen[0] = true;
  for (std::size_t i = 0; i < bfs.size(); ++i)
    for (auto y : adj[bfs[i]])
      if (!seen[y]) {
        seen[y] = true;
        parent[y] = bfs[i];
        bfs.push_back(y);
      }

  // Home node of each vertex: first bag containing all its edges.
  std::vector<std::size_t> home(ix.num_modes(), 0);
  std::vector<std::vector<std::size_t>> vertex_factors(nb);
  for (std::size_t m = 0; m < ix.num_modes(); ++m) {
    const auto& inc = ix.incident(m);
    std::size_t t = 0;
    if (!inc.empty()) {
      t = nb;
      for (std::size_t a = 0; a < nb && t == nb; ++a)
        if (std::includes(td.bags[a].begin(), td.bags[a].end(), inc.begin(), inc.end())) t = a;
      if (t == nb) throw std::invalid_argument("treedec_circuit: no bag holds all edges of a vertex");
    }
    home[m] = t;
    vertex_factors[t].push_back(m);
  }

  // Edges with exactly one endpoint homed inside the subtree.
  std::vector<std::map<EdgeId, int>> ends(nb);
  for (std::size_t m = 0; m < ix.num_modes(); ++m)
    for (EdgeId e : ix.incident(m)) ++ends[home[m]][e];
  for (std::size_t i = bfs.size(); i-- > 1;) {
    std::size_t t = bfs[i];
    for (auto [e, k] : ends[t]) ends[parent[t]][e] += k;
  }

  struct Factor {
    std::vector<EdgeId> scope;
    std::vector<GateId> gates;  // empty for a vertex factor (use input gates)
    std::size_t mode = 0;
  };
  std::vector<std::optional<Factor>> message(nb);
  for (std::size_t i = bfs.size(); i-- > 0;) {
    std::size_t t = bfs[i];
    std::vector<Factor> fs;
    for (std::size_t m : vertex_factors[t]) fs.push_back({ix.incident(m), {}, m});
    for (std::size_t y : adj[t])
      if (y != parent[t] && message[y]) fs.push_back(std::move(*message[y]));
    if (fs.empty()) continue;
    std::vector<EdgeId> out_edges;
    for (auto [e, k] : ends[t])
      if (k == 1) out_edges.push_back(e);
    std::set<EdgeId> scope_set;
    for (const auto& f : fs) scope_set.insert(f.scope.begin(), f.scope.end());
    std::vector<EdgeId> scope(scope_set.begin(), scope_set.end());
    auto factor_gate = [&](const Factor& f, std::uint64_t idx) {
      return f.gates.empty() ? c.input(f.mode, idx) : f.gates[idx];
    };
    if (fs.size() == 1 && scope == out_edges) {
      Factor f = std::move(fs[0]);
      if (f.gates.empty())
        for (std::uint64_t a = 0; a < ix.dim(f.mode); ++a) f.gates.push_back(c.input(f.mode, a));
      message[t] = std::move(f);
      continue;
    }
    std::map<EdgeId, std::size_t> where;
    for (std::size_t j = 0; j < scope.size(); ++j) where[scope[j]] = j;
    std::vector<std::vector<std::size_t>> fpos(fs.size());
    for (std::size_t fi = 0; fi < fs.size(); ++fi)
      for (EdgeId e : fs[fi].scope) fpos[fi].push_back(where.at(e));
    std::vector<std::size_t> opos;
    for (EdgeId e : out_edges) opos.push_back(where.at(e));
    const std::uint64_t total = upow(n, static_cast<unsigned>(scope.size()));
    ++result.contraction_steps;
    result.contraction_terms += total;
    std::vector<std::vector<GateId>> bucket(upow(n, static_cast<unsigned>(out_edges.size())));
    std::vector<std::uint64_t> digit(scope.size(), 0), sub;
    for (std::uint64_t a = 0; a < total; ++a) {
      std::vector<Wire> ws;
      for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        sub.clear();
        for (auto p : fpos[fi]) sub.push_back(digit[p]);
        ws.push_back({factor_gate(fs[fi], encode_digits(sub, n)), Rational(1)});
      }
      GateId prod = ws.size() == 1 ? ws[0].source : c.mul(std::move(ws));
      sub.clear();
      for (auto p : opos) sub.push_back(digit[p]);
      bucket[encode_digits(sub, n)].push_back(prod);
      for (std::size_t j = 0; j < digit.size(); ++j) {
        if (++digit[j] < n) break;
        digit[j] = 0;
      }
    }
    Factor msg{out_edges, {}, 0};
    for (auto& b : bucket) {
      if (b.size() == 1) {
        msg.gates.push_back(b[0]);
      } else {
        std::vector<Wire> ws;
        for (GateId x : b) ws.push_back({x, Rational(1)});
        msg.gates.push_back(c.add(std::move(ws)));
      }
    }
    message[t] = std::move(msg);
  }
  if (message[0])
    c.add_output(message[0]->gates.at(0));
  else
    c.add_output(c.constant(Rational(1)));
  return result;
}

Circuit contraction_circuit(const FractionalGraph& g0, const std::vector<VertexId>& u_set, std::uint64_t n,
                            const Circuit& inner) {
  const FractionalGraph g = to_multigraph(g0);
  Contraction con = contract(g, u_set);
  GraphTensorIndexing ig(g, n), iq(con.graph, n);
  if (inner.mode_dims() != iq.dims())
    throw std::invalid_argument("contraction_circuit: inner circuit does not match T_{G/U,n}");
  std::set<VertexId> u(u_set.begin(), u_set.end());
  std::vector<EdgeId> internal;
  for (const auto& e : g.edges())
    if (u.count(e.u) && u.count(e.v)) internal.push_back(e.id);
  if (internal.size() > kContractionInternalLimit)
    throw std::length_error("contraction_circuit: more than " + std::to_string(kContractionInternalLimit) +
                            " internal edges");
  const std::size_t wmode = con.graph.vertex_position(con.new_vertex);
  const auto& leaving = iq.incident(wmode);
  std::vector<std::size_t> umodes;
  for (VertexId v : g.vertices())
    if (u.count(v)) umodes.push_back(g.vertex_position(v));

  Circuit c(ig.dims());
  std::map<std::uint64_t, GateId> h_gate;
  auto h = [&](std::uint64_t idx) -> GateId {
    if (auto it = h_gate.find(idx); it != h_gate.end()) return it->second;
    std::map<EdgeId, std::uint64_t> f;
    auto outer = iq.decode(wmode, idx);
    for (std::size_t j = 0; j < leaving.size(); ++j) f[leaving[j]] = outer[j];
    std::vector<std::uint64_t> inner_digits(internal.size(), 0);
    std::vector<Wire> terms;
    const std::uint64_t total = upow(n, static_cast<unsigned>(internal.size()));
    for (std::uint64_t a = 0; a < total; ++a) {
      for (std::size_t j = 0; j < internal.size(); ++j) f[internal[j]] = inner_digits[j];
      std::vector<Wire> ws;
      for (std::size_t m : umodes) ws.push_back({c.input(m, ig.index_of(m, f)), Rational(1)});
      terms.push_back({ws.size() == 1 ? ws[0].source : c.mul(std::move(ws)), Rational(1)});
      for (std::size_t j = 0; j < inner_digits.size(); ++j) {
        if (++inner_digits[j] < n) break;
        inner_digits[j] = 0;
      }
    }
    GateId gid = terms.size() == 1 ? terms[0].source : c.add(std::move(terms));
    h_gate[idx] = gid;
    return gid;
  };
  auto outs = splice(c, inner, [&](std::size_t mode, std::uint64_t idx) -> GateId {
    if (mode == wmode) return h(idx);
    return c.input(g.vertex_position(con.graph.vertices()[mode]), idx);
  });
  for (GateId o : outs) c.add_output(o);
  return c;
}

GridSchedule grid_contraction_schedule(int n_side, int k_side, std::uint64_t b) {
  if (n_side < 1 || k_side < 1 || n_side % k_side != 0)
    throw std::invalid_argument("grid_contraction_schedule: k must divide n");
  if (b < 1) throw std::invalid_argument("grid_contraction_schedule: b must be positive");
  const int s = n_side / k_side;
  GridSchedule out{n_side, k_side, b, {}, 0, 0, grid(n_side, n_side)};
  std::map<VertexId, VertexId> current;
  for (VertexId v : out.result.vertices()) current[v] = v;
  auto run = [&](const std::vector<VertexId>& ids) {
    Contraction con = contract(out.result, ids);
    BigInt cost = BigInt(ids.size()) * ipow(BigInt(b), static_cast<unsigned>(con.a_cost));
    out.steps.push_back({ids, con.a_cost, cost});
    out.total_cost += cost;
    out.result = std::move(con.graph);
    return con.new_vertex;
  };
  for (int br = 0; br < k_side; ++br)
    for (int bc = 0; bc < k_side; ++bc) {
      if (s == 1) continue;
      std::vector<VertexId> path_vertices;
      for (int r = 0; r < s; ++r) {
        std::vector<VertexId> row;
        for (int col = 0; col < s; ++col) row.push_back(current[grid_vertex(n_side, br * s + r, bc * s + col)]);
        path_vertices.push_back(run(row));
      }
      VertexId acc = path_vertices[0];
      for (int r = 1; r < s; ++r) acc = run({acc, path_vertices[static_cast<std::size_t>(r)]});
    }
  BigInt bb(b);
  out.bound = (2 * ipow(bb, 4) + bb) * BigInt(n_side) * BigInt(n_side) *
              ipow(bb, static_cast<unsigned>(3 * n_side / k_side));
  return out;
}

MatchingCircuit matching_formula_circuit(int k, std::uint64_t n, unsigned b) {
  if (k < 1 || n < 1 || b < 1) throw std::invalid_argument("matching_formula_circuit: parameters must be positive");
  const std::uint64_t dim = upow(n, b);
  MatchingCircuit out{Circuit(std::vector<std::uint64_t>(static_cast<std::size_t>(2 * k), dim)), 0};
  Circuit& c = out.circuit;
  std::vector<Wire> factors;
  for (int i = 0; i < k; ++i) {
    std::vector<Wire> terms;
    for (std::uint64_t a = 0; a < dim; ++a) {
      GateId x = c.input(static_cast<std::size_t>(2 * i), a), y = c.input(static_cast<std::size_t>(2 * i + 1), a);
      terms.push_back({c.mul({{x, Rational(1)}, {y, Rational(1)}}), Rational(1)});
      out.core_wires += 2;
    }
    factors.push_back({c.add(std::move(terms)), Rational(1)});
  }
  c.add_output(factors.size() == 1 ? factors[0].source : c.mul(std::move(factors)));
  return out;
}

RankTimesCircuit rank_times_circuit(const RankDecomposition& dec, const Circuit& u, unsigned k) {
  const std::size_t d = dec.dims.size();
  if (u.mode_dims().size() != d) throw std::invalid_argument("rank_times_circuit: mode count mismatch");
  if (dec.rank() == 0) throw std::invalid_argument("rank_times_circuit: empty decomposition");
  for (const auto& term : dec.terms) {
    if (term.size() != d) throw std::invalid_argument("rank_times_circuit: term arity mismatch");
    for (std::size_t j = 0; j < d; ++j)
      if (term[j].size() != dec.dims[j]) throw std::invalid_argument("rank_times_circuit: factor length mismatch");
  }
  std::vector<std::uint64_t> dims, tk;
  for (std::size_t j = 0; j < d; ++j) {
    tk.push_back(upow(dec.dims[j], k));
    dims.push_back(u.mode_dims()[j] * tk[j]);
  }
  RankTimesCircuit out{Circuit(dims), 0, 0};
  Circuit& c = out.circuit;
  // y[j][a][i] = (z^{(j)}_{a,.} . Lambda^{(j) (x) k})_i
  std::vector<std::vector<std::vector<GateId>>> y(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Vec> lambda;
    for (const auto& term : dec.terms) lambda.push_back(term[j]);
    for (std::uint64_t a = 0; a < u.mode_dims()[j]; ++a) {
      std::vector<GateId> z;
      for (std::uint64_t p = 0; p < tk[j]; ++p) z.push_back(c.input(j, a * tk[j] + p));
      y[j].push_back(yates_forms(c, z, lambda, k));
    }
  }
  out.linear_wires = c.size();
  const std::size_t copies = upow(dec.rank(), k);
  std::vector<Wire> top;
  for (std::size_t i = 0; i < copies; ++i) {
    auto outs = splice(c, u, [&](std::size_t mode, std::uint64_t a) { return y[mode][a][i]; });
    if (outs.empty()) throw std::invalid_argument("rank_times_circuit: circuit for U has no output");
    top.push_back({outs[0], Rational(1)});
  }
  out.copies = copies;
  c.add_output(top.size() == 1 ? top[0].source : c.add(std::move(top)));
  return out;
}

}  // namespace gtensor
