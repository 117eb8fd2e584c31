#include "gtensor/exponents.hpp"
#include "gtensor/lp.hpp"
#include "gtensor/treewidth.hpp"

#include <functional>
#include <stdexcept>

namespace gtensor {

namespace {

struct Pair {
  VertexId a, b;
};

struct Column {
  std::size_t ij, ik, jk;  // pair indices
  VertexId i, j, k;
  Rational t, cost;
};

using Counts = std::vector<long>;

void enumerate_bounded(const Counts& cap, std::size_t budget, std::vector<Counts>& out) {
  Counts cur(cap.size(), 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t p, std::size_t left) {
    if (p == cap.size()) {
      out.push_back(cur);
      return;
    }
    for (long m = 0; m <= cap[p] && static_cast<std::size_t>(m) <= left; ++m) {
      cur[p] = m;
      rec(p + 1, left - static_cast<std::size_t>(m));
    }
    cur[p] = 0;
  };
  rec(0, budget);
}

FractionalGraph multigraph_of(const FractionalGraph& target, const std::vector<Pair>& pairs, const Counts& m) {
  FractionalGraph g;
  for (VertexId v : target.vertices()) g.add_vertex(v);
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (long r = 0; r < m[p]; ++r) g.add_edge(pairs[p].a, pairs[p].b, Rational(1));
  return g;
}

long edge_count(const Counts& m) {
  long s = 0;
  for (long x : m) s += x;
  return s;
}

struct Reduced {
  Matrix a;
  std::vector<Rational> b, c;
  std::vector<std::size_t> cols;
};

Reduced reduce(const std::vector<Column>& all, const std::vector<Rational>& rhs) {
  Reduced r;
  std::vector<std::size_t> rows;
  std::vector<long> row_of(rhs.size(), -1);
  for (std::size_t p = 0; p < rhs.size(); ++p)
    if (rhs[p] > 0) {
      row_of[p] = static_cast<long>(rows.size());
      rows.push_back(p);
    }
  for (std::size_t c = 0; c < all.size(); ++c)
    if (rhs[all[c].ij] > 0 && rhs[all[c].ik] > 0 && rhs[all[c].jk] > 0) r.cols.push_back(c);
  r.a.assign(rows.size(), std::vector<Rational>(r.cols.size(), Rational(0)));
  for (std::size_t x = 0; x < r.cols.size(); ++x) {
    const Column& col = all[r.cols[x]];
    r.a[static_cast<std::size_t>(row_of[col.ij])][x] += 1;
    r.a[static_cast<std::size_t>(row_of[col.ik])][x] += 1;
    r.a[static_cast<std::size_t>(row_of[col.jk])][x] += col.t;
    r.c.push_back(col.cost);
  }
  for (std::size_t p : rows) r.b.push_back(rhs[p]);
  return r;
}

}  // namespace

DecomposeResult decompose_optimize(const FractionalGraph& g, const OmegaTable& table, const SearchConfig& config) {
  if (g.num_vertices() > config.vertex_limit)
    throw std::invalid_argument("decompose_optimize: more than " + std::to_string(config.vertex_limit) +
                                " vertices");
  if (table.omega.empty()) throw std::invalid_argument("decompose_optimize: empty omega table");

  const auto& vs = g.vertices();
  std::vector<Pair> pairs;
  std::map<std::pair<VertexId, VertexId>, std::size_t> pair_index;
  for (std::size_t x = 0; x < vs.size(); ++x)
    for (std::size_t y = x + 1; y < vs.size(); ++y) {
      pair_index[{vs[x], vs[y]}] = pairs.size();
      pairs.push_back({vs[x], vs[y]});
    }
  auto pid = [&](VertexId a, VertexId b) { return pair_index.at({std::min(a, b), std::max(a, b)}); };

  std::vector<Rational> weight(pairs.size(), Rational(0));
  for (const auto& e : g.edges()) {
    if (e.u == e.v) throw std::invalid_argument("decompose_optimize: self-loops are not supported");
    weight[pid(e.u, e.v)] += e.weight;
  }
  Counts cap(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    cap[p] = static_cast<long>(BigInt(numerator(weight[p]) / denominator(weight[p])).convert_to<long>());

  std::vector<Column> cols;
  for (std::size_t x = 0; x < vs.size(); ++x)
    for (std::size_t y = x + 1; y < vs.size(); ++y)
      for (std::size_t z = y + 1; z < vs.size(); ++z) {
        VertexId tri[3] = {vs[x], vs[y], vs[z]};
        for (int apex = 0; apex < 3; ++apex) {
          VertexId i = tri[apex], j = tri[(apex + 1) % 3], k = tri[(apex + 2) % 3];
          if (j > k) std::swap(j, k);
          for (const auto& [t, w] : table.omega)
            cols.push_back({pid(i, j), pid(i, k), pid(j, k), i, j, k, t, w});
        }
      }

  Rational rho;
  bool first = true;
  for (const auto& [t, w] : table.omega) {
    Rational r = w / (2 + t);
    if (first || r < rho) rho = r;
    first = false;
  }

  std::vector<Counts> g3s;
  enumerate_bounded(cap, config.treewidth_edges, g3s);

  DecomposeResult res;
  std::optional<Rational> best;
  Counts best3, best2;
  LpResult best_lp;
  Reduced best_red;
  std::map<std::vector<Rational>, std::optional<std::pair<Reduced, LpResult>>> memo;

  for (const Counts& m3 : g3s) {
    Rational cost3 = 0;
    if (edge_count(m3) > 0) cost3 = ltw(multigraph_of(g, pairs, m3)).upper + 1;
    Counts rest(cap.size());
    for (std::size_t p = 0; p < cap.size(); ++p) rest[p] = cap[p] - m3[p];
    std::vector<Counts> g2s;
    enumerate_bounded(rest, config.leftover_edges, g2s);
    for (const Counts& m2 : g2s) {
      ++res.candidates;
      std::vector<Rational> g1(pairs.size());
      Rational w1 = 0;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        g1[p] = weight[p] - m3[p] - m2[p];
        w1 += g1[p];
      }
      Rational fixed = cost3 + edge_count(m2);
      if (best && fixed + w1 * rho >= *best) continue;
      auto it = memo.find(g1);
      if (it == memo.end()) {
        Reduced red = reduce(cols, g1);
        std::optional<std::pair<Reduced, LpResult>> entry;
        if (red.b.empty()) {
          entry.emplace(std::move(red), LpResult{LpStatus::Optimal, {}, {}, Rational(0), 0});
        } else {
          LpResult lp = solve_lp(red.a, red.b, red.c);
          ++res.lps_solved;
          if (lp.status == LpStatus::Optimal) entry.emplace(std::move(red), std::move(lp));
        }
        it = memo.emplace(g1, std::move(entry)).first;
      }
      if (!it->second) continue;
      Rational total = fixed + it->second->second.objective;
      if (!best || total < *best) {
        best = total;
        best3 = m3;
        best2 = m2;
        best_red = it->second->first;
        best_lp = it->second->second;
      }
    }
  }
  if (!best) throw std::runtime_error("decompose_optimize: no feasible decomposition within the search limits");

  ConicDecomposition dec;
  dec.target = g;
  dec.leftover = multigraph_of(g, pairs, best2);
  dec.treewidth_part = multigraph_of(g, pairs, best3);
  for (std::size_t x = 0; x < best_red.cols.size(); ++x) {
    if (best_lp.x[x] == 0) continue;
    const Column& c = cols[best_red.cols[x]];
    dec.triangles.push_back({c.i, c.j, c.k, c.t, best_lp.x[x]});
  }
  res.certified = best_red.b.empty() || certify_lp(best_red.a, best_red.b, best_red.c, best_lp);
  res.bound = conic_bound(dec, table);
  res.decomposition = std::move(dec);
  if (res.bound.value != *best) throw std::logic_error("decompose_optimize: bound mismatch");
  return res;
}

}  // namespace gtensor
