#include "gtensor/treewidth.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gtensor {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

std::optional<std::string> validation_error(const TreeDecomposition& td, const FractionalGraph& g) {
  const std::size_t nb = td.bags.size();
  if (nb == 0) {
    if (g.num_vertices() == 0) return std::nullopt;
    return "no bags";
  }
  if (td.tree_edges.size() + 1 != nb) return "decomposition tree must have |bags|-1 edges";
  std::vector<std::vector<std::size_t>> adj(nb);
  for (auto [a, b] : td.tree_edges) {
    if (a >= nb || b >= nb || a == b) return "bad tree edge";
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  {
    std::vector<bool> seen(nb, false);
    std::vector<std::size_t> st{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!st.empty()) {
      auto x = st.back();
      st.pop_back();
      for (auto y : adj[x])
        if (!seen[y]) {
          seen[y] = true;
          ++count;
          st.push_back(y);
        }
    }
    if (count != nb) return "decomposition graph is not a tree";
  }
  std::map<VertexId, std::vector<std::size_t>> where;
  for (std::size_t i = 0; i < nb; ++i)
    for (VertexId v : td.bags[i]) {
      if (!g.has_vertex(v)) return "bag contains unknown vertex " + std::to_string(v);
      where[v].push_back(i);
    }
  for (VertexId v : g.vertices())
    if (!where.count(v)) return "vertex " + std::to_string(v) + " not covered";
  auto in_bag = [&](std::size_t i, VertexId v) {
    return std::binary_search(td.bags[i].begin(), td.bags[i].end(), v);
  };
  for (const auto& b : td.bags)
    if (!std::is_sorted(b.begin(), b.end()) || std::adjacent_find(b.begin(), b.end()) != b.end())
      return "bags must be sorted without repeats";
  for (const auto& e : g.edges()) {
    bool ok = false;
    for (auto i : where[e.u])
      if (in_bag(i, e.v)) {
        ok = true;
        break;
      }
    if (!ok) return "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " not covered";
  }
  for (auto& [v, nodes] : where) {
    std::set<std::size_t> in(nodes.begin(), nodes.end());
    std::set<std::size_t> seen{nodes[0]};
    std::vector<std::size_t> st{nodes[0]};
    while (!st.empty()) {
      auto x = st.back();
      st.pop_back();
      for (auto y : adj[x])
        if (in.count(y) && !seen.count(y)) {
          seen.insert(y);
          st.push_back(y);
        }
    }
    if (seen.size() != in.size()) return "bags of vertex " + std::to_string(v) + " are disconnected";
  }
  return std::nullopt;
}

void validate(const TreeDecomposition& td, const FractionalGraph& g) {
  if (auto err = validation_error(td, g)) throw std::invalid_argument("invalid tree decomposition: " + *err);
}

namespace {

std::vector<std::set<std::size_t>> simple_adjacency(const FractionalGraph& g) {
  std::vector<std::set<std::size_t>> adj(g.num_vertices());
  for (const auto& e : g.edges()) {
    auto a = g.vertex_position(e.u), b = g.vertex_position(e.v);
    adj[a].insert(b);
    adj[b].insert(a);
  }
  return adj;
}

}  // namespace

TreeDecomposition decomposition_from_ordering(const FractionalGraph& g, const std::vector<VertexId>& order) {
  const std::size_t n = g.num_vertices();
  if (order.size() != n) throw std::invalid_argument("ordering must list every vertex once");
  std::vector<std::size_t> pos_in_order(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = g.vertex_position(order[i]);
    if (pos_in_order[p] != n) throw std::invalid_argument("ordering repeats a vertex");
    pos_in_order[p] = i;
  }
  TreeDecomposition td;
  if (n == 0) {
    td.bags.push_back({});
    return td;
  }
  auto adj = simple_adjacency(g);
  std::vector<std::vector<std::size_t>> higher(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = g.vertex_position(order[i]);
    std::vector<std::size_t> nb(adj[v].begin(), adj[v].end());
    for (auto a : nb) adj[a].erase(v);
    for (std::size_t x = 0; x < nb.size(); ++x)
      for (std::size_t y = x + 1; y < nb.size(); ++y) {
        adj[nb[x]].insert(nb[y]);
        adj[nb[y]].insert(nb[x]);
      }
    higher[i] = nb;
    std::vector<VertexId> bag{order[i]};
    for (auto a : nb) bag.push_back(g.vertices()[a]);
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(bag);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t parent = i + 1;
    if (!higher[i].empty()) {
      parent = n;
      for (auto a : higher[i]) parent = std::min(parent, pos_in_order[a]);
    }
    td.tree_edges.push_back({i, parent});
  }
  return td;
}

int elimination_width(const FractionalGraph& g, const std::vector<VertexId>& order) {
  return decomposition_from_ordering(g, order).width();
}

TreewidthResult exact_treewidth(const FractionalGraph& g, std::size_t vertex_limit) {
  const std::size_t n = g.num_vertices();
  if (n > vertex_limit || n > 30)
    throw std::length_error("exact_treewidth: " + std::to_string(n) + " vertices exceeds the limit of " +
                            std::to_string(vertex_limit) + "; use bounds_treewidth");
  if (n == 0) return {-1, decomposition_from_ordering(g, {}), {}};
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    auto a = g.vertex_position(e.u), b = g.vertex_position(e.v);
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
  // q(S, v): vertices outside S + v reachable from v through S.
  auto q = [&](std::uint32_t s, std::size_t v) {
    std::uint32_t reach = 1u << v, frontier = reach, nbrs = 0;
    while (frontier) {
      std::uint32_t fresh = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) nbrs |= adj[static_cast<std::size_t>(std::countr_zero(f))];
      fresh = nbrs & s & ~reach;
      reach |= fresh;
      frontier = fresh;
    }
    return std::popcount(nbrs & ~s & ~(1u << v));
  };
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  std::vector<std::uint8_t> tw(std::size_t(1) << n, 0);
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    int best = 255;
    for (std::uint32_t b = s; b; b &= b - 1) {
      std::size_t v = static_cast<std::size_t>(std::countr_zero(b));
      std::uint32_t rest = s & ~(1u << v);
      int val = tw[rest];
      if (val >= best) continue;
      val = std::max(val, q(rest, v));
      best = std::min(best, val);
    }
    tw[s] = static_cast<std::uint8_t>(best);
    if (s == full) break;
  }
  // Recover an ordering: the vertex chosen for S is eliminated after all of S \ {v}.
  std::vector<VertexId> rev;
  std::uint32_t s = full;
  while (s) {
    for (std::uint32_t b = s; b; b &= b - 1) {
      std::size_t v = static_cast<std::size_t>(std::countr_zero(b));
      std::uint32_t rest = s & ~(1u << v);
      if (std::max<int>(tw[rest], q(rest, v)) == tw[s]) {
        rev.push_back(g.vertices()[v]);
        s = rest;
        break;
      }
    }
  }
  std::vector<VertexId> order(rev.rbegin(), rev.rend());
  TreewidthResult r{tw[full], decomposition_from_ordering(g, order), order};
  if (r.td.width() != r.width) throw std::logic_error("exact_treewidth: extraction mismatch");
  return r;
}

namespace {

std::vector<VertexId> greedy_ordering(const FractionalGraph& g, bool min_fill) {
  const std::size_t n = g.num_vertices();
  auto adj = simple_adjacency(g);
  std::vector<bool> gone(n, false);
  std::vector<VertexId> order;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_score = SIZE_MAX;
    for (std::size_t v = 0; v < n; ++v) {
      if (gone[v]) continue;
      std::size_t score = 0;
      if (min_fill) {
        std::vector<std::size_t> nb(adj[v].begin(), adj[v].end());
        for (std::size_t x = 0; x < nb.size(); ++x)
          for (std::size_t y = x + 1; y < nb.size(); ++y) score += !adj[nb[x]].count(nb[y]);
      } else {
        score = adj[v].size();
      }
      if (score < best_score) {
        best_score = score;
        best = v;
      }
    }
    std::vector<std::size_t> nb(adj[best].begin(), adj[best].end());
    for (auto a : nb) adj[a].erase(best);
    for (std::size_t x = 0; x < nb.size(); ++x)
      for (std::size_t y = x + 1; y < nb.size(); ++y) {
        adj[nb[x]].insert(nb[y]);
        adj[nb[y]].insert(nb[x]);
      }
    adj[best].clear();
    gone[best] = true;
    order.push_back(g.vertices()[best]);
  }
  return order;
}

// Minor-min-width: contract a minimum-degree vertex into its lowest-degree neighbour.
int mmd_plus(const FractionalGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) return -1;
  auto adj = simple_adjacency(g);
  std::vector<bool> gone(n, false);
  int lb = 0;
  for (std::size_t left = n; left > 1; --left) {
    std::size_t v = n;
    for (std::size_t x = 0; x < n; ++x)
      if (!gone[x] && (v == n || adj[x].size() < adj[v].size())) v = x;
    lb = std::max(lb, static_cast<int>(adj[v].size()));
    if (adj[v].empty()) {
      gone[v] = true;
      continue;
    }
    std::size_t u = *adj[v].begin();
    for (auto x : adj[v])
      if (adj[x].size() < adj[u].size()) u = x;
    for (auto x : adj[v]) {
      adj[x].erase(v);
      if (x != u) {
        adj[x].insert(u);
        adj[u].insert(x);
      }
    }
    adj[v].clear();
    gone[v] = true;
  }
  return lb;
}

}  // namespace

TreewidthBounds bounds_treewidth(const FractionalGraph& g) {
  if (g.num_vertices() == 0) return {-1, -1, decomposition_from_ordering(g, {})};
  auto fill = greedy_ordering(g, true), deg = greedy_ordering(g, false);
  int wf = elimination_width(g, fill), wd = elimination_width(g, deg);
  const auto& order = wf <= wd ? fill : deg;
  TreewidthBounds b{mmd_plus(g), std::min(wf, wd), decomposition_from_ordering(g, order)};
  return b;
}

LineTreewidth ltw(const FractionalGraph& g, std::size_t exact_limit) {
  FractionalGraph line = line_graph(g);
  if (line.num_vertices() <= exact_limit) {
    auto r = exact_treewidth(line, exact_limit);
    return {r.width, r.width, true, std::move(r.td), std::move(line)};
  }
  auto b = bounds_treewidth(line);
  return {b.lower, b.upper, b.lower == b.upper, std::move(b.td), std::move(line)};
}

int ltw_clique_closed_form(int d) {
  if (d < 1) throw std::invalid_argument("ltw_clique_closed_form: d must be positive");
  if (d == 1) return 0;  // empty line graph
  if (d % 2 == 1) return ((d - 1) / 2) * ((d - 1) / 2) + d - 2;
  return ((d - 2) / 2) * (d / 2) + d - 2;
}

SandwichReport sandwich_check(const FractionalGraph& g) {
  int t = exact_treewidth(g).width;
  int l = ltw(g).upper;
  auto delta = g.max_degree();
  bool pass = t - 1 <= l && l <= (t + 1) * static_cast<int>(delta) - 1;
  return {t, l, delta, pass};
}

void write_pace(std::ostream& out, const TreeDecomposition& td, const FractionalGraph& g) {
  std::size_t max_bag = 0;
  for (const auto& b : td.bags) max_bag = std::max(max_bag, b.size());
  out << "s td " << td.bags.size() << " " << max_bag << " " << g.num_vertices() << "\n";
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i + 1;
    for (VertexId v : td.bags[i]) out << " " << g.vertex_position(v) + 1;
    out << "\n";
  }
  for (auto [a, b] : td.tree_edges) out << a + 1 << " " << b + 1 << "\n";
}

TreeDecomposition read_pace(std::istream& in, const FractionalGraph& g) {
  TreeDecomposition td;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "s") {
      std::string td_tag;
      std::size_t nb = 0, mb = 0, nv = 0;
      if (!(ls >> td_tag >> nb >> mb >> nv) || td_tag != "td") throw std::invalid_argument("bad PACE header");
      if (nv != g.num_vertices()) throw std::invalid_argument("PACE vertex count does not match graph");
      td.bags.assign(nb, {});
      header = true;
    } else if (tag == "b") {
      if (!header) throw std::invalid_argument("PACE bag before header");
      std::size_t id = 0;
      ls >> id;
      if (id == 0 || id > td.bags.size()) throw std::invalid_argument("PACE bag id out of range");
      std::size_t p = 0;
      while (ls >> p) {
        if (p == 0 || p > g.num_vertices()) throw std::invalid_argument("PACE vertex out of range");
        td.bags[id - 1].push_back(g.vertices()[p - 1]);
      }
      std::sort(td.bags[id - 1].begin(), td.bags[id - 1].end());
    } else {
      std::size_t a = std::stoul(tag), b = 0;
      if (!(ls >> b) || a == 0 || b == 0) throw std::invalid_argument("bad PACE tree edge");
      td.tree_edges.push_back({a - 1, b - 1});
    }
  }
  if (!header) throw std::invalid_argument("PACE: missing header");
  return td;
}

}  // namespace gtensor
