#include "gtensor/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gtensor {

FractionalGraph::FractionalGraph(std::vector<VertexId> vertices) {
  for (VertexId v : vertices) add_vertex(v);
}

FractionalGraph::FractionalGraph(std::vector<VertexId> vertices, std::vector<Edge> edges)
    : FractionalGraph(std::move(vertices)) {
  for (auto& e : edges) add_edge_with_id(e.id, e.u, e.v, e.weight);
}

void FractionalGraph::add_vertex(VertexId v) {
  if (position_.count(v)) throw std::invalid_argument("duplicate vertex " + std::to_string(v));
  position_[v] = vertices_.size();
  vertices_.push_back(v);
}

void FractionalGraph::check_endpoints(VertexId u, VertexId v, const Rational& w) const {
  if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
  if (!has_vertex(u) || !has_vertex(v))
    throw std::invalid_argument("edge endpoint not in vertex list");
  if (w <= 0) throw std::invalid_argument("edge weight must be positive");
}

EdgeId FractionalGraph::add_edge(VertexId u, VertexId v, const Rational& weight) {
  EdgeId id = max_edge_id() + 1;
  add_edge_with_id(id, u, v, weight);
  return id;
}

void FractionalGraph::add_edge_with_id(EdgeId id, VertexId u, VertexId v, const Rational& weight) {
  check_endpoints(u, v, weight);
  if (edge_index_.count(id)) throw std::invalid_argument("duplicate edge id " + std::to_string(id));
  if (id < 0) throw std::invalid_argument("negative edge id");
  edge_index_[id] = edges_.size();
  edges_.push_back(Edge{id, u, v, weight});
}

std::size_t FractionalGraph::vertex_position(VertexId v) const {
  auto it = position_.find(v);
  if (it == position_.end()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return it->second;
}

const Edge& FractionalGraph::edge(EdgeId id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw std::out_of_range("unknown edge " + std::to_string(id));
  return edges_[it->second];
}

EdgeId FractionalGraph::max_edge_id() const {
  return edge_index_.empty() ? -1 : edge_index_.rbegin()->first;
}

VertexId FractionalGraph::max_vertex_id() const {
  return position_.empty() ? 0 : position_.rbegin()->first;
}

std::vector<EdgeId> FractionalGraph::incident_edges(VertexId v) const {
  std::vector<EdgeId> out;
  for (const auto& e : edges_)
    if (e.touches(v)) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t FractionalGraph::degree(VertexId v) const {
  std::size_t d = 0;
  for (const auto& e : edges_) d += e.touches(v);
  return d;
}

std::size_t FractionalGraph::max_degree() const {
  std::map<VertexId, std::size_t> deg;
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  std::size_t m = 0;
  for (auto& [v, d] : deg) m = std::max(m, d);
  return m;
}

bool FractionalGraph::unit_weights() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight == 1; });
}

bool FractionalGraph::integral_weights() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return denominator(e.weight) == 1; });
}

FractionalGraph sum(const FractionalGraph& g, const FractionalGraph& h) {
  FractionalGraph out(g.vertices(), g.edges());
  for (VertexId v : h.vertices())
    if (!out.has_vertex(v)) out.add_vertex(v);
  EdgeId offset = g.max_edge_id() + 1;
  for (const auto& e : h.edges()) out.add_edge_with_id(e.id + offset, e.u, e.v, e.weight);
  return out;
}

FractionalGraph sum(const std::vector<FractionalGraph>& parts) {
  FractionalGraph out;
  for (const auto& p : parts) out = sum(out, p);
  return out;
}

FractionalGraph multiple(const FractionalGraph& g, unsigned k) {
  FractionalGraph out(g.vertices());
  for (unsigned i = 0; i < k; ++i) out = sum(out, g);
  return out;
}

FractionalGraph scale(const FractionalGraph& g, const Rational& a) {
  if (a <= 0) throw std::invalid_argument("scale factor must be positive");
  FractionalGraph out(g.vertices());
  for (const auto& e : g.edges()) out.add_edge_with_id(e.id, e.u, e.v, e.weight * a);
  return out;
}

BigInt common_denominator(const FractionalGraph& g) {
  BigInt d = 1;
  for (const auto& e : g.edges()) d = lcm(d, denominator(e.weight));
  return d;
}

FractionalGraph to_multigraph(const FractionalGraph& g) {
  if (g.unit_weights()) return g;
  FractionalGraph src = g.integral_weights() ? g : scale(g, Rational(common_denominator(g)));
  FractionalGraph out(src.vertices());
  for (const auto& e : src.edges()) {
    long w = numerator(e.weight).convert_to<long>();
    for (long i = 0; i < w; ++i) out.add_edge(e.u, e.v);
  }
  return out;
}

Contraction contract(const FractionalGraph& g0, const std::vector<VertexId>& u_set) {
  if (u_set.empty()) throw std::invalid_argument("contract: empty vertex set");
  const FractionalGraph g = to_multigraph(g0);
  std::set<VertexId> u(u_set.begin(), u_set.end());
  if (u.size() != u_set.size()) throw std::invalid_argument("contract: repeated vertex");
  for (VertexId v : u)
    if (!g.has_vertex(v)) throw std::invalid_argument("contract: vertex not in graph");
  VertexId w = g.max_vertex_id() + 1;
  FractionalGraph out;
  for (VertexId v : g.vertices())
    if (!u.count(v)) out.add_vertex(v);
  out.add_vertex(w);
  std::size_t a = 0;
  for (const auto& e : g.edges()) {
    bool iu = u.count(e.u), iv = u.count(e.v);
    if (iu || iv) ++a;
    if (iu && iv) continue;
    out.add_edge_with_id(e.id, iu ? w : e.u, iv ? w : e.v, e.weight);
  }
  return {out, w, a};
}

FractionalGraph line_graph(const FractionalGraph& g0) {
  const FractionalGraph g = to_multigraph(g0);
  std::vector<VertexId> ids;
  for (const auto& e : g.edges()) ids.push_back(e.id);
  FractionalGraph out(ids);
  const auto& es = g.edges();
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = i + 1; j < es.size(); ++j)
      if (es[j].touches(es[i].u) || es[j].touches(es[i].v)) out.add_edge(es[i].id, es[j].id);
  return out;
}

namespace {

using PairWeights = std::map<std::pair<std::size_t, std::size_t>, std::vector<Rational>>;

PairWeights pair_weights(const FractionalGraph& g) {
  PairWeights pw;
  for (const auto& e : g.edges()) {
    auto a = g.vertex_position(e.u), b = g.vertex_position(e.v);
    pw[{std::min(a, b), std::max(a, b)}].push_back(e.weight);
  }
  for (auto& [k, v] : pw) std::sort(v.begin(), v.end());
  return pw;
}

}  // namespace

std::optional<GraphIsomorphism> find_isomorphism(const FractionalGraph& g, const FractionalGraph& h,
                                                 std::size_t vertex_limit) {
  if (g.num_vertices() > vertex_limit || h.num_vertices() > vertex_limit)
    throw std::invalid_argument("find_isomorphism: more than " + std::to_string(vertex_limit) +
                                " vertices");
  if (g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges()) return std::nullopt;
  const std::size_t n = g.num_vertices();
  PairWeights pg = pair_weights(g), ph = pair_weights(h);
  auto weights = [](const PairWeights& pw, std::size_t a, std::size_t b) -> const std::vector<Rational>* {
    auto it = pw.find({std::min(a, b), std::max(a, b)});
    return it == pw.end() ? nullptr : &it->second;
  };
  auto signature = [&](const PairWeights& pw, std::size_t a) {
    std::vector<std::vector<Rational>> s;
    for (std::size_t b = 0; b < n; ++b)
      if (b != a)
        if (auto w = weights(pw, a, b)) s.push_back(*w);
    std::sort(s.begin(), s.end());
    return s;
  };
  std::vector<std::vector<std::vector<Rational>>> sg(n), sh(n);
  for (std::size_t a = 0; a < n; ++a) {
    sg[a] = signature(pg, a);
    sh[a] = signature(ph, a);
  }
  {
    auto x = sg, y = sh;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return std::nullopt;
  }
  std::vector<std::size_t> map(n, n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t a) -> bool {
    if (a == n) return true;
    for (std::size_t b = 0; b < n; ++b) {
      if (used[b] || sg[a] != sh[b]) continue;
      bool ok = true;
      for (std::size_t c = 0; c < a && ok; ++c) {
        auto wg = weights(pg, a, c), wh = weights(ph, b, map[c]);
        ok = (wg == nullptr && wh == nullptr) || (wg && wh && *wg == *wh);
      }
      if (!ok) continue;
      map[a] = b;
      used[b] = true;
      if (extend(a + 1)) return true;
      used[b] = false;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  GraphIsomorphism iso;
  for (std::size_t a = 0; a < n; ++a) iso.vertex_map[g.vertices()[a]] = h.vertices()[map[a]];
  std::vector<bool> taken(h.num_edges(), false);
  for (const auto& e : g.edges()) {
    VertexId x = iso.vertex_map[e.u], y = iso.vertex_map[e.v];
    for (std::size_t j = 0; j < h.num_edges(); ++j) {
      const auto& f = h.edges()[j];
      if (!taken[j] && f.weight == e.weight && f.touches(x) && f.touches(y)) {
        taken[j] = true;
        iso.edge_map[e.id] = f.id;
        break;
      }
    }
  }
  return iso;
}

bool check_isomorphism(const FractionalGraph& g, const FractionalGraph& h, const GraphIsomorphism& iso) {
  if (iso.vertex_map.size() != g.num_vertices() || iso.edge_map.size() != g.num_edges()) return false;
  if (g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges()) return false;
  std::set<VertexId> img;
  for (auto& [a, b] : iso.vertex_map) {
    if (!g.has_vertex(a) || !h.has_vertex(b)) return false;
    img.insert(b);
  }
  std::set<EdgeId> eimg;
  for (auto& [a, b] : iso.edge_map) {
    if (!g.has_edge(a) || !h.has_edge(b)) return false;
    if (g.edge(a).weight != h.edge(b).weight) return false;
    eimg.insert(b);
  }
  if (img.size() != h.num_vertices() || eimg.size() != h.num_edges()) return false;
  for (VertexId v : g.vertices()) {
    std::vector<EdgeId> mapped;
    for (EdgeId e : g.incident_edges(v)) mapped.push_back(iso.edge_map.at(e));
    std::sort(mapped.begin(), mapped.end());
    if (mapped != h.incident_edges(iso.vertex_map.at(v))) return false;
  }
  return true;
}

FractionalGraph empty_graph(std::size_t num_vertices) {
  FractionalGraph g;
  for (std::size_t i = 1; i <= num_vertices; ++i) g.add_vertex(static_cast<VertexId>(i));
  return g;
}

FractionalGraph clique(int d) {
  if (d < 1) throw std::invalid_argument("clique: d must be positive");
  FractionalGraph g = empty_graph(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j) g.add_edge(i, j);
  return g;
}

FractionalGraph star(int d, int center) {
  if (d < 1) throw std::invalid_argument("star: d must be positive");
  if (center < 1 || center > d) throw std::invalid_argument("star: center out of range");
  FractionalGraph g = empty_graph(static_cast<std::size_t>(d));
  for (int v = 1; v <= d; ++v)
    if (v != center) g.add_edge(center, v);
  return g;
}

FractionalGraph matching(int k) {
  if (k < 1) throw std::invalid_argument("matching: k must be positive");
  FractionalGraph g = empty_graph(static_cast<std::size_t>(2 * k));
  for (int i = 1; i <= k; ++i) g.add_edge(2 * i - 1, 2 * i);
  return g;
}

FractionalGraph path(int num_vertices) {
  if (num_vertices < 1) throw std::invalid_argument("path: need a vertex");
  FractionalGraph g = empty_graph(static_cast<std::size_t>(num_vertices));
  for (int i = 1; i < num_vertices; ++i) g.add_edge(i, i + 1);
  return g;
}

FractionalGraph cycle(int d) {
  if (d < 3) throw std::invalid_argument("cycle: d must be at least 3");
  FractionalGraph g = path(d);
  g.add_edge(d, 1);
  return g;
}

VertexId grid_vertex(int cols, int r, int c) { return r * cols + c + 1; }

FractionalGraph grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid: sides must be positive");
  FractionalGraph g = empty_graph(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) g.add_edge(grid_vertex(cols, r, c), grid_vertex(cols, r, c + 1));
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c) g.add_edge(grid_vertex(cols, r, c), grid_vertex(cols, r + 1, c));
  return g;
}

FractionalGraph cat(int k, int d) {
  if (k < 1 || d < 1) throw std::invalid_argument("cat: parameters must be positive");
  if (k > d) throw std::invalid_argument("cat: k must not exceed d");
  FractionalGraph g = empty_graph(static_cast<std::size_t>(d));
  for (int u = 1; u <= k; ++u) g = sum(g, star(d, u));
  return g;
}

std::vector<std::vector<int>> k_subsets(int k, int h) {
  std::vector<std::vector<int>> out;
  if (h < 0 || h > k) return out;
  std::vector<int> cur(static_cast<std::size_t>(h));
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.push_back(cur);
    int i = h - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == k - h + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < h; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

FractionalGraph hyperclique_incidence(int h, int k) {
  if (h < 1 || k < h) throw std::invalid_argument("hyperclique_incidence: need 1 <= h <= k");
  auto subsets = k_subsets(k, h);
  FractionalGraph g = empty_graph(static_cast<std::size_t>(k) + subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s)
    for (int v : subsets[s]) g.add_edge(v, k + 1 + static_cast<int>(s));
  return g;
}

bool is_bipartite(const FractionalGraph& g) {
  std::map<VertexId, int> side;
  for (VertexId s : g.vertices()) {
    if (side.count(s)) continue;
    side[s] = 0;
    std::vector<VertexId> stack{s};
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (const auto& e : g.edges()) {
        if (!e.touches(x)) continue;
        VertexId y = e.other(x);
        auto it = side.find(y);
        if (it == side.end()) {
          side[y] = 1 - side[x];
          stack.push_back(y);
        } else if (it->second == side[x]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<FractionalGraph> edge_partition_into_matchings(const FractionalGraph& g0) {
  const FractionalGraph g = to_multigraph(g0);
  const std::size_t m = g.num_edges();
  if (m == 0) return {};
  const std::size_t delta = g.max_degree();
  const std::size_t nv = g.num_vertices();
  const auto& es = g.edges();
  std::vector<std::size_t> pu(m), pv(m);
  for (std::size_t i = 0; i < m; ++i) {
    pu[i] = g.vertex_position(es[i].u);
    pv[i] = g.vertex_position(es[i].v);
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> color(m, kNone);
  std::size_t palette = 0;
  // at[v][c] = edge with colour c at vertex v
  std::vector<std::vector<std::size_t>> at(nv);
  auto ensure = [&](std::size_t c) {
    if (c >= palette) {
      palette = c + 1;
      for (auto& row : at) row.resize(palette, kNone);
    }
  };
  auto free_at = [&](std::size_t v) {
    for (std::size_t c = 0; c < palette; ++c)
      if (at[v][c] == kNone) return c;
    return palette;
  };
  auto assign = [&](std::size_t e, std::size_t c) {
    ensure(c);
    color[e] = c;
    at[pu[e]][c] = e;
    at[pv[e]][c] = e;
  };
  if (is_bipartite(g)) {
    // Alternating-path recolouring (Koenig): Delta colours suffice.
    ensure(delta - 1);
    for (std::size_t e = 0; e < m; ++e) {
      std::size_t a = free_at(pu[e]), b = free_at(pv[e]);
      if (at[pv[e]][a] != kNone) {
        // swap a/b along the path starting at pv[e] with an a-edge
        std::vector<std::size_t> path_edges;
        std::size_t x = pv[e], c = a;
        while (at[x][c] != kNone) {
          std::size_t f = at[x][c];
          path_edges.push_back(f);
          x = pu[f] == x ? pv[f] : pu[f];
          c = c == a ? b : a;
        }
        for (std::size_t f : path_edges) {
          at[pu[f]][color[f]] = kNone;
          at[pv[f]][color[f]] = kNone;
        }
        for (std::size_t f : path_edges) assign(f, color[f] == a ? b : a);
      }
      assign(e, a);
    }
  } else {
    for (std::size_t e = 0; e < m; ++e) {
      std::size_t c = 0;
      while (c < palette && (at[pu[e]][c] != kNone || at[pv[e]][c] != kNone)) ++c;
      assign(e, c);
    }
    // Merge passes: empty the last colour class into earlier ones where possible.
    bool changed = true;
    while (changed && palette > 1) {
      changed = false;
      std::size_t last = palette - 1;
      for (std::size_t e = 0; e < m; ++e) {
        if (color[e] != last) continue;
        for (std::size_t c = 0; c < last; ++c) {
          if (at[pu[e]][c] == kNone && at[pv[e]][c] == kNone) {
            at[pu[e]][last] = kNone;
            at[pv[e]][last] = kNone;
            assign(e, c);
            break;
          }
        }
      }
      if (std::none_of(color.begin(), color.end(), [&](std::size_t c) { return c == last; })) {
        --palette;
        for (auto& row : at) row.resize(palette);
        changed = true;
      }
    }
  }
  std::vector<FractionalGraph> parts;
  for (std::size_t c = 0; c < palette; ++c) {
    FractionalGraph part(g.vertices());
    for (std::size_t e = 0; e < m; ++e)
      if (color[e] == c) part.add_edge_with_id(es[e].id, es[e].u, es[e].v, es[e].weight);
    if (part.num_edges() > 0) parts.push_back(std::move(part));
  }
  return parts;
}

}  // namespace gtensor
