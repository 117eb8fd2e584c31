#include "gtensor/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gtensor {

SparseTensor::SparseTensor(std::vector<std::uint64_t> dims) : dims_(std::move(dims)) {
  for (auto d : dims_)
    if (d == 0) throw std::invalid_argument("tensor mode dimension must be positive");
}

void SparseTensor::check(const Index& idx) const {
  if (idx.size() != dims_.size()) throw std::invalid_argument("index arity mismatch");
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (idx[i] >= dims_[i]) throw std::out_of_range("tensor index out of range");
}

void SparseTensor::add(const Index& idx, const Rational& c) {
  check(idx);
  if (c == 0) return;
  auto [it, fresh] = entries_.try_emplace(idx, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) entries_.erase(it);
  }
}

void SparseTensor::set(const Index& idx, const Rational& c) {
  check(idx);
  if (c == 0)
    entries_.erase(idx);
  else
    entries_[idx] = c;
}

Rational SparseTensor::at(const Index& idx) const {
  auto it = entries_.find(idx);
  return it == entries_.end() ? Rational(0) : it->second;
}

GraphTensorIndexing::GraphTensorIndexing(const FractionalGraph& g, std::uint64_t n,
                                         const std::vector<VertexId>& vertex_order)
    : n_(n), vertices_(vertex_order.empty() ? g.vertices() : vertex_order) {
  if (n == 0) throw std::invalid_argument("length n must be positive");
  if (!g.unit_weights()) throw std::invalid_argument("indexing requires an expanded multigraph");
  for (VertexId v : g.vertices())
    if (std::find(vertices_.begin(), vertices_.end(), v) == vertices_.end())
      throw std::invalid_argument("vertex order misses a vertex of the graph");
  for (VertexId v : vertices_) {
    incident_.push_back(g.has_vertex(v) ? g.incident_edges(v) : std::vector<EdgeId>{});
    std::uint64_t d = upow_capped(n, static_cast<unsigned>(incident_.back().size()), std::uint64_t(1) << 62);
    if (d > (std::uint64_t(1) << 62)) throw std::length_error("mode dimension overflow");
    dims_.push_back(d);
  }
}

std::uint64_t GraphTensorIndexing::encode(std::size_t mode, const std::vector<std::uint64_t>& values) const {
  if (values.size() != incident_[mode].size()) throw std::invalid_argument("local assignment arity");
  std::uint64_t idx = 0;
  for (std::size_t j = values.size(); j-- > 0;) {
    if (values[j] >= n_) throw std::out_of_range("edge value out of range");
    idx = idx * n_ + values[j];
  }
  return idx;
}

std::vector<std::uint64_t> GraphTensorIndexing::decode(std::size_t mode, std::uint64_t index) const {
  if (index >= dims_[mode]) throw std::out_of_range("mode index out of range");
  std::vector<std::uint64_t> out(incident_[mode].size());
  for (auto& x : out) {
    x = index % n_;
    index /= n_;
  }
  return out;
}

std::uint64_t GraphTensorIndexing::index_of(std::size_t mode, const std::map<EdgeId, std::uint64_t>& f) const {
  std::vector<std::uint64_t> vals;
  for (EdgeId e : incident_[mode]) vals.push_back(f.at(e));
  return encode(mode, vals);
}

SparseTensor graph_tensor(const FractionalGraph& g0, std::uint64_t n, const std::vector<VertexId>& order,
                          std::uint64_t nonzero_limit) {
  const FractionalGraph g = to_multigraph(g0);
  GraphTensorIndexing ix(g, n, order);
  const std::size_t m = g.num_edges();
  std::uint64_t total = upow_capped(n, static_cast<unsigned>(m), nonzero_limit);
  if (total > nonzero_limit)
    throw std::length_error("graph_tensor: n^|E| = " + std::to_string(n) + "^" + std::to_string(m) +
                            " exceeds the nonzero limit " + std::to_string(nonzero_limit));
  // Place value of each edge inside each incident mode.
  std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> contrib(m);
  std::map<EdgeId, std::size_t> pos;
  for (std::size_t i = 0; i < m; ++i) pos[g.edges()[i].id] = i;
  for (std::size_t mode = 0; mode < ix.num_modes(); ++mode) {
    std::uint64_t place = 1;
    for (EdgeId e : ix.incident(mode)) {
      contrib[pos.at(e)].push_back({mode, place});
      place *= n;
    }
  }
  SparseTensor t(ix.dims());
  std::vector<std::uint64_t> f(m, 0);
  Index idx(ix.num_modes(), 0);
  for (std::uint64_t step = 0; step < total; ++step) {
    t.set(idx, Rational(1));
    for (std::size_t e = 0; e < m; ++e) {
      if (++f[e] < n) {
        for (auto [mode, place] : contrib[e]) idx[mode] += place;
        break;
      }
      f[e] = 0;
      for (auto [mode, place] : contrib[e]) idx[mode] -= place * (n - 1);
    }
  }
  return t;
}

SparseTensor kronecker(const SparseTensor& s, const SparseTensor& t) {
  if (s.order() != t.order()) throw std::invalid_argument("kronecker: mode count mismatch");
  std::vector<std::uint64_t> dims(s.order());
  for (std::size_t i = 0; i < dims.size(); ++i) dims[i] = s.dims()[i] * t.dims()[i];
  SparseTensor out(dims);
  Index idx(s.order());
  for (const auto& [a, x] : s.entries())
    for (const auto& [b, y] : t.entries()) {
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = a[i] * t.dims()[i] + b[i];
      out.set(idx, x * y);
    }
  return out;
}

SparseTensor tensor_power(const SparseTensor& t, unsigned k) {
  if (k == 0) {
    SparseTensor one(std::vector<std::uint64_t>(t.order(), 1));
    one.set(Index(t.order(), 0), Rational(1));
    return one;
  }
  SparseTensor out = t;
  for (unsigned i = 1; i < k; ++i) out = kronecker(out, t);
  return out;
}

SparseTensor rank_one(const std::vector<Vec>& factors) {
  std::vector<std::uint64_t> dims;
  for (const auto& f : factors) dims.push_back(f.size());
  SparseTensor out(dims);
  if (factors.empty()) return out;
  Index idx(factors.size(), 0);
  while (true) {
    Rational c = 1;
    for (std::size_t i = 0; i < idx.size() && c != 0; ++i) c *= factors[i][idx[i]];
    out.set(idx, c);
    std::size_t i = idx.size();
    while (i-- > 0) {
      if (++idx[i] < dims[i]) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

SparseTensor apply_reindex(const SparseTensor& t, const Reindex& r) {
  if (r.maps.size() != t.order()) throw std::invalid_argument("reindex: mode count mismatch");
  for (std::size_t i = 0; i < t.order(); ++i)
    if (r.maps[i].size() != t.dims()[i]) throw std::invalid_argument("reindex: dimension mismatch");
  SparseTensor out(r.target_dims);
  Index idx(t.order());
  for (const auto& [a, c] : t.entries()) {
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = r.maps[i][a[i]];
    out.add(idx, c);
  }
  return out;
}

bool is_bijective(const Reindex& r) {
  for (std::size_t i = 0; i < r.maps.size(); ++i) {
    if (r.maps[i].size() != r.target_dims[i]) return false;
    std::vector<bool> seen(r.target_dims[i], false);
    for (auto x : r.maps[i]) {
      if (x >= seen.size() || seen[x]) return false;
      seen[x] = true;
    }
  }
  return true;
}

Reindex canonical_reindex_product(const FractionalGraph& g0, const FractionalGraph& h0, std::uint64_t n) {
  const FractionalGraph g = to_multigraph(g0), h = to_multigraph(h0);
  const FractionalGraph gh = sum(g, h);
  GraphTensorIndexing ig(g, n, gh.vertices()), ih(h, n, gh.vertices()), igh(gh, n);
  Reindex r;
  r.target_dims = igh.dims();
  for (std::size_t mode = 0; mode < igh.num_modes(); ++mode) {
    std::uint64_t dg = ig.dim(mode), dh = ih.dim(mode);
    std::vector<std::uint64_t> map(dg * dh);
    // In g+h the edges of g precede the shifted edges of h at every vertex.
    for (std::uint64_t a = 0; a < dg; ++a)
      for (std::uint64_t b = 0; b < dh; ++b) map[a * dh + b] = a + b * dg;
    r.maps.push_back(std::move(map));
  }
  return r;
}

Reindex canonical_reindex_length(const FractionalGraph& g0, std::uint64_t n1, std::uint64_t n2) {
  const FractionalGraph g = to_multigraph(g0);
  GraphTensorIndexing i1(g, n1), i2(g, n2), i12(g, n1 * n2);
  Reindex r;
  r.target_dims = i12.dims();
  for (std::size_t mode = 0; mode < i12.num_modes(); ++mode) {
    std::uint64_t d1 = i1.dim(mode), d2 = i2.dim(mode);
    std::vector<std::uint64_t> map(d1 * d2);
    for (std::uint64_t a = 0; a < d1; ++a) {
      auto va = i1.decode(mode, a);
      for (std::uint64_t b = 0; b < d2; ++b) {
        auto vb = i2.decode(mode, b);
        std::vector<std::uint64_t> v(va.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = va[j] + n1 * vb[j];
        map[a * d2 + b] = i12.encode(mode, v);
      }
    }
    r.maps.push_back(std::move(map));
  }
  return r;
}

Reindex canonical_reindex_sum_rule(const FractionalGraph& g0, unsigned k, std::uint64_t n) {
  if (k == 0) throw std::invalid_argument("sum rule: k must be positive");
  const FractionalGraph g = to_multigraph(g0);
  const FractionalGraph kg = multiple(g, k);
  std::uint64_t nk = upow(n, k);
  GraphTensorIndexing src(kg, n), dst(g, nk);
  Reindex r;
  r.target_dims = dst.dims();
  for (std::size_t mode = 0; mode < dst.num_modes(); ++mode) {
    const std::size_t deg = dst.incident(mode).size();
    std::vector<std::uint64_t> map(src.dim(mode));
    for (std::uint64_t a = 0; a < src.dim(mode); ++a) {
      auto va = src.decode(mode, a);  // copy c occupies digits c*deg .. c*deg+deg-1
      std::vector<std::uint64_t> v(deg, 0);
      for (std::size_t j = 0; j < deg; ++j) {
        std::uint64_t place = 1;
        for (unsigned c = 0; c < k; ++c) {
          v[j] += va[c * deg + j] * place;
          place *= n;
        }
      }
      map[a] = dst.encode(mode, v);
    }
    r.maps.push_back(std::move(map));
  }
  return r;
}

SparseTensor apply_substitution(const SparseTensor& t, const Substitution& s) {
  if (s.modes.size() != t.order()) throw std::invalid_argument("substitution: mode count mismatch");
  std::vector<int> hit(s.target_dims.size(), 0);
  for (std::size_t i = 0; i < t.order(); ++i) {
    const auto& ms = s.modes[i];
    if (ms.images.size() != t.dims()[i]) throw std::invalid_argument("substitution: dimension mismatch");
    if (ms.target_mode) {
      if (*ms.target_mode >= hit.size()) throw std::invalid_argument("substitution: bad target mode");
      ++hit[*ms.target_mode];
    }
  }
  for (int h : hit)
    if (h != 1) throw std::invalid_argument("substitution: each target mode needs exactly one source");
  SparseTensor out(s.target_dims);
  for (const auto& [idx, c] : t.entries()) {
    Rational scalar = c;
    std::vector<const std::vector<std::pair<std::uint64_t, Rational>>*> lin;
    std::vector<std::size_t> tmodes;
    for (std::size_t i = 0; i < idx.size() && scalar != 0; ++i) {
      const auto& img = s.modes[i].images[idx[i]];
      if (!s.modes[i].target_mode) {
        Rational v = 0;
        for (const auto& p : img) v += p.second;
        scalar *= v;
      } else {
        if (img.empty()) scalar = 0;
        lin.push_back(&img);
        tmodes.push_back(*s.modes[i].target_mode);
      }
    }
    if (scalar == 0) continue;
    Index out_idx(s.target_dims.size(), 0);
    std::vector<std::size_t> pick(lin.size(), 0);
    while (true) {
      Rational v = scalar;
      for (std::size_t j = 0; j < lin.size(); ++j) {
        const auto& p = (*lin[j])[pick[j]];
        out_idx[tmodes[j]] = p.first;
        v *= p.second;
      }
      out.add(out_idx, v);
      std::size_t j = 0;
      for (; j < lin.size(); ++j) {
        if (++pick[j] < lin[j]->size()) break;
        pick[j] = 0;
      }
      if (j == lin.size()) break;
    }
  }
  return out;
}

Substitution project_subgraph(const FractionalGraph& g0, const FractionalGraph& h0, std::uint64_t n) {
  const FractionalGraph g = to_multigraph(g0), h = to_multigraph(h0);
  for (VertexId v : h.vertices())
    if (!g.has_vertex(v)) throw std::invalid_argument("project_subgraph: h is not a subgraph of g");
  for (const auto& e : h.edges())
    if (!g.has_edge(e.id) || !(g.edge(e.id).touches(e.u) && g.edge(e.id).touches(e.v)))
      throw std::invalid_argument("project_subgraph: h is not a subgraph of g");
  GraphTensorIndexing ig(g, n), ih(h, n);
  Substitution s;
  s.target_dims = ih.dims();
  for (std::size_t mode = 0; mode < ig.num_modes(); ++mode) {
    VertexId v = ig.vertices()[mode];
    ModeSubstitution ms;
    ms.images.resize(ig.dim(mode));
    std::optional<std::size_t> hmode;
    if (h.has_vertex(v)) hmode = h.vertex_position(v);
    ms.target_mode = hmode;
    for (std::uint64_t a = 0; a < ig.dim(mode); ++a) {
      auto vals = ig.decode(mode, a);
      std::map<EdgeId, std::uint64_t> f;
      bool ok = true;
      for (std::size_t j = 0; j < vals.size(); ++j) {
        EdgeId e = ig.incident(mode)[j];
        if (h.has_edge(e))
          f[e] = vals[j];
        else if (vals[j] != 0)
          ok = false;
      }
      if (!ok) continue;
      ms.images[a].push_back({hmode ? ih.index_of(*hmode, f) : 0, Rational(1)});
    }
    s.modes.push_back(std::move(ms));
  }
  return s;
}

Substitution project_length(const FractionalGraph& g0, std::uint64_t n, std::uint64_t m) {
  if (m > n) throw std::invalid_argument("project_length: m exceeds n");
  if (m == 0) throw std::invalid_argument("project_length: m must be positive");
  const FractionalGraph g = to_multigraph(g0);
  GraphTensorIndexing in(g, n), im(g, m);
  Substitution s;
  s.target_dims = im.dims();
  for (std::size_t mode = 0; mode < in.num_modes(); ++mode) {
    ModeSubstitution ms;
    ms.target_mode = mode;
    ms.images.resize(in.dim(mode));
    for (std::uint64_t a = 0; a < in.dim(mode); ++a) {
      auto vals = in.decode(mode, a);
      if (std::all_of(vals.begin(), vals.end(), [&](std::uint64_t x) { return x < m; }))
        ms.images[a].push_back({im.encode(mode, vals), Rational(1)});
    }
    s.modes.push_back(std::move(ms));
  }
  return s;
}

FractionalGraph smooth_vertex(const FractionalGraph& g0, VertexId w) {
  const FractionalGraph g = to_multigraph(g0);
  if (!g.has_vertex(w)) throw std::invalid_argument("subdivision witness: unknown vertex");
  auto inc = g.incident_edges(w);
  if (inc.size() != 2) throw std::invalid_argument("subdivision witness: vertex must have degree 2");
  VertexId u = g.edge(inc[0]).other(w), v = g.edge(inc[1]).other(w);
  if (u == v) throw std::invalid_argument("subdivision witness: both edges reach the same vertex");
  FractionalGraph h;
  for (VertexId x : g.vertices())
    if (x != w) h.add_vertex(x);
  for (const auto& e : g.edges()) {
    if (e.id == inc[1]) continue;
    if (e.id == inc[0])
      h.add_edge_with_id(e.id, u, v);
    else
      h.add_edge_with_id(e.id, e.u, e.v);
  }
  return h;
}

Substitution project_subdivision(const FractionalGraph& g0, VertexId w, std::uint64_t n) {
  const FractionalGraph g = to_multigraph(g0);
  const FractionalGraph h = smooth_vertex(g, w);
  auto inc = g.incident_edges(w);
  const EdgeId merged = inc[0], dropped = inc[1];
  GraphTensorIndexing ig(g, n), ih(h, n);
  Substitution s;
  s.target_dims = ih.dims();
  for (std::size_t mode = 0; mode < ig.num_modes(); ++mode) {
    VertexId v = ig.vertices()[mode];
    ModeSubstitution ms;
    ms.images.resize(ig.dim(mode));
    if (v == w) {
      for (std::uint64_t a = 0; a < ig.dim(mode); ++a) {
        auto vals = ig.decode(mode, a);
        if (vals[0] == vals[1]) ms.images[a].push_back({0, Rational(1)});
      }
    } else {
      std::size_t hmode = h.vertex_position(v);
      ms.target_mode = hmode;
      for (std::uint64_t a = 0; a < ig.dim(mode); ++a) {
        auto vals = ig.decode(mode, a);
        std::map<EdgeId, std::uint64_t> f;
        for (std::size_t j = 0; j < vals.size(); ++j) {
          EdgeId e = ig.incident(mode)[j];
          f[e == dropped ? merged : e] = vals[j];
        }
        ms.images[a].push_back({ih.index_of(hmode, f), Rational(1)});
      }
    }
    s.modes.push_back(std::move(ms));
  }
  return s;
}

Substitution star_restriction(const SparseTensor& t, std::size_t center) {
  const std::size_t d = t.order();
  if (d < 2) throw std::invalid_argument("star_restriction: need at least two modes");
  if (center < 1 || center > d) throw std::invalid_argument("star_restriction: center out of range");
  const std::uint64_t n = t.dims()[0];
  for (auto x : t.dims())
    if (x != n) throw std::invalid_argument("star_restriction: unequal mode dimensions");
  const std::size_t u = center - 1;
  Substitution s;
  s.target_dims = t.dims();
  for (std::size_t mode = 0; mode < d; ++mode) {
    ModeSubstitution ms;
    ms.target_mode = mode;
    if (mode == u) {
      ms.images.resize(upow(n, static_cast<unsigned>(d - 1)));
    } else {
      ms.images.resize(n);
      for (std::uint64_t i = 0; i < n; ++i) ms.images[i].push_back({i, Rational(1)});
    }
    s.modes.push_back(std::move(ms));
  }
  // Centre index: leaves in ascending order, first leaf least significant.
  for (const auto& [idx, c] : t.entries()) {
    std::uint64_t a = 0;
    for (std::size_t mode = d; mode-- > 0;)
      if (mode != u) a = a * n + idx[mode];
    s.modes[u].images[a].push_back({idx[u], c});
  }
  return s;
}

Vec contract_vector(const Vec& z, const Vec& h) {
  if (h.empty() || z.size() % h.size() != 0) throw std::invalid_argument("contract_vector: length mismatch");
  Vec out(z.size() / h.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    for (std::size_t k = 0; k < h.size(); ++k) out[j] += z[j * h.size() + k] * h[k];
  return out;
}

SparseTensor contract_modes(const SparseTensor& u, const std::vector<Vec>& h) {
  if (h.size() != u.order()) throw std::invalid_argument("contract_modes: one vector per mode required");
  std::vector<std::uint64_t> dims;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].empty() || u.dims()[i] % h[i].size() != 0)
      throw std::invalid_argument("contract_modes: vector length does not divide mode dimension");
    dims.push_back(u.dims()[i] / h[i].size());
  }
  SparseTensor out(dims);
  Index idx(dims.size());
  for (const auto& [a, c] : u.entries()) {
    Rational v = c;
    for (std::size_t i = 0; i < a.size() && v != 0; ++i) {
      idx[i] = a[i] / h[i].size();
      v *= h[i][a[i] % h[i].size()];
    }
    if (v != 0) out.add(idx, v);
  }
  return out;
}

Rational evaluate(const SparseTensor& t, const std::vector<Vec>& inputs) {
  if (inputs.size() != t.order()) throw std::invalid_argument("evaluate: one input vector per mode required");
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (inputs[i].size() != t.dims()[i]) throw std::invalid_argument("evaluate: input length mismatch");
  Rational total = 0;
  for (const auto& [idx, c] : t.entries()) {
    Rational v = c;
    for (std::size_t i = 0; i < idx.size() && v != 0; ++i) v *= inputs[i][idx[i]];
    total += v;
  }
  return total;
}

std::size_t matrix_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t m = rows.size(), n = rows[0].size();
  // Clear denominators row by row, then fraction-free (Bareiss) elimination.
  std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < m; ++i) {
    BigInt l = 1;
    for (const auto& x : rows[i]) l = lcm(l, denominator(x));
    for (std::size_t j = 0; j < n; ++j) a[i][j] = numerator(rows[i][j]) * (l / denominator(rows[i][j]));
  }
  BigInt prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t piv = rank;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j)
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

std::size_t flattening_rank(const SparseTensor& t, const std::vector<std::size_t>& row_modes,
                            std::uint64_t limit) {
  std::vector<bool> is_row(t.order(), false);
  for (auto m : row_modes) {
    if (m >= t.order()) throw std::invalid_argument("flattening_rank: bad mode");
    is_row[m] = true;
  }
  std::uint64_t rows = 1, cols = 1;
  for (std::size_t i = 0; i < t.order(); ++i) {
    std::uint64_t& side = is_row[i] ? rows : cols;
    if (t.dims()[i] > limit || side > limit / t.dims()[i] + 1)
      throw std::length_error("flattening_rank: flattening exceeds size limit");
    side *= t.dims()[i];
  }
  if (rows > limit || cols > limit)
    throw std::length_error("flattening_rank: " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " exceeds size limit " + std::to_string(limit));
  // Only nonzero rows matter; keep the matrix as small as possible.
  std::map<std::uint64_t, std::vector<Rational>> mat;
  for (const auto& [idx, c] : t.entries()) {
    std::uint64_t r = 0, k = 0;
    for (std::size_t i = 0; i < t.order(); ++i) {
      if (is_row[i])
        r = r * t.dims()[i] + idx[i];
      else
        k = k * t.dims()[i] + idx[i];
    }
    auto& row = mat[r];
    if (row.empty()) row.assign(cols, Rational(0));
    row[k] += c;
  }
  std::vector<std::vector<Rational>> dense;
  for (auto& [r, row] : mat) dense.push_back(std::move(row));
  return matrix_rank(std::move(dense));
}

bool is_concise(const SparseTensor& t, std::uint64_t limit) {
  for (std::size_t i = 0; i < t.order(); ++i)
    if (flattening_rank(t, {i}, limit) != t.dims()[i]) return false;
  return true;
}

SparseTensor RankDecomposition::to_tensor() const {
  SparseTensor out(dims);
  for (const auto& term : terms) {
    SparseTensor r = rank_one(term);
    for (const auto& [idx, c] : r.entries()) out.add(idx, c);
  }
  return out;
}

RankDecomposition monomial_decomposition(const SparseTensor& t) {
  RankDecomposition dec;
  dec.dims = t.dims();
  for (const auto& [idx, c] : t.entries()) {
    std::vector<Vec> term;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Vec v(t.dims()[i], Rational(0));
      v[idx[i]] = i == 0 ? c : Rational(1);
      term.push_back(std::move(v));
    }
    dec.terms.push_back(std::move(term));
  }
  return dec;
}

SparseTensor cw_tensor(unsigned q, unsigned k, bool big) {
  if (q < 1 || k < 2) throw std::invalid_argument("cw_tensor: need q >= 1, k >= 2");
  std::uint64_t total = upow_capped(q + 2, k, kDefaultNonzeroLimit);
  if (total > kDefaultNonzeroLimit) throw std::length_error("cw_tensor: (q+2)^k exceeds size limit");
  SparseTensor t(std::vector<std::uint64_t>(k, q + 2));
  for (unsigned i = 1; i <= q; ++i)
    for (unsigned a = 0; a < k; ++a)
      for (unsigned b = a + 1; b < k; ++b) {
        Index idx(k, 0);
        idx[a] = idx[b] = i;
        t.set(idx, Rational(1));
      }
  if (big)
    for (unsigned a = 0; a < k; ++a) {
      Index idx(k, 0);
      idx[a] = q + 1;
      t.set(idx, Rational(1));
    }
  return t;
}

EpsilonPolyTensor::EpsilonPolyTensor(std::vector<std::uint64_t> dims, std::size_t max_degree)
    : dims_(std::move(dims)), max_degree_(max_degree) {}

void EpsilonPolyTensor::add_rank_one(const Poly& scalar, const std::vector<std::vector<Poly>>& factors) {
  if (factors.size() != dims_.size()) throw std::invalid_argument("rank-one term arity mismatch");
  auto mul = [&](const Poly& a, const Poly& b) {
    Poly c(max_degree_ + 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j] == 0) continue;
        if (i + j > max_degree_)
          ++truncated_;
        else
          c[i + j] += a[i] * b[j];
      }
    }
    return c;
  };
  Index idx(dims_.size(), 0);
  while (true) {
    Poly p = scalar;
    p.resize(max_degree_ + 1, Rational(0));
    for (std::size_t m = 0; m < idx.size(); ++m) p = mul(p, factors[m][idx[m]]);
    if (std::any_of(p.begin(), p.end(), [](const Rational& x) { return x != 0; })) {
      auto& e = entries_[idx];
      if (e.empty()) e.assign(max_degree_ + 1, Rational(0));
      for (std::size_t i = 0; i <= max_degree_; ++i) e[i] += p[i];
    }
    std::size_t m = idx.size();
    while (m-- > 0) {
      if (++idx[m] < dims_[m]) break;
      idx[m] = 0;
    }
    if (m == static_cast<std::size_t>(-1)) break;
  }
}

SparseTensor EpsilonPolyTensor::coefficient(std::size_t degree) const {
  SparseTensor out(dims_);
  if (degree > max_degree_) return out;
  for (const auto& [idx, p] : entries_) out.add(idx, p[degree]);
  return out;
}

CwDegenerationReport cw_degeneration_check(unsigned q, unsigned k) {
  if (q < 2 || k < 2) throw std::invalid_argument("cw_degeneration_check: need q >= 2, k >= 2");
  const std::uint64_t dim = q + 2;
  using Poly = EpsilonPolyTensor::Poly;
  EpsilonPolyTensor t(std::vector<std::uint64_t>(k, dim), 6);
  auto mono = [](std::size_t deg, Rational c) {
    Poly p(deg + 1, Rational(0));
    p[deg] = c;
    return p;
  };
  // x_0 + eps^e x_i as a vector of polynomials
  auto vec = [&](std::size_t e, const std::vector<unsigned>& idxs) {
    std::vector<Poly> v(dim, Poly{Rational(0)});
    v[0] = Poly{Rational(1)};
    for (unsigned i : idxs) v[i] = mono(e, Rational(1));
    return v;
  };
  for (unsigned i = 1; i <= q; ++i)
    t.add_rank_one(mono(1, Rational(1)), std::vector<std::vector<Poly>>(k, vec(2, {i})));
  std::vector<unsigned> all;
  for (unsigned i = 1; i <= q; ++i) all.push_back(i);
  t.add_rank_one(Poly{Rational(-1)}, std::vector<std::vector<Poly>>(k, vec(3, all)));
  t.add_rank_one(Poly{Rational(1), Rational(-static_cast<int>(q))},
                 std::vector<std::vector<Poly>>(k, vec(5, {q + 1})));
  CwDegenerationReport rep;
  rep.q = q;
  rep.k = k;
  rep.rank_one_terms = q + 2;
  rep.low_orders_vanish = true;
  for (std::size_t d = 0; d <= 4; ++d)
    if (t.coefficient(d).nnz() != 0) rep.low_orders_vanish = false;
  SparseTensor lead = t.coefficient(5), cw = cw_tensor(q, k, true);
  rep.leading_matches = true;
  Index idx(k, 0);
  while (true) {
    if (lead.at(idx) != cw.at(idx)) rep.leading_matches = false;
    ++rep.entries_checked;
    std::size_t m = k;
    while (m-- > 0) {
      if (++idx[m] < dim) break;
      idx[m] = 0;
    }
    if (m == static_cast<std::size_t>(-1)) break;
  }
  rep.truncated_terms = t.truncated_terms();
  return rep;
}

}  // namespace gtensor
