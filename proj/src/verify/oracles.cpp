#include "gtensor/verify/oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gtensor::oracle {

BigInt ryser(const IntMatrix& a) {
  const std::size_t n = a.size();
  BigInt total = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    BigInt prod = 1;
    for (std::size_t i = 0; i < n && prod != 0; ++i) {
      BigInt row = 0;
      for (std::size_t j = 0; j < n; ++j)
        if ((s >> j) & 1u) row += a[i][j];
      prod *= row;
    }
    const auto bits = static_cast<std::size_t>(__builtin_popcountll(s));
    if ((n - bits) % 2) total -= prod;
    else total += prod;
  }
  return total;
}

namespace {

struct Layout {
  std::vector<VertexId> vs;
  std::vector<EdgeId> es;
  std::vector<std::vector<std::size_t>> local;  // per vertex, positions into es by ascending id
  std::vector<std::uint64_t> dims;
};

Layout layout(const FractionalGraph& g, std::uint64_t n) {
  Layout l;
  l.vs = g.vertices();
  for (const auto& e : g.edges()) {
    if (e.weight != 1) throw std::invalid_argument("oracle: unit weights only");
    if (e.u == e.v) throw std::invalid_argument("oracle: no self-loops");
    l.es.push_back(e.id);
  }
  std::sort(l.es.begin(), l.es.end());
  for (VertexId v : l.vs) {
    std::vector<std::size_t> pos;
    for (std::size_t p = 0; p < l.es.size(); ++p) {
      const Edge& e = g.edge(l.es[p]);
      if (e.u == v || e.v == v) pos.push_back(p);
    }
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < pos.size(); ++i) d *= n;
    l.local.push_back(std::move(pos));
    l.dims.push_back(d);
  }
  return l;
}

template <class F>
void for_each_assignment(const Layout& l, std::uint64_t n, F&& f) {
  std::vector<std::uint64_t> val(l.es.size(), 0);
  Index idx(l.vs.size());
  while (true) {
    for (std::size_t v = 0; v < l.vs.size(); ++v) {
      std::uint64_t x = 0, p = 1;
      for (std::size_t pos : l.local[v]) {
        x += val[pos] * p;
        p *= n;
      }
      idx[v] = x;
    }
    f(idx);
    std::size_t i = 0;
    while (i < val.size() && ++val[i] == n) val[i++] = 0;
    if (i == val.size()) break;
  }
}

}  // namespace

SparseTensor graph_tensor(const FractionalGraph& g, std::uint64_t n) {
  Layout l = layout(g, n);
  SparseTensor t(l.dims);
  for_each_assignment(l, n, [&](const Index& idx) { t.add(idx, Rational(1)); });
  return t;
}

Rational graph_form(const FractionalGraph& g, std::uint64_t n, const std::vector<Vec>& inputs) {
  Layout l = layout(g, n);
  Rational total = 0;
  for_each_assignment(l, n, [&](const Index& idx) {
    Rational p = 1;
    for (std::size_t v = 0; v < idx.size(); ++v) p *= inputs[v][idx[v]];
    total += p;
  });
  return total;
}

Rational tensor_form(const SparseTensor& t, const std::vector<Vec>& inputs) {
  Rational total = 0;
  for (const auto& [idx, c] : t.entries()) {
    Rational p = c;
    for (std::size_t v = 0; v < idx.size(); ++v) p *= inputs[v][idx[v]];
    total += p;
  }
  return total;
}

std::size_t rank(std::vector<std::vector<Rational>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

std::size_t flattening_rank(const SparseTensor& t, const std::vector<std::size_t>& row_modes) {
  std::vector<bool> is_row(t.order(), false);
  for (std::size_t m : row_modes) is_row[m] = true;
  std::map<std::vector<std::uint64_t>, std::size_t> rows, cols;
  for (const auto& [idx, c] : t.entries()) {
    std::vector<std::uint64_t> r, k;
    for (std::size_t m = 0; m < idx.size(); ++m) (is_row[m] ? r : k).push_back(idx[m]);
    rows.emplace(r, rows.size());
    cols.emplace(k, cols.size());
  }
  std::vector<std::vector<Rational>> mat(rows.size(), std::vector<Rational>(cols.size(), Rational(0)));
  for (const auto& [idx, c] : t.entries()) {
    std::vector<std::uint64_t> r, k;
    for (std::size_t m = 0; m < idx.size(); ++m) (is_row[m] ? r : k).push_back(idx[m]);
    mat[rows.at(r)][cols.at(k)] += c;
  }
  return rank(std::move(mat));
}

bool concise(const SparseTensor& t) {
  for (std::size_t m = 0; m < t.order(); ++m)
    if (oracle::flattening_rank(t, std::vector<std::size_t>{m}) != t.dims()[m]) return false;
  return true;
}

int treewidth_by_orders(const FractionalGraph& g) {
  const auto& vs = g.vertices();
  if (vs.size() > 9) throw std::invalid_argument("oracle treewidth: at most 9 vertices");
  if (vs.empty()) return -1;
  std::vector<std::set<std::size_t>> adj(vs.size());
  for (const auto& e : g.edges()) {
    auto a = static_cast<std::size_t>(std::find(vs.begin(), vs.end(), e.u) - vs.begin());
    auto b = static_cast<std::size_t>(std::find(vs.begin(), vs.end(), e.v) - vs.begin());
    if (a != b) {
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }
  std::vector<std::size_t> order(vs.size());
  std::iota(order.begin(), order.end(), 0);
  int best = static_cast<int>(vs.size());
  do {
    auto h = adj;
    std::vector<bool> gone(vs.size(), false);
    int width = 0;
    for (std::size_t v : order) {
      std::vector<std::size_t> nb;
      for (std::size_t u : h[v])
        if (!gone[u]) nb.push_back(u);
      width = std::max(width, static_cast<int>(nb.size()));
      if (width >= best) break;
      for (std::size_t a : nb)
        for (std::size_t b : nb)
          if (a != b) h[a].insert(b);
      gone[v] = true;
    }
    best = std::min(best, width);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

SparseTensor cw(unsigned q, unsigned k, bool big) {
  SparseTensor t(std::vector<std::uint64_t>(k, q + 2));
  for (unsigned u = 0; u < k; ++u) {
    for (unsigned v = u + 1; v < k; ++v)
      for (unsigned i = 1; i <= q; ++i) {
        Index idx(k, 0);
        idx[u] = idx[v] = i;
        t.add(idx, Rational(1));
      }
    if (big) {
      Index idx(k, 0);
      idx[u] = q + 1;
      t.add(idx, Rational(1));
    }
  }
  return t;
}

RankDecomposition strassen_k3() {
  // Sum a_{ij} b_{jk} c_{ki} with a_{ij} at x1[j + 2i], b_{jk} at x2[j + 2k], c_{ki} at x3[i + 2k];
  // c_{ki} is the dual of the product entry (i, k).
  struct Term {
    int a[2][2], b[2][2], c[2][2];  // coefficients on A_ij, B_jk, product entry C_ik
  };
  const Term terms[7] = {
      {{{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}},
      {{{0, 0}, {1, 1}}, {{1, 0}, {0, 0}}, {{0, 0}, {1, -1}}},
      {{{1, 0}, {0, 0}}, {{0, 1}, {0, -1}}, {{0, 1}, {0, 1}}},
      {{{0, 0}, {0, 1}}, {{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}}},
      {{{1, 1}, {0, 0}}, {{0, 0}, {0, 1}}, {{-1, 1}, {0, 0}}},
      {{{-1, 0}, {1, 0}}, {{1, 1}, {0, 0}}, {{0, 0}, {0, 1}}},
      {{{0, 1}, {0, -1}}, {{0, 0}, {1, 1}}, {{1, 0}, {0, 0}}},
  };
  RankDecomposition d;
  d.dims = {4, 4, 4};
  for (const auto& t : terms) {
    Vec x1(4, Rational(0)), x2(4, Rational(0)), x3(4, Rational(0));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        x1[static_cast<std::size_t>(j + 2 * i)] = t.a[i][j];
        x2[static_cast<std::size_t>(i + 2 * j)] = t.b[i][j];  // B_{ij}: row i, column j
        x3[static_cast<std::size_t>(i + 2 * j)] = t.c[i][j];  // C_{ij} dual sits at c_{ji}
      }
    d.terms.push_back({x1, x2, x3});
  }
  return d;
}

FractionalGraph random_multigraph(Rng& rng, int vertices, int edges) {
  FractionalGraph g = empty_graph(static_cast<std::size_t>(vertices));
  if (vertices < 2) return g;
  std::uniform_int_distribution<int> pick(1, vertices);
  for (int e = 0; e < edges; ++e) {
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    g.add_edge(a, b, Rational(1));
  }
  return g;
}

std::vector<Vec> random_inputs(Rng& rng, const std::vector<std::uint64_t>& dims, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<Vec> out;
  for (auto n : dims) {
    Vec v(n);
    for (auto& x : v) x = d(rng);
    out.push_back(std::move(v));
  }
  return out;
}

IntMatrix random_matrix(Rng& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix a(n, std::vector<BigInt>(n));
  for (auto& row : a)
    for (auto& x : row) x = d(rng);
  return a;
}

}  // namespace gtensor::oracle
