#include "gtensor/reductions.hpp"

#include "gtensor/circuit.hpp"
#include "gtensor/treewidth.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <stdexcept>

namespace gtensor {

IntMatrix read_int_matrix(std::istream& in) {
  IntMatrix a;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<BigInt> row;
    std::string tok;
    while (ls >> tok) {
      Rational q = parse_rational(tok);
      if (denominator(q) != 1) throw std::invalid_argument("matrix entries must be integers: " + tok);
      row.push_back(numerator(q));
    }
    if (!row.empty()) a.push_back(std::move(row));
  }
  for (const auto& r : a)
    if (r.size() != a.size()) throw std::invalid_argument("matrix must be square");
  if (a.empty()) throw std::invalid_argument("empty matrix");
  return a;
}

IntMatrix read_int_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_int_matrix(in);
}

namespace {

void check_square(const IntMatrix& a) {
  if (a.empty()) throw std::invalid_argument("permanent: empty matrix");
  for (const auto& r : a)
    if (r.size() != a.size()) throw std::invalid_argument("permanent: matrix must be square");
}

}  // namespace

PermanentGrid permanent_grid(const IntMatrix& a, const Rational& corner_constant) {
  check_square(a);
  const int n = static_cast<int>(a.size());
  const int side = n + 2;
  PermanentGrid pg;
  pg.n = a.size();
  pg.grid = grid(side, side);
  pg.corner_constant = corner_constant;
  GraphTensorIndexing ix(pg.grid, 2);
  const auto& vs = ix.vertices();
  pg.slots.resize(vs.size());
  pg.signatures.resize(vs.size());
  for (std::size_t m = 0; m < vs.size(); ++m) {
    const int r = static_cast<int>((vs[m] - 1) / side), c = static_cast<int>((vs[m] - 1) % side);
    GridSlots& sl = pg.slots[m];
    const auto& inc = ix.incident(m);
    for (EdgeId e : inc) {
      VertexId o = pg.grid.edge(e).other(vs[m]);
      int orow = static_cast<int>((o - 1) / side), ocol = static_cast<int>((o - 1) % side);
      Slot s = orow < r ? kTop : orow > r ? kBottom : ocol > c ? kRight : kLeft;
      sl.edge[s] = e;
    }
    const bool top = r == 0, bottom = r == side - 1, left = c == 0, right = c == side - 1;
    Vec& sig = pg.signatures[m];
    sig.assign(ix.dim(m), Rational(0));
    for (std::uint64_t idx = 0; idx < ix.dim(m); ++idx) {
      auto vals = ix.decode(m, idx);
      std::array<int, 4> v{-1, -1, -1, -1};
      for (std::size_t p = 0; p < inc.size(); ++p)
        for (int s = 0; s < 4; ++s)
          if (sl.edge[static_cast<std::size_t>(s)] == inc[p]) v[static_cast<std::size_t>(s)] = static_cast<int>(vals[p]);
      auto all = [&](std::uint64_t x) {
        return std::all_of(vals.begin(), vals.end(), [x](std::uint64_t y) { return y == x; });
      };
      if ((top || bottom) && (left || right)) {
        sig[idx] = corner_constant;
      } else if (top || left) {
        sig[idx] = all(0) ? 1 : 0;
      } else if (bottom || right) {
        sig[idx] = all(1) ? 1 : 0;
      } else if (v[kTop] == v[kBottom] && v[kLeft] == v[kRight]) {
        sig[idx] = 1;
      } else if (v[kTop] == 0 && v[kLeft] == 0 && v[kRight] == 1 && v[kBottom] == 1) {
        sig[idx] = Rational(a[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c - 1)]);
      }
    }
  }
  return pg;
}

PermanentResult permanent_reduction(const IntMatrix& a) {
  check_square(a);
  if (a.size() > kPermanentMaxN)
    throw std::invalid_argument("permanent_reduction: n is limited to " + std::to_string(kPermanentMaxN));
  PermanentGrid pg = permanent_grid(a);
  FractionalGraph line = line_graph(pg.grid);
  TreeDecomposition td;
  int width;
  if (line.num_vertices() <= kExactTreewidthLimit) {
    auto ex = exact_treewidth(line);
    td = ex.td;
    width = ex.width;
  } else {
    auto b = bounds_treewidth(line);
    td = b.td;
    width = b.upper;
  }
  TreedecCircuit tc = treedec_circuit(pg.grid, 2, td);
  Rational v = evaluate_form(tc.circuit, pg.signatures);
  if (denominator(v) != 1) throw std::logic_error("permanent_reduction: non-integral result");
  return {numerator(v), pg.n + 2, width, tc.circuit.size(), tc.contraction_terms};
}

BruteforceReport permanent_bruteforce_check(const IntMatrix& a, unsigned threads) {
  check_square(a);
  if (a.size() > 2) throw std::invalid_argument("permanent_bruteforce_check: n must be at most 2");
  PermanentGrid pg = permanent_grid(a);
  GraphTensorIndexing ix(pg.grid, 2);
  const std::size_t m = ix.num_modes();
  const std::size_t ne = pg.grid.num_edges();
  std::map<EdgeId, std::size_t> bit_of;
  for (const auto& e : pg.grid.edges()) bit_of[e.id] = bit_of.size();
  std::vector<std::vector<std::size_t>> bits(m);
  for (std::size_t v = 0; v < m; ++v)
    for (EdgeId e : ix.incident(v)) bits[v].push_back(bit_of.at(e));
  const int side = static_cast<int>(pg.n) + 2;
  const std::uint64_t total = std::uint64_t{1} << ne;
  std::vector<std::vector<char>> nonzero(m);
  for (std::size_t v = 0; v < m; ++v)
    for (const auto& x : pg.signatures[v]) nonzero[v].push_back(x != 0);
  auto run = [&](std::uint64_t lo, std::uint64_t hi, BruteforceReport& rep) {
    rep.value = 0;
    std::vector<std::uint64_t> idx(m);
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      ++rep.assignments;
      bool alive = true;
      for (std::size_t v = 0; v < m && alive; ++v) {
        std::uint64_t i = 0;
        for (std::size_t p = 0; p < bits[v].size(); ++p) i |= ((mask >> bits[v][p]) & 1u) << p;
        idx[v] = i;
        alive = nonzero[v][i];
      }
      if (!alive) continue;
      Rational prod = 1;
      std::vector<std::pair<int, int>> flips;
      for (std::size_t v = 0; v < m; ++v) {
        const int r = static_cast<int>(v) / side, c = static_cast<int>(v) % side;
        const auto& sl = pg.slots[v];
        if (r > 0 && r < side - 1 && c > 0 && c < side - 1) {
          auto bit = [&](Slot q) { return (mask >> bit_of.at(sl.edge[q])) & 1u; };
          if (bit(kTop) == 0 && bit(kLeft) == 0 && bit(kRight) == 1 && bit(kBottom) == 1) flips.push_back({r, c});
        }
        prod *= pg.signatures[v][idx[v]];
      }
      if (prod == 0) continue;
      ++rep.nonzero_assignments;
      rep.value += numerator(prod);
      std::set<int> rows, cols;
      for (auto [r, c] : flips) {
        rows.insert(r);
        cols.insert(c);
      }
      if (flips.size() != pg.n || rows.size() != pg.n || cols.size() != pg.n) rep.flips_form_permutations = false;
    }
  };
  threads = std::max(1u, threads);
  std::vector<BruteforceReport> parts(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back(run, total * t / threads, total * (t + 1) / threads, std::ref(parts[t]));
  for (auto& th : pool) th.join();
  BruteforceReport rep;
  rep.value = 0;
  for (const auto& p : parts) {
    rep.value += p.value;
    rep.assignments += p.assignments;
    rep.nonzero_assignments += p.nonzero_assignments;
    rep.flips_form_permutations = rep.flips_form_permutations && p.flips_form_permutations;
  }
  return rep;
}

SparseTensor hyperclique_tensor(int h, int k, std::uint64_t big_n) {
  if (big_n < 1) throw std::invalid_argument("hyperclique_tensor: N must be positive");
  auto subsets = k_subsets(k, h);
  if (subsets.empty()) throw std::invalid_argument("hyperclique_tensor: need 1 <= h <= k");
  const std::uint64_t dim = upow(big_n, static_cast<unsigned>(h));
  const std::uint64_t count = upow_capped(big_n, static_cast<unsigned>(k), kDefaultNonzeroLimit + 1);
  if (count > kDefaultNonzeroLimit) throw std::length_error("hyperclique_tensor: too many terms");
  SparseTensor t(std::vector<std::uint64_t>(subsets.size(), dim));
  std::vector<std::uint64_t> f(static_cast<std::size_t>(k), 0);
  for (std::uint64_t x = 0; x < count; ++x) {
    std::uint64_t y = x;
    for (auto& fv : f) {
      fv = y % big_n;
      y /= big_n;
    }
    Index idx(subsets.size());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      std::uint64_t v = 0, p = 1;
      for (int e : subsets[s]) {
        v += f[static_cast<std::size_t>(e - 1)] * p;
        p *= big_n;
      }
      idx[s] = v;
    }
    t.add(idx, Rational(1));
  }
  return t;
}

Substitution hyperclique_substitution(std::uint64_t big_n) {
  const int h = 3, k = 4;
  FractionalGraph inc = hyperclique_incidence(h, k);
  GraphTensorIndexing ix(inc, big_n);
  auto subsets = k_subsets(k, h);
  Substitution s;
  s.target_dims.assign(subsets.size(), upow(big_n, h));
  for (std::size_t m = 0; m < ix.num_modes(); ++m) {
    ModeSubstitution ms;
    ms.images.resize(ix.dim(m));
    const VertexId v = ix.vertices()[m];
    for (std::uint64_t idx = 0; idx < ix.dim(m); ++idx) {
      auto vals = ix.decode(m, idx);
      if (v <= k) {
        if (std::all_of(vals.begin(), vals.end(), [&](std::uint64_t x) { return x == vals[0]; }))
          ms.images[idx] = {{0, Rational(1)}};
      } else {
        const auto& sub = subsets[static_cast<std::size_t>(v - k - 1)];
        std::uint64_t target = 0, p = 1;
        for (int elem : sub) {
          std::size_t pos = 0;
          while (inc.edge(ix.incident(m)[pos]).other(v) != elem) ++pos;
          target += vals[pos] * p;
          p *= big_n;
        }
        ms.images[idx] = {{target, Rational(1)}};
      }
    }
    if (v > k) ms.target_mode = static_cast<std::size_t>(v - k - 1);
    s.modes.push_back(std::move(ms));
  }
  return s;
}

HypercliqueProjectionReport hyperclique_projection_check(std::uint64_t big_n) {
  if (big_n < 1 || big_n > kHypercliqueProjectionMaxN)
    throw std::invalid_argument("hyperclique_projection_check: N must be 1 or 2");
  SparseTensor src = graph_tensor(hyperclique_incidence(3, 4), big_n);
  SparseTensor img = apply_substitution(src, hyperclique_substitution(big_n));
  SparseTensor h = hyperclique_tensor(3, 4, big_n);
  return {img == h, src.nnz(), h.nnz()};
}

HypercliqueCount hyperclique_count(std::uint64_t big_n, const std::vector<std::array<int, 3>>& hyperedges) {
  std::set<std::array<int, 3>> e;
  for (auto he : hyperedges) {
    std::sort(he.begin(), he.end());
    if (he[0] < 0 || he[2] >= static_cast<int>(big_n) || he[0] == he[1] || he[1] == he[2])
      throw std::invalid_argument("hyperclique_count: bad hyperedge");
    e.insert(he);
  }
  SparseTensor h = hyperclique_tensor(3, 4, big_n);
  const std::uint64_t dim = upow(big_n, 3);
  Vec x(dim, Rational(0));
  for (std::uint64_t i = 0; i < dim; ++i) {
    std::array<int, 3> t{static_cast<int>(i % big_n), static_cast<int>(i / big_n % big_n),
                         static_cast<int>(i / big_n / big_n)};
    std::sort(t.begin(), t.end());
    if (e.count(t)) x[i] = 1;
  }
  Rational ordered = evaluate(h, std::vector<Vec>(4, x));
  HypercliqueCount out;
  out.via_tensor = numerator(Rational(ordered / 24));
  out.brute_force = 0;
  const int nn = static_cast<int>(big_n);
  for (int a = 0; a < nn; ++a)
    for (int b = a + 1; b < nn; ++b)
      for (int c = b + 1; c < nn; ++c)
        for (int d = c + 1; d < nn; ++d)
          if (e.count({a, b, c}) && e.count({a, b, d}) && e.count({a, c, d}) && e.count({b, c, d})) ++out.brute_force;
  return out;
}

}  // namespace gtensor
