#include "gtensor/laser.hpp"

#include "gtensor/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gtensor::laser {

namespace {

double xlg(double x) { return x <= 0 ? 0.0 : x * std::log2(x); }

void check_gamma(double gamma) {
  if (!(gamma >= 0 && gamma <= 0.25)) throw std::out_of_range("gamma must lie in [0, 1/4]");
}

int coord_sum(const Point& x) {
  int s = 0;
  for (int v : x) s += v;
  return s;
}

bool is_two_type(const Point& x) { return std::find(x.begin(), x.end(), 2) != x.end(); }

}  // namespace

std::vector<Point> support_set(int k) {
  std::vector<Point> out;
  Point x(static_cast<std::size_t>(k), 0);
  while (true) {
    if (coord_sum(x) == 2) out.push_back(x);
    int i = k - 1;
    while (i >= 0 && x[static_cast<std::size_t>(i)] == 2) x[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++x[static_cast<std::size_t>(i)];
  }
  return out;
}

double entropy(const std::vector<double>& p) {
  double h = 0;
  for (double x : p) h -= xlg(x);
  return h;
}

double h3(double a, double b, double c) { return -xlg(a) - xlg(b) - xlg(c); }

Marginal make_marginal(double gamma) {
  check_gamma(gamma);
  return {gamma};
}

Distribution max_entropy_symmetric(double gamma) {
  Marginal m = make_marginal(gamma);
  Distribution d;
  d.support = support_set(4);
  for (const auto& x : d.support) d.p.push_back(is_two_type(x) ? gamma : m.beta() / 3);
  d.entropy = entropy(d.p);
  return d;
}

double h_pstar(double gamma) {
  check_gamma(gamma);
  double beta = 0.5 - 2 * gamma;
  return -4 * xlg(gamma) - (beta <= 0 ? 0.0 : 2 * beta * std::log2(beta / 3));
}

IpfResult max_entropy_ipf(const std::vector<Point>& support, const std::vector<MarginalConstraint>& constraints,
                          const IpfOptions& options) {
  if (support.empty()) throw std::invalid_argument("max_entropy_ipf: empty support");
  const std::size_t n = support.size();
  for (const auto& c : constraints) {
    double total = 0;
    for (double t : c.target) total += t;
    if (std::abs(total - 1) > 1e-9) throw std::invalid_argument("max_entropy_ipf: marginal does not sum to 1");
    for (std::size_t b = 0; b < c.target.size(); ++b) {
      if (c.target[b] <= 0) continue;
      bool any = false;
      for (const auto& x : support) any = any || (c.coordinate < x.size() && x[c.coordinate] == static_cast<int>(b));
      if (!any) throw std::domain_error("max_entropy_ipf: infeasible marginals");
    }
  }
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  auto violation = [&] {
    double v = 0;
    for (const auto& c : constraints) {
      std::vector<double> got(c.target.size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) got[static_cast<std::size_t>(support[i][c.coordinate])] += p[i];
      for (std::size_t b = 0; b < got.size(); ++b) v = std::max(v, std::abs(got[b] - c.target[b]));
    }
    return v;
  };
  IpfResult res;
  double v = violation();
  double plateau_ref = v;
  std::size_t plateau_at = 0;
  while (v > options.tolerance && res.iterations < options.max_iterations) {
    for (const auto& c : constraints) {
      std::vector<double> got(c.target.size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) got[static_cast<std::size_t>(support[i][c.coordinate])] += p[i];
      for (std::size_t i = 0; i < n; ++i) {
        auto b = static_cast<std::size_t>(support[i][c.coordinate]);
        p[i] = got[b] > 0 ? p[i] * c.target[b] / got[b] : 0.0;
      }
    }
    ++res.iterations;
    v = violation();
    if (res.iterations - plateau_at >= 2000) {
      if (v > 0.999 * plateau_ref && v > 1e-6) throw std::domain_error("max_entropy_ipf: infeasible marginals");
      plateau_ref = v;
      plateau_at = res.iterations;
    }
  }
  if (v > options.tolerance && v > 1e-6) throw std::domain_error("max_entropy_ipf: did not converge");
  res.violation = v;
  res.dist.support = support;
  res.dist.p = std::move(p);
  res.dist.entropy = entropy(res.dist.p);
  return res;
}

const char* r_name(RId r) {
  switch (r) {
    case RId::R1: return "R1";
    case RId::R2: return "R2";
    case RId::R3: return "R3";
  }
  return "?";
}

RRelation make_relation(RId id) {
  RRelation r{id, {}};
  const auto phi = support_set(4);
  if (id == RId::R1) {
    for (const auto& x : phi)
      for (const auto& y : phi)
        if (x[0] == y[0]) r.pairs.push_back({x, y});
    return r;
  }
  for (const auto& x : phi) r.pairs.push_back({x, x});
  std::vector<std::pair<Point, Point>> classes;
  if (id == RId::R2) {
    classes = {{{0, 1, 1, 0}, {0, 0, 0, 2}}};
  } else {
    classes = {{{0, 0, 1, 1}, {0, 1, 0, 1}}, {{1, 1, 0, 0}, {1, 0, 1, 0}}, {{0, 2, 0, 0}, {0, 0, 2, 0}}};
  }
  for (const auto& [a, b] : classes) {
    r.pairs.push_back({a, b});
    r.pairs.push_back({b, a});
  }
  return r;
}

RRelation diagonal_relation() {
  RRelation r{RId::R1, {}};
  for (const auto& x : support_set(4)) r.pairs.push_back({x, x});
  return r;
}

bool relation_within_some_ri(const RRelation& r) {
  if (r.pairs.empty()) return true;
  for (std::size_t i = 0; i < r.pairs.front().first.size(); ++i) {
    bool all = true;
    for (const auto& [x, y] : r.pairs) all = all && x[i] == y[i];
    if (all) return true;
  }
  return false;
}

bool relation_is_diagonal(const RRelation& r) {
  return std::all_of(r.pairs.begin(), r.pairs.end(), [](const auto& pr) { return pr.first == pr.second; });
}

TightnessMap TightnessMap::identity(int k) {
  TightnessMap m;
  m.alpha.assign(static_cast<std::size_t>(k), {0, 1, 2});
  return m;
}

std::vector<long> TightnessMap::apply(const Point& x) const {
  if (x.size() != alpha.size()) throw std::invalid_argument("tightness map arity mismatch");
  std::vector<long> out(x.size());
  for (std::size_t u = 0; u < x.size(); ++u) out[u] = alpha[u][static_cast<std::size_t>(x[u])];
  return out;
}

bool is_tight(const TightnessMap& m, const std::vector<Point>& support) {
  std::set<long> sums;
  for (const auto& x : support) {
    long s = 0;
    for (long v : m.apply(x)) s += v;
    sums.insert(s);
  }
  return sums.size() <= 1;
}

std::size_t r_alpha_rank(const RRelation& r, const TightnessMap& m) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& [x, y] : r.pairs) {
    auto ax = m.apply(x), ay = m.apply(y);
    std::vector<Rational> row(ax.size());
    bool nonzero = false;
    for (std::size_t u = 0; u < ax.size(); ++u) {
      row[u] = ax[u] - ay[u];
      nonzero = nonzero || ax[u] != ay[u];
    }
    if (nonzero) rows.push_back(std::move(row));
  }
  return rows.empty() ? 0 : matrix_rank(std::move(rows));
}

IpfResult q_star(const RRelation& r, double gamma) {
  Marginal m = make_marginal(gamma);
  auto pr = m.probs();
  std::vector<Point> support;
  for (const auto& [x, y] : r.pairs) {
    Point z = x;
    z.insert(z.end(), y.begin(), y.end());
    support.push_back(std::move(z));
  }
  std::vector<MarginalConstraint> cons;
  for (std::size_t c = 0; c < 8; ++c) cons.push_back({c, {pr[0], pr[1], pr[2]}});
  return max_entropy_ipf(support, cons);
}

double U_of_gamma(double gamma) {
  check_gamma(gamma);
  double beta = 0.5 - 2 * gamma;
  return -4 * xlg(gamma) - 4 * xlg(2 * beta / 5) - 2 * xlg(beta / 5) + 2 * gamma + 8 * beta / 5;
}

double D_of_gamma(double gamma) {
  Marginal m = make_marginal(gamma);
  return 3 * h_pstar(gamma) - 2 * U_of_gamma(gamma) - h3(m.alpha(), m.beta(), m.gamma);
}

double D_second_closed(double gamma) {
  return 3 / (gamma * (2 * gamma + 1) * (4 * gamma - 1) * std::log(2.0));
}

FrValue F_R(double gamma, RId r, bool with_numeric) {
  Marginal m = make_marginal(gamma);
  double hp = h_pstar(gamma);
  double h1 = h3(m.alpha(), m.beta(), m.gamma);
  FrValue v{};
  switch (r) {
    case RId::R1:
      v.q_upper = 2 * hp - h1;
      v.certified = h1;
      break;
    case RId::R2:
      v.q_upper = hp + 0.5 - gamma;
      v.certified = hp - 1 + 2 * gamma;
      break;
    case RId::R3:
      v.q_upper = U_of_gamma(gamma);
      v.certified = 3 * hp - 2 * v.q_upper;
      break;
  }
  if (with_numeric) {
    RRelation rel = make_relation(r);
    double hq = q_star(rel, gamma).dist.entropy;
    v.numeric = hp - 2 * (hq - hp) / static_cast<double>(r_alpha_rank(rel));
  }
  return v;
}

double mu(double gamma) {
  Marginal m = make_marginal(gamma);
  return h3(m.alpha(), m.beta(), m.gamma);
}

MuReport mu_verbose(double gamma) {
  double v = mu(gamma);
  double mn = std::min({F_R(gamma, RId::R1).certified, F_R(gamma, RId::R2).certified, F_R(gamma, RId::R3).certified});
  return {v, mn, std::abs(mn - v) <= 1e-9};
}

double tau_k4_bound(unsigned q, double gamma) {
  if (q < 2) throw std::out_of_range("q must be at least 2");
  if (!(gamma >= 0 && gamma < 0.25)) throw std::out_of_range("gamma must lie in [0, 1/4)");
  double qd = q;
  return std::log((qd + 2) / std::pow(2.0, mu(gamma))) / std::log(qd) / (1 - 4 * gamma);
}

double tau_k4_bound_alt(unsigned q, double gamma) {
  if (q < 2) throw std::out_of_range("q must be at least 2");
  if (!(gamma >= 0 && gamma < 0.25)) throw std::out_of_range("gamma must lie in [0, 1/4)");
  double qd = q;
  return (std::log2(qd + 2) - mu(gamma)) / ((1 - 4 * gamma) * std::log2(qd));
}

TauOptimum optimize_tau_k4(const std::vector<unsigned>& qs, double tolerance) {
  if (qs.empty()) throw std::invalid_argument("optimize_tau_k4: empty q range");
  TauOptimum out;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (unsigned q : qs) {
    double a = 0, b = 0.24;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = tau_k4_bound(q, c), fd = tau_k4_bound(q, d);
    while (b - a > tolerance) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = tau_k4_bound(q, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = tau_k4_bound(q, d);
      }
    }
    TauPoint p{q, (a + b) / 2, tau_k4_bound(q, (a + b) / 2)};
    for (double edge : {0.0, 0.24}) {
      double f = tau_k4_bound(q, edge);
      if (f < p.bound) p = {q, edge, f};
    }
    out.per_q.push_back(p);
    if (out.per_q.size() == 1 || p.bound < out.best.bound) out.best = p;
  }
  return out;
}

SweepReport verify_lemmas_sweep(std::size_t grid_size, bool with_numeric) {
  if (grid_size < 2) throw std::invalid_argument("sweep needs at least 2 points");
  SweepReport rep;
  rep.min_d = D_of_gamma(0);
  const double lg3 = std::log2(3.0);
  for (std::size_t i = 0; i < grid_size; ++i) {
    double g = 0.25 * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    ++rep.points;
    Marginal m = make_marginal(g);
    double h1 = h3(m.alpha(), m.beta(), m.gamma);
    if (h_pstar(g) - 1 + 2 * g < h1 - 1e-12 || (1 - g) * lg3 < 1 - 2 * g) ++rep.fr2_fail;
    double d = D_of_gamma(g);
    rep.min_d = std::min(rep.min_d, d);
    if (d < 0) ++rep.d_fail;
    if (!mu_verbose(g).consistent) ++rep.mu_fail;
    if (g > 0 && g < 0.25) {
      double h = 1e-3 * std::min(g, 0.25 - g);
      long double fd = (static_cast<long double>(D_of_gamma(g + h)) - 2.0L * D_of_gamma(g) + D_of_gamma(g - h)) /
                       (static_cast<long double>(h) * h);
      double closed = D_second_closed(g);
      double rel = static_cast<double>(std::abs((fd - closed) / closed));
      rep.max_d2_rel_err = std::max(rep.max_d2_rel_err, rel);
      if (rel > 1e-5) ++rep.d2_fail;
    }
    if (with_numeric) {
      for (RId r : {RId::R2, RId::R3}) {
        double hq = q_star(make_relation(r), g).dist.entropy;
        double excess = hq - F_R(g, r).q_upper;
        rep.max_q_excess = std::max(rep.max_q_excess, excess);
        if (excess > 1e-9) ++rep.q_fail;
      }
    }
  }
  return rep;
}

TypeClassCount type_class_counting(const Rational& gamma, long n) {
  if (gamma < 0 || gamma > Rational(1, 4)) throw std::out_of_range("gamma must lie in [0, 1/4]");
  if (n <= 0) throw std::invalid_argument("n must be positive");
  TypeClassCount t;
  t.alpha_n = (Rational(1, 2) + gamma) * n;
  t.beta_n = (Rational(1, 2) - 2 * gamma) * n;
  t.gamma_n = gamma * n;
  for (const auto* v : {&t.alpha_n, &t.beta_n, &t.gamma_n})
    if (denominator(*v) != 1) throw std::domain_error("type class is not integral for this n");
  t.m = (1 - 4 * gamma) * n;
  t.identities_hold = 2 * t.m == 4 * t.beta_n && n - t.m == 4 * t.gamma_n &&
                      t.alpha_n + t.beta_n + t.gamma_n == n;
  return t;
}

}  // namespace gtensor::laser
