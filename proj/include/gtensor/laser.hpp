#pragma once

#include "gtensor/rational.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gtensor::laser {

using Point = std::vector<int>;

// Phi for k modes over B = {0,1,2}: coordinate sum 2, lexicographic order.
std::vector<Point> support_set(int k = 4);

double entropy(const std::vector<double>& p);  // base 2, 0 lg 0 = 0
double h3(double a, double b, double c);

struct Marginal {
  double gamma;
  double alpha() const { return 0.5 + gamma; }
  double beta() const { return 0.5 - 2 * gamma; }
  std::array<double, 3> probs() const { return {alpha(), beta(), gamma}; }
};
Marginal make_marginal(double gamma);  // throws outside [0, 1/4]

struct Distribution {
  std::vector<Point> support;
  std::vector<double> p;
  double entropy = 0;
};

// Closed form: gamma on each 2-type point, beta/3 on each 1+1-type point.
Distribution max_entropy_symmetric(double gamma);
double h_pstar(double gamma);

struct MarginalConstraint {
  std::size_t coordinate;
  std::vector<double> target;  // probability of symbol b at index b
};

struct IpfOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 100000;
};

struct IpfResult {
  Distribution dist;
  std::size_t iterations = 0;
  double violation = 0;
};

IpfResult max_entropy_ipf(const std::vector<Point>& support, const std::vector<MarginalConstraint>& constraints,
                          const IpfOptions& options = {});

enum class RId { R1, R2, R3 };
const char* r_name(RId r);

struct RRelation {
  RId id;
  std::vector<std::pair<Point, Point>> pairs;
};
RRelation make_relation(RId id);
RRelation diagonal_relation();
bool relation_within_some_ri(const RRelation& r);
bool relation_is_diagonal(const RRelation& r);

struct TightnessMap {
  std::vector<std::array<long, 3>> alpha;  // alpha[u][b]
  static TightnessMap identity(int k = 4);
  std::vector<long> apply(const Point& x) const;
};
bool is_tight(const TightnessMap& m, const std::vector<Point>& support);

std::size_t r_alpha_rank(const RRelation& r, const TightnessMap& m = TightnessMap::identity());

// Distribution over pairs (x, y) in R whose X and Y both have the coordinate marginals.
IpfResult q_star(const RRelation& r, double gamma);

double U_of_gamma(double gamma);
double D_of_gamma(double gamma);
double D_second_closed(double gamma);

struct FrValue {
  double certified;              // closed form (exact for R1, lower bound for R2, R3)
  std::optional<double> numeric;  // from the numeric max-entropy Q*
  double q_upper = 0;             // closed-form upper bound on H(Q*)
};
FrValue F_R(double gamma, RId r, bool with_numeric = false);

struct MuReport {
  double mu;
  double min_over_r;
  bool consistent;
};
double mu(double gamma);
MuReport mu_verbose(double gamma);

double tau_k4_bound(unsigned q, double gamma);
double tau_k4_bound_alt(unsigned q, double gamma);

struct TauPoint {
  unsigned q;
  double gamma;
  double bound;
};
struct TauOptimum {
  TauPoint best;
  std::vector<TauPoint> per_q;
};
TauOptimum optimize_tau_k4(const std::vector<unsigned>& qs, double tolerance = 1e-10);

struct SweepReport {
  std::size_t points = 0;
  std::size_t fr2_fail = 0, d_fail = 0, d2_fail = 0, q_fail = 0, mu_fail = 0;
  double min_d = 0, max_d2_rel_err = 0, max_q_excess = 0;
  bool pass() const { return fr2_fail + d_fail + d2_fail + q_fail + mu_fail == 0; }
};
SweepReport verify_lemmas_sweep(std::size_t grid_size, bool with_numeric = true);

struct TypeClassCount {
  Rational m, alpha_n, beta_n, gamma_n;
  bool identities_hold;
};
TypeClassCount type_class_counting(const Rational& gamma, long n);

}  // namespace gtensor::laser
