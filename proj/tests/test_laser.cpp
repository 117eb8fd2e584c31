#include "gtensor/laser.hpp"

#include <doctest.h>

#include <cmath>

using namespace gtensor;
using namespace gtensor::laser;

namespace {

constexpr double kTight = 1e-9;

std::vector<MarginalConstraint> symmetric_constraints(double gamma, int k = 4) {
  auto m = make_marginal(gamma).probs();
  std::vector<MarginalConstraint> c;
  for (int u = 0; u < k; ++u) c.push_back({static_cast<std::size_t>(u), {m[0], m[1], m[2]}});
  return c;
}

}  // namespace

TEST_CASE("support and entropy") {
  auto phi = support_set(4);
  CHECK(phi.size() == 10);
  for (const auto& x : phi) {
    int s = 0;
    for (int v : x) s += v;
    CHECK(s == 2);
  }
  CHECK(entropy({0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(entropy({1.0, 0.0}) == 0.0);
  CHECK(h3(0.25, 0.25, 0.5) == doctest::Approx(1.5));
  CHECK_THROWS(make_marginal(0.3));
  CHECK_THROWS(make_marginal(-0.01));
}

TEST_CASE("symmetric maximum entropy") {
  CHECK(h_pstar(0) == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
  CHECK(h_pstar(0.25) == doctest::Approx(2.0).epsilon(1e-12));
  double want = -4 * 0.125 * std::log2(0.125) - 2 * 0.25 * std::log2(1.0 / 12);
  CHECK(std::abs(h_pstar(0.125) - want) < 1e-12);
  auto d = max_entropy_symmetric(0.1);
  double total = 0;
  for (double p : d.p) total += p;
  CHECK(std::abs(total - 1) < 1e-12);
}

TEST_CASE("iterative proportional fitting") {
  auto phi = support_set(4);
  for (double g : {0.02, 0.1, 0.2}) {
    auto r = max_entropy_ipf(phi, symmetric_constraints(g));
    auto d = max_entropy_symmetric(g);
    CHECK(std::abs(r.dist.entropy - d.entropy) < 1e-10);
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(std::abs(r.dist.p[i] - d.p[i]) < 1e-10);
  }
  auto single = max_entropy_ipf({{2, 0, 0, 0}}, {{0, {0, 0, 1}}});
  CHECK(single.dist.p.size() == 1);
  CHECK(single.dist.entropy == doctest::Approx(0.0));
  CHECK_THROWS_AS(max_entropy_ipf({{2, 0, 0, 0}}, {{0, {1, 0, 0}}}), std::domain_error);
}

TEST_CASE("relations and ranks") {
  auto r1 = make_relation(RId::R1), r2 = make_relation(RId::R2), r3 = make_relation(RId::R3);
  CHECK(r_alpha_rank(r1) == 2);
  CHECK(r_alpha_rank(r2) == 1);
  CHECK(r_alpha_rank(r3) == 1);
  CHECK(r_alpha_rank(diagonal_relation()) == 0);
  CHECK(relation_is_diagonal(diagonal_relation()));
  CHECK_FALSE(relation_is_diagonal(r1));
  CHECK(relation_within_some_ri(r2));
  CHECK(is_tight(TightnessMap::identity(), support_set(4)));
}

TEST_CASE("relation maximum entropy") {
  for (double g : {0.01, 0.1, 0.2}) {
    double hs = h_pstar(g);
    auto q1 = q_star(make_relation(RId::R1), g);
    double p1 = h3(0.5 + g, 0.5 - 2 * g, g);
    CHECK(std::abs(q1.dist.entropy - (2 * hs - p1)) < 1e-8);
    auto q3 = q_star(make_relation(RId::R3), g);
    CHECK(q3.dist.entropy <= U_of_gamma(g) + 1e-9);
    auto f2 = F_R(g, RId::R2, true);
    REQUIRE(f2.numeric.has_value());
    CHECK(*f2.numeric >= f2.certified - 1e-9);
  }
}

TEST_CASE("lemma quantities") {
  CHECK(std::abs(D_of_gamma(0) - std::log2(27.0 / 25)) < kTight);
  CHECK(std::abs(D_of_gamma(0.25) - (-1 + 0.75 * std::log2(3.0))) < kTight);
  double g = 0.0012105179;
  auto m = mu_verbose(g);
  CHECK(m.consistent);
  CHECK(m.mu == doctest::Approx(h_pstar(g) - (h_pstar(g) - F_R(g, RId::R3).certified)).epsilon(1));
  auto sweep = verify_lemmas_sweep(200, false);
  CHECK(sweep.pass());
  CHECK(sweep.min_d > 0);
}

TEST_CASE("tau bound") {
  CHECK(std::abs(tau_k4_bound(7, 0) - std::log(4.5) / std::log(7.0)) < 1e-12);
  CHECK(std::abs(tau_k4_bound(7, 0) - 0.772943) < 1e-6);
  CHECK(std::abs(tau_k4_bound(7, 0.0012105179) - 0.77231702) < 5e-6);
  CHECK(std::abs(tau_k4_bound(7, 0.0012105179) - 0.772317026662) < 1e-10);
  CHECK(std::abs(tau_k4_bound(2, 0) - 1) < 1e-12);
  for (double gg : {0.0, 0.01, 0.1, 0.2})
    for (unsigned q : {2u, 5u, 7u, 11u}) CHECK(std::abs(tau_k4_bound(q, gg) - tau_k4_bound_alt(q, gg)) < 1e-12);
  CHECK_THROWS(tau_k4_bound(1, 0));
  CHECK_THROWS(tau_k4_bound(7, 0.25));
}

TEST_CASE("tau optimization") {
  auto seven = optimize_tau_k4({7});
  CHECK(seven.best.q == 7);
  CHECK(std::abs(seven.best.gamma - 0.0012105) < 1e-6);
  CHECK(seven.best.bound < 0.772318);
  std::vector<unsigned> qs;
  for (unsigned q = 2; q <= 16; ++q) qs.push_back(q);
  auto all = optimize_tau_k4(qs);
  CHECK(all.best.q == 7);
  CHECK(all.per_q.size() == qs.size());
  auto two = optimize_tau_k4({2});
  CHECK(two.best.q == 2);
  CHECK(std::abs(two.best.bound - 0.95599873) < 1e-6);
  CHECK(two.best.bound > all.best.bound);
}

TEST_CASE("type classes") {
  auto a = type_class_counting(0, 4);
  CHECK(a.m == 4);
  CHECK(a.identities_hold);
  auto b = type_class_counting(Rational(1, 8), 8);
  CHECK(b.m == 4);
  CHECK(b.identities_hold);
  auto c = type_class_counting(Rational(1, 4), 4);
  CHECK(c.m == 0);
  CHECK_THROWS_AS(type_class_counting(Rational(1, 8), 3), std::domain_error);
}
