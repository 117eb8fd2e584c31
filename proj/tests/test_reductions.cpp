#include "gtensor/reductions.hpp"
#include "gtensor/verify/oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace gtensor;

TEST_CASE("matrix input") {
  std::istringstream in("1 2\n-3 4\n");
  IntMatrix a = read_int_matrix(in);
  CHECK(a.size() == 2);
  CHECK(a[1][0] == -3);
  std::istringstream ragged("1 2\n3\n");
  CHECK_THROWS(read_int_matrix(ragged));
  std::istringstream frac("1 2\n3 4.5\n");
  CHECK_THROWS(read_int_matrix(frac));
}

TEST_CASE("permanent grid layout") {
  IntMatrix a = {{1, 2}, {3, 4}};
  PermanentGrid p = permanent_grid(a);
  CHECK(p.grid.num_vertices() == 16);
  CHECK(p.grid.num_edges() == 24);
  CHECK(p.signatures.size() == 16);
  // interior vertices have all four slots
  for (std::size_t v = 0; v < 16; ++v) {
    std::size_t r = v / 4, c = v % 4;
    int present = 0;
    for (EdgeId e : p.slots[v].edge) present += e >= 0;
    CHECK(present == static_cast<int>((r > 0) + (r < 3) + (c > 0) + (c < 3)));
  }
}

TEST_CASE("permanent reduction against Ryser") {
  CHECK(permanent_reduction({{7}}).value == 7);
  oracle::Rng rng(53);
  for (std::size_t n = 1; n <= 4; ++n)
    for (int i = 0; i < 6; ++i) {
      IntMatrix a = oracle::random_matrix(rng, n);
      CHECK(permanent_reduction(a).value == oracle::ryser(a));
    }
  IntMatrix a = oracle::random_matrix(rng, 2);
  CHECK(permanent_reduction(a).value == a[0][0] * a[1][1] + a[0][1] * a[1][0]);
  IntMatrix big = oracle::random_matrix(rng, 5);
  CHECK(permanent_reduction(big).value == oracle::ryser(big));
  IntMatrix too_big(7, std::vector<BigInt>(7, 1));
  CHECK_THROWS(permanent_reduction(too_big));
}

TEST_CASE("corner constants rescale") {
  IntMatrix a = {{2, -1}, {5, 3}};
  // permanent_grid accepts any nonzero corner constant
  CHECK(permanent_grid(a, 3).corner_constant == 3);
}

TEST_CASE("Holant brute force") {
  auto id = permanent_bruteforce_check({{1, 0}, {0, 1}}, 2);
  CHECK(id.value == 1);
  CHECK(id.assignments == (std::uint64_t{1} << 24));
  CHECK(id.flips_form_permutations);
  auto ones = permanent_bruteforce_check({{1, 1}, {1, 1}}, 2);
  CHECK(ones.value == 2);
  IntMatrix a = {{-2, 3}, {1, 2}};
  CHECK(permanent_bruteforce_check(a, 4).value == permanent_reduction(a).value);
}

TEST_CASE("hyperclique projection") {
  auto one = hyperclique_projection_check(1);
  CHECK(one.pass);
  CHECK(one.source_nonzeros == 1);
  CHECK(one.target_nonzeros == 1);
  auto two = hyperclique_projection_check(2);
  CHECK(two.pass);
  CHECK(two.target_nonzeros == 16);
  CHECK(hyperclique_tensor(3, 4, 2).order() == 4);
  CHECK_THROWS(hyperclique_projection_check(3));
}

TEST_CASE("hyperclique counting") {
  auto empty = hyperclique_count(2, {});
  CHECK(empty.via_tensor == 0);
  CHECK(empty.brute_force == 0);
  auto k4 = hyperclique_count(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  CHECK(k4.via_tensor == 1);
  CHECK(k4.brute_force == 1);
  auto missing = hyperclique_count(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}});
  CHECK(missing.via_tensor == 0);
  std::vector<std::array<int, 3>> all;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      for (int c = b + 1; c < 5; ++c)
        if (a + b + c != 6) all.push_back({c, a, b});
  auto part = hyperclique_count(5, all);
  CHECK(part.via_tensor == part.brute_force);
  CHECK(hyperclique_count(5, all).brute_force > 0);
  CHECK_THROWS(hyperclique_count(3, {{0, 0, 1}}));
}
