#pragma once

#include "gtensor/rational.hpp"

#include <string>
#include <vector>

namespace gtensor {

using Matrix = std::vector<std::vector<Rational>>;

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;     // primal solution
  std::vector<Rational> dual;  // one multiplier per constraint row
  Rational objective;
  std::size_t pivots = 0;
};

// min c.x  subject to  A x = b, x >= 0. Dense two-phase simplex with Bland's rule.
LpResult solve_lp(const Matrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c);

// Primal feasibility, dual feasibility (c - A^T y >= 0) and c.x == b.y, all exact.
bool certify_lp(const Matrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c,
                const LpResult& r, std::string* why = nullptr);

}  // namespace gtensor
