#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace gtensor {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);
// Always "num/den".
std::string to_fraction_string(const Rational& q);
// Accepts "a", "a/b", and finite decimals such as "-2.046681" or "1e-3".
Rational parse_rational(std::string_view text);

// Decimal rendering with a fixed number of digits after the point (truncated toward zero
// after rounding half away from zero).
std::string to_decimal(const Rational& q, int digits);
// Smallest multiple of 10^-digits that is >= q.
Rational round_up(const Rational& q, int digits);

double to_double(const Rational& q);
BigInt lcm(const BigInt& a, const BigInt& b);
BigInt ipow(const BigInt& base, unsigned exp);
std::uint64_t upow(std::uint64_t base, unsigned exp);
// upow that reports overflow past `limit` by returning limit + 1.
std::uint64_t upow_capped(std::uint64_t base, unsigned exp, std::uint64_t limit);

}  // namespace gtensor
