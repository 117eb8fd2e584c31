#include "gtensor/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace gtensor {

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_fraction_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

namespace {

BigInt parse_int(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw std::invalid_argument("bad integer: " + std::string(s));
  std::size_t nz = s.find_first_not_of('0', i);
  BigInt v(nz == std::string_view::npos ? std::string("0") : std::string(s.substr(nz)));
  return s[0] == '-' ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return Rational(num, den);
  }
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    exp10 = static_cast<long>(parse_int(text.substr(e + 1)).convert_to<long>());
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  long frac = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("bad decimal: " + std::string(text));
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac;
    } else {
      throw std::invalid_argument("bad number: " + std::string(text));
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad number: " + std::string(text));
  Rational r{parse_int(digits)};
  long shift = exp10 - frac;
  BigInt p = ipow(BigInt(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
  r = shift < 0 ? Rational(r / Rational(p)) : Rational(r * Rational(p));
  return neg ? Rational(-r) : r;
}

std::string to_decimal(const Rational& q, int digits) {
  BigInt scale = ipow(BigInt(10), static_cast<unsigned>(digits));
  Rational s = abs(q) * Rational(scale);
  BigInt n = numerator(s), d = denominator(s);
  BigInt v = (2 * n + d) / (2 * d);
  std::string body = v.str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits))
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return (q < 0 && v != 0 ? "-" : "") + body;
}

Rational round_up(const Rational& q, int digits) {
  BigInt scale = ipow(BigInt(10), static_cast<unsigned>(digits));
  Rational s = q * Rational(scale);
  BigInt n = numerator(s), d = denominator(s);
  BigInt c = n / d;  // truncates toward zero
  if (c * d != n && n > 0) c += 1;
  return Rational(c, scale);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / boost::multiprecision::gcd(a, b) * b);
}

BigInt ipow(const BigInt& base, unsigned exp) {
  BigInt r = 1, b = base;
  while (exp) {
    if (exp & 1u) r *= b;
    b *= b;
    exp >>= 1u;
  }
  return r;
}

std::uint64_t upow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

std::uint64_t upow_capped(std::uint64_t base, unsigned exp, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) return limit + 1;
    r *= base;
    if (r > limit) return limit + 1;
  }
  return r;
}

}  // namespace gtensor
