#include "allostery/numeric.hpp"

#include <cctype>
#include <limits>

#include "allostery/errors.hpp"

namespace allostery {

Integer floor_mod(const Integer& a, const Integer& n) {
  if (n <= 0) throw InvalidArgument("floor_mod: modulus must be positive");
  Integer r = a % n;
  if (r < 0) r += n;
  return r;
}

Integer ipow(const Integer& base, std::size_t exponent) {
  Integer result = 1;
  Integer b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (Integer f = 3; f * f <= n; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

Integer next_prime(const Integer& n) {
  Integer c = n < 2 ? Integer(2) : n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::optional<std::uint64_t> to_u64(const Integer& n) {
  if (n < 0 || n > Integer(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
  return n.convert_to<std::uint64_t>();
}

std::string to_string(const Integer& n) { return n.str(); }

std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

namespace {

bool is_integer_token(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Integer parse_integer(std::string_view text) {
  std::string_view t = trim(text);
  if (!is_integer_token(t)) throw ParseError("expected an integer, got '" + std::string(text) + "'", 0, 1);
  if (t.front() == '+') t.remove_prefix(1);
  return Integer(std::string(t));
}

Rational parse_rational(std::string_view text) {
  std::string_view t = trim(text);
  auto slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(t));
  Integer num = parse_integer(t.substr(0, slash));
  std::string_view den_text = t.substr(slash + 1);
  if (!is_integer_token(trim(den_text)) || trim(den_text).front() == '-') {
    throw ParseError("expected a positive denominator in '" + std::string(text) + "'", 0, slash + 2);
  }
  Integer den = parse_integer(den_text);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", 0, slash + 2);
  return Rational(num, den);
}

}  // namespace allostery
