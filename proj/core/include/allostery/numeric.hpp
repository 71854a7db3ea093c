#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace allostery {

/// Exact unbounded integers and rationals. Every count, index, residue and
/// measure in the library is one of these.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Canonical residue of `a` modulo `n` in [0, n). Requires n > 0.
Integer floor_mod(const Integer& a, const Integer& n);

Integer ipow(const Integer& base, std::size_t exponent);

/// Deterministic trial division; adequate for the prime sizes used here.
bool is_prime(const Integer& n);

/// Smallest prime strictly greater than n.
Integer next_prime(const Integer& n);

/// Value as std::uint64_t when it fits, otherwise nullopt.
std::optional<std::uint64_t> to_u64(const Integer& n);

std::string to_string(const Integer& n);

/// Always rendered as "num/den" with den >= 1, e.g. "1/1", "-3/4".
std::string to_string(const Rational& q);

/// Accepts "num/den" or a bare integer; throws ParseError on anything else.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

}  // namespace allostery
