#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace conic {

using Integer = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational, always stored reduced with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Parses "p", "-p" or "p/q". Returns nullopt on malformed input (q == 0 included).
std::optional<Rational> parse_rational(std::string_view text);

/// "p" when the denominator is 1, "p/q" otherwise.
std::string format_rational(const Rational& r);

/// Square root of a non-negative rational: exact when numerator and
/// denominator are perfect squares, otherwise the dyadic rational closest to
/// the double-precision root.
Rational rational_sqrt(const Rational& r);

}  // namespace conic
