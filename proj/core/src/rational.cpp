#include "conic/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace conic {

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  auto read_digits = [&](Integer& out) -> bool {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    out = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      out = out * 10 + (text[i] - '0');
      ++i;
    }
    return true;
  };
  Integer num;
  if (!read_digits(num)) return std::nullopt;
  Integer den = 1;
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!read_digits(den) || den == 0) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

Rational rational_sqrt(const Rational& r) {
  if (r < 0) throw std::domain_error("rational_sqrt of a negative value");
  const Integer ns = sqrt(numerator(r));
  const Integer ds = sqrt(denominator(r));
  if (ns * ns == numerator(r) && ds * ds == denominator(r)) return Rational(ns, ds);
  return Rational(std::sqrt(to_double(r)));
}

}  // namespace conic
