#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

#include "krawlp/errors.hpp"

namespace krawlp {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Canonical "p/q" form: reduced, positive denominator, denominator always written.
inline std::string to_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline std::string to_string(const Integer& z) { return z.str(); }

/// Accepts "p/q", "p", and signed forms. Zero denominators are rejected.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InputError("empty rational");
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view part) {
    std::string_view digits = part;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty()) throw InputError("malformed rational '" + std::string(text) + "'");
    for (char c : digits) {
      if (c < '0' || c > '9') throw InputError("malformed rational '" + std::string(text) + "'");
    }
    std::string s(part);
    if (s.front() == '+') s.erase(0, 1);
    return Integer(s);
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const Integer num = parse_int(text.substr(0, slash));
  const Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline Integer ipow(const Integer& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

inline Integer ipow(unsigned long base, unsigned exponent) { return ipow(Integer(base), exponent); }

}  // namespace krawlp
