#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "triad/core/types.hpp"

namespace triad::analytical {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double d) { return d; }

namespace detail {

// Digits accumulated by hand; the cpp_int string constructor would read a
// leading zero as an octal prefix.
inline boost::multiprecision::cpp_int parse_signed_digits(std::string_view s) {
  if (s.empty()) throw StructuralError("bad integer literal");
  bool neg = s[0] == '-';
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw StructuralError("bad integer literal");
  boost::multiprecision::cpp_int v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw StructuralError("bad integer literal");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace detail

// Parses "p/q", "0.25", or "3" exactly. Decimal strings become digits/10^k so
// that 0.9 is 9/10, not its binary-float neighbour.
inline Rational parse_rational(std::string_view s) {
  try {
    std::size_t slash = s.find('/');
    if (slash != std::string_view::npos) {
      auto num = detail::parse_signed_digits(s.substr(0, slash));
      auto den = detail::parse_signed_digits(s.substr(slash + 1));
      if (den == 0) throw StructuralError("zero denominator");
      return Rational(num, den);
    }
    std::size_t dot = s.find('.');
    if (dot == std::string_view::npos) return Rational(detail::parse_signed_digits(s));
    auto int_part = detail::parse_signed_digits(s.substr(0, dot));
    std::string_view frac = s.substr(dot + 1);
    boost::multiprecision::cpp_int den = 1, num = 0;
    for (char c : frac) {
      if (c < '0' || c > '9') throw StructuralError("bad fraction digit");
      num = num * 10 + (c - '0');
      den *= 10;
    }
    bool neg = !s.empty() && s[0] == '-';
    Rational r = Rational(int_part) + (neg ? -Rational(num, den) : Rational(num, den));
    return r;
  } catch (const std::exception&) {
    throw StructuralError("bad rational literal: " + std::string(s));
  }
}

// Number-type adapters so the analytical operations can run exactly on
// rationals or approximately on doubles with one implementation.
template <typename P>
struct NumTraits;

template <>
struct NumTraits<double> {
  static double from_string(std::string_view s) { return to_double(parse_rational(s)); }
  static double from_double(double d) { return d; }
  static bool near_one(double v) { return v > 1.0 - 1e-9 && v < 1.0 + 1e-9; }
  static std::string str(double v) { return std::to_string(v); }
};

template <>
struct NumTraits<Rational> {
  static Rational from_string(std::string_view s) { return parse_rational(s); }
  static Rational from_double(double d) { return Rational(d); }
  static bool near_one(const Rational& v) { return v == 1; }
  static std::string str(const Rational& v) { return v.str(); }
};

}  // namespace triad::analytical
