#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fockstar {

using Rational = mpq_class;

/// Uniform helpers over the two coefficient fields (exact rationals and doubles).
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational abs(const Rational& x) { return ::abs(x); }
};

template <>
struct ScalarTraits<double> {
  static bool is_zero(double x) { return x == 0.0; }
  static double to_double(double x) { return x; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double abs(double x) { return x < 0 ? -x : x; }
};

/// Parses "p/q" or "p" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Always "p/q", with q = 1 for integers.
std::string format_rational(const Rational& x);

}  // namespace fockstar
