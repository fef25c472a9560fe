#pragma once

// Exact rational arithmetic for parameter-region tests, so that points on or
// near a region boundary are never misclassified by rounding.

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace haar {

using Rational = boost::multiprecision::cpp_rational;

/// "3", "-0.45", "2/3", "1e-2". Throws DomainError on anything else.
Rational parse_rational(std::string_view text);

/// 1/x for an exponent given as text; "inf" maps to 0.
Rational parse_reciprocal(std::string_view text);

/// The exact value of a finite double.
Rational to_rational(double x);

/// 1/x for a positive double, with 1/inf = 0.
Rational reciprocal(double x);

double to_double(const Rational& x);
std::string to_string(const Rational& x);

}  // namespace haar
