#include "haar/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "haar/error.hpp"

namespace haar {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(long e) {
  cpp_int r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// [sign] digits [. digits] [e [sign] digits]
Rational parse_decimal(std::string_view text, std::string_view whole) {
  auto fail = [&]() -> Rational { throw DomainError("not a rational number: '" + std::string(whole) + "'"); };
  bool negative = false;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = text.substr(e + 1);
    text = text.substr(0, e);
    bool eneg = false;
    if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
      eneg = ex[0] == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex) || ex.size() > 4) return fail();
    exponent = std::stol(std::string(ex)) * (eneg ? -1 : 1);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
      return fail();
    }
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(text)) return fail();
    digits = std::string(text);
  }
  // cpp_int reads a leading 0 as an octal prefix.
  const auto nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  Rational r{cpp_int(digits)};
  if (exponent >= 0) {
    r *= pow10(exponent);
  } else {
    r /= pow10(-exponent);
  }
  return negative ? Rational(-r) : r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view t = trim(text);
  if (auto slash = t.find('/'); slash != std::string_view::npos) {
    const Rational den = parse_decimal(trim(t.substr(slash + 1)), text);
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return parse_decimal(trim(t.substr(0, slash)), text) / den;
  }
  return parse_decimal(t, text);
}

Rational parse_reciprocal(std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "inf" || t == "infinity" || t == "Inf") return Rational(0);
  const Rational x = parse_rational(t);
  if (x <= 0) throw DomainError("exponent must be positive: '" + std::string(text) + "'");
  return 1 / x;
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("to_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, 0.5 <= |m| < 1
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  Rational r{cpp_int(mant)};
  e -= 53;
  if (e >= 0) {
    r *= cpp_int(1) << e;
  } else {
    r /= cpp_int(1) << -e;
  }
  return r;
}

Rational reciprocal(double x) {
  if (std::isinf(x) && x > 0) return Rational(0);
  if (!(x > 0.0)) throw DomainError("reciprocal: exponent must be positive");
  return 1 / to_rational(x);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

std::string to_string(const Rational& x) { return x.str(); }

}  // namespace haar
