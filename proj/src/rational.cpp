#include "ctxprob/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace ctxprob {
namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  cpp_int value = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? cpp_int(-value) : value;
}

cpp_int floor_of(const Rational& x) {
  cpp_int n = numerator(x);
  cpp_int d = denominator(x);
  cpp_int q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

// Simplest rational in the closed interval [lo, hi], 0 <= lo <= hi.
Rational simplest_between(const Rational& lo, const Rational& hi) {
  cpp_int fl = floor_of(lo);
  if (Rational(fl) == lo) return Rational(fl);
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational rest = simplest_between(1 / (hi - Rational(fl)), 1 / (lo - Rational(fl)));
  return Rational(fl) + 1 / rest;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text, text));
  }
  cpp_int num = parse_integer(text.substr(0, slash), text);
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  cpp_int den = parse_integer(den_text, text);
  if (den == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

std::string format_rational(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

Rational exact_rational(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("cannot convert non-finite double to rational");
  }
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);
  // 53 significant bits make the scaled mantissa an exact integer.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational result(scaled);
  if (exponent > 0) {
    result *= Rational(cpp_int(1) << exponent);
  } else if (exponent < 0) {
    result /= Rational(cpp_int(1) << -exponent);
  }
  return result;
}

Rational rationalize(double value, double tolerance) {
  Rational x = exact_rational(value);
  Rational tol = exact_rational(std::abs(tolerance));
  if (x < 0) return -rationalize(-value, tolerance);
  Rational lo = x - tol;
  if (lo <= 0) return Rational(0);
  return simplest_between(lo, x + tol);
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

}  // namespace ctxprob
