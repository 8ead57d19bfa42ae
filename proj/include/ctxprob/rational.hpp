#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace ctxprob {

/// Exact arbitrary-precision rational used for every classical weight.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (optionally signed). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Always renders as "p/q" in lowest terms, including integers ("1/1").
std::string format_rational(const Rational& value);

/// Exact value of a finite double (every double is a dyadic rational).
Rational exact_rational(double value);

/// Smallest-denominator rational within `tolerance` of `value`, found by
/// walking the continued-fraction convergents and semiconvergents.
Rational rationalize(double value, double tolerance);

double to_double(const Rational& value);

}  // namespace ctxprob
