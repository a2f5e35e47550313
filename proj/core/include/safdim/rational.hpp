#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace safdim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ~50 decimal digits (~166-bit mantissa); used where double evidence is not
// enough, e.g. evaluating gaps that involve one irrational translation.
using HighPrec = boost::multiprecision::cpp_bin_float_50;

// Accepts decimal literals ("0.7", "-1.25e-3") and fraction literals ("8/9").
// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);
std::optional<Rational> try_parse_rational(std::string_view text);

// "p/q" (just "p" when the denominator is 1).
std::string rational_fraction_string(const Rational& r);

// Exact decimal string when the reduced denominator is of the form 2^a 5^b,
// otherwise falls back to the fraction form.
std::string rational_decimal_string(const Rational& r);

double rational_to_double(const Rational& r);
HighPrec rational_to_highprec(const Rational& r);

BigInt pow_int(const BigInt& base, unsigned exp);

}  // namespace safdim
