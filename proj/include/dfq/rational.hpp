#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace dfq {

/// Exact rational used for selectivities and block counts.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

BigInt ceil(const Rational &r);
BigInt floor(const Rational &r);
Rational to_rational(double d);
double to_double(const Rational &r);
/// "7/25" style, or an integer when the denominator is one.
std::string to_string(const Rational &r);
/// Exact value of "3", "-0.25", "1e6", "2.5E-3" or "7/25".
std::optional<Rational> parse_rational(std::string_view s);

} // namespace dfq
