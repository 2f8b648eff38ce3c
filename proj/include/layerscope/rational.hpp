#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace layerscope {

// Exact scalar used for distances, scale parameters and shift arithmetic.
// Inputs arrive as decimal strings, so every value reaching a comparison is
// exact and coincidences of distances are decided without tolerances.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Grid spacing (1e-12) used when a distance can only be obtained through a
// floating-point square root.
const Rational& quantum();

// Parses "-12", "3.25", "1e-3", "4.1e2", ... into an exact rational.
std::optional<Rational> parse_decimal(std::string_view text);

// Finite decimal when the reduced denominator is 2^a 5^b, "p/q" otherwise.
std::string format_exact(const Rational& value);

// Nearest multiple of quantum(); ties round away from zero.
Rational quantize(double value);

Rational floor_rational(const Rational& value);
Rational ceil_rational(const Rational& value);

double to_double(const Rational& value);

}  // namespace layerscope
