#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace akita {

/// Exact fraction with arbitrary-precision numerator and denominator.
/// Utilizations and the EDF-VD scaling factor live here; doubles appear only
/// when a value is reported.
using Rational = boost::multiprecision::cpp_rational;

[[nodiscard]] double to_double(const Rational& r);

/// "num/den" in lowest terms, e.g. "3/4" or "0" for zero.
[[nodiscard]] std::string to_fraction_string(const Rational& r);

/// Fixed six-decimal rendering used by every report, e.g. "0.400000".
/// Rounds half away from zero on the exact value, so the text does not
/// depend on the platform's floating point.
[[nodiscard]] std::string to_fixed6(const Rational& r);
[[nodiscard]] std::string to_fixed6(double v);

}  // namespace akita
