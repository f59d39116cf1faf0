#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "opchain/error.hpp"

namespace opchain {

// Exact rational scalar. Always kept in canonical form by the backend:
// reduced fraction, positive denominator, integers represented with
// denominator one.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Canonical text form: "p/q", or "p" when the denominator is one.
inline std::string rat_to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

// Accepts "p" and "p/q" with optional leading '-' on p; q must be positive.
Rational rat_parse(std::string_view text);

}  // namespace opchain
