#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace wsinv {

// Exact arbitrary-precision arithmetic. Rat is always stored reduced with a
// positive denominator; both guarantees come from cpp_rational itself.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

Int parse_int(const std::string& text);

// Accepts "num" or "num/den" with an optional leading sign. Throws
// std::invalid_argument on malformed input or a zero denominator.
Rat parse_rational(const std::string& text);

// Inverse of parse_rational: "num" when the denominator is 1, else "num/den".
std::string rational_to_string(const Rat& q);

Int numerator(const Rat& q);
Int denominator(const Rat& q);

bool is_prime(const Int& n);

// p-adic valuation; std::nullopt encodes v(0) = +infinity.
// Throws std::invalid_argument unless p is prime.
std::optional<long> p_valuation(const Int& n, const Int& p);
std::optional<long> p_valuation(const Rat& q, const Int& p);

}  // namespace wsinv
