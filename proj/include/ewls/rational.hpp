#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace ewls {

using Rational = mpq_class;
using BigInt = mpz_class;

// Exact: every finite double is a dyadic rational.
Rational from_double(double x);
double to_double(const Rational& q);

Rational make_rational(std::int64_t num, std::int64_t den);

// lcm over rationals in lowest terms: lcm(numerators) / gcd(denominators).
Rational rational_lcm(const Rational& a, const Rational& b);

Rational floor_div(const Rational& a, const Rational& b);  // floor(a/b) as integer-valued rational
Rational fmod_pos(const Rational& a, const Rational& b);    // a - b*floor(a/b), in [0, b)

std::string to_string(const Rational& q);

}  // namespace ewls
