#include "ewls/rational.hpp"

#include <cmath>

#include "ewls/errors.hpp"

namespace ewls {

Rational from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value cannot be made rational");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

double to_double(const Rational& q) {
  // mpq_get_d truncates toward zero; round to nearest instead.
  const double d = q.get_d();
  if (!std::isfinite(d) || d == 0.0) return d;
  const double up = std::nextafter(d, d > 0 ? HUGE_VAL : -HUGE_VAL);
  const Rational mid = (from_double(d) + from_double(up)) / 2;
  if (d > 0) return cmp(q, mid) >= 0 ? up : d;
  return cmp(q, mid) <= 0 ? up : d;
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational q(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  q.canonicalize();
  return q;
}

Rational rational_lcm(const Rational& a, const Rational& b) {
  BigInt num, den;
  mpz_lcm(num.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  mpz_gcd(den.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational floor_div(const Rational& a, const Rational& b) {
  const Rational r = a / b;
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(f);
}

Rational fmod_pos(const Rational& a, const Rational& b) { return a - b * floor_div(a, b); }

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace ewls
