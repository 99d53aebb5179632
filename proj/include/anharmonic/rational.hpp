#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace anharmonic {

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) { return r.str(); }

Rational parse_rational(const std::string& text);

template <class Real>
Real to_real(const Rational& r) {
  return static_cast<Real>(boost::multiprecision::numerator(r)) /
         static_cast<Real>(boost::multiprecision::denominator(r));
}

/// Dense polynomial with exact coefficients, index = power.
using RationalPoly = std::vector<Rational>;

void trim(RationalPoly& poly);
RationalPoly poly_add(const RationalPoly& a, const RationalPoly& b);
RationalPoly poly_sub(const RationalPoly& a, const RationalPoly& b);
RationalPoly poly_mul(const RationalPoly& a, const RationalPoly& b);
RationalPoly poly_scale(const RationalPoly& a, const Rational& s);
RationalPoly poly_shift(const RationalPoly& a, int k);  // multiply by t^k
RationalPoly poly_derivative(const RationalPoly& a);
bool poly_is_zero(const RationalPoly& a);

}  // namespace anharmonic
