#include <anharmonic/errors.hpp>
#include <anharmonic/rational.hpp>

#include <algorithm>

namespace anharmonic {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in rational '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw ValidationError("cannot parse rational '" + text + "'");
  }
}

void trim(RationalPoly& poly) {
  while (!poly.empty() && poly.back() == 0) poly.pop_back();
}

RationalPoly poly_add(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

RationalPoly poly_sub(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

RationalPoly poly_mul(const RationalPoly& a, const RationalPoly& b) {
  if (a.empty() || b.empty()) return {};
  RationalPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

RationalPoly poly_scale(const RationalPoly& a, const Rational& s) {
  RationalPoly r(a);
  for (auto& c : r) c *= s;
  trim(r);
  return r;
}

RationalPoly poly_shift(const RationalPoly& a, int k) {
  if (a.empty()) return {};
  RationalPoly r(a.size() + static_cast<std::size_t>(k));
  std::copy(a.begin(), a.end(), r.begin() + k);
  return r;
}

RationalPoly poly_derivative(const RationalPoly& a) {
  if (a.size() <= 1) return {};
  RationalPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<int>(i);
  trim(r);
  return r;
}

bool poly_is_zero(const RationalPoly& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& c) { return c == 0; });
}

}  // namespace anharmonic
