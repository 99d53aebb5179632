#pragma once

#include <cmath>

namespace anharmonic {

/// Second-order forward-mode jet: value with first and second derivative.
template <class T>
struct Jet {
  T v{0};
  T d1{0};
  T d2{0};

  Jet() = default;
  Jet(const T& value) : v(value) {}
  Jet(const T& value, const T& first, const T& second) : v(value), d1(first), d2(second) {}

  static Jet variable(const T& x) { return Jet(x, T(1), T(0)); }

  friend Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  friend Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
  friend Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2}; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    const T inv = T(1) / b.v;
    const T q = a.v * inv;
    const T q1 = (a.d1 - q * b.d1) * inv;
    const T q2 = (a.d2 - T(2) * q1 * b.d1 - q * b.d2) * inv;
    return {q, q1, q2};
  }
  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
};

template <class T>
Jet<T> log(const Jet<T>& a) {
  using std::abs;
  using std::log;
  const T inv = T(1) / a.v;
  return {log(abs(a.v)), a.d1 * inv, (a.d2 - a.d1 * a.d1 * inv) * inv};
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  const T s1 = a.d1 / (T(2) * s);
  return {s, s1, (a.d2 - T(2) * s1 * s1) / (T(2) * s)};
}

}  // namespace anharmonic
