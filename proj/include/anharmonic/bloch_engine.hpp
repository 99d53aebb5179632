#pragma once

// Generalized Bloch hierarchy in the classical coordinate u = g x:
//   lambda^2 Z' - Z^2 = lambda^2 eps(lambda^2) - u^2 - u^4,
//   Z = sum lambda^{2n} Z_n,   2 Z_0 Z_n = Z_{n-1}' - eps_{n-1} - sum_{k=1}^{n-1} Z_k Z_{n-k}.
// Every Z_n lives in Q[u, w]/(w^2 - 1 - u^2) divided by a monomial u^a w^b,
// where w = sqrt(1 + u^2). Products and derivatives stay exact there.

#include <anharmonic/errors.hpp>
#include <anharmonic/rational.hpp>
#include <anharmonic/series_engine.hpp>

#include <nlohmann/json_fwd.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace anharmonic {

/// (p(u) + w q(u)) / (u^a w^b) with w^2 = 1 + u^2.
class BlochTerm {
 public:
  BlochTerm() = default;
  BlochTerm(RationalPoly p, RationalPoly q, int u_pole = 0, int w_pole = 0);

  static BlochTerm constant(const Rational& c);
  static BlochTerm u_power(int k);  // u^k
  static BlochTerm w();             // sqrt(1 + u^2)

  const RationalPoly& p() const { return p_; }
  const RationalPoly& q() const { return q_; }
  int u_pole() const { return u_pole_; }
  int w_pole() const { return w_pole_; }
  bool is_zero() const { return p_.empty() && q_.empty(); }

  BlochTerm operator+(const BlochTerm& o) const;
  BlochTerm operator-(const BlochTerm& o) const;
  BlochTerm operator*(const BlochTerm& o) const;
  BlochTerm operator*(const Rational& s) const;
  BlochTerm derivative() const;
  /// Division by u^i w^j (exact: only the denominator changes).
  BlochTerm divide_by_monomial(int i, int j) const;

  /// Same element written over the larger denominator u^a w^b.
  std::pair<RationalPoly, RationalPoly> numerator_over(int a, int b) const;

  /// Taylor coefficients (index = power of u) of the represented function
  /// about u = 0 up to and including u^max_power. Throws DegenerateInput if
  /// the element has a genuine pole at the origin.
  std::vector<Rational> taylor(int max_power) const;

  /// Lowest power present in the Laurent expansion at u = 0 (may be < 0).
  int order_at_origin() const;

  template <class Real>
  Real eval(const Real& u) const;

  bool operator==(const BlochTerm& o) const;

 private:
  void normalize();

  RationalPoly p_;
  RationalPoly q_;
  int u_pole_ = 0;
  int w_pole_ = 0;
};

template <class Real>
Real eval_poly(const RationalPoly& c, const Real& u) {
  Real acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + to_real<Real>(*it);
  return acc;
}

template <class Real>
Real BlochTerm::eval(const Real& u) const {
  using std::pow;
  using std::sqrt;
  const Real w = sqrt(Real(1) + u * u);
  Real num = eval_poly(p_, u) + w * eval_poly(q_, u);
  Real den = 1;
  for (int i = 0; i < u_pole_; ++i) den *= u;
  for (int i = 0; i < w_pole_; ++i) den *= w;
  return num / den;
}

/// Z_0 .. Z_N. Uses eps_0 .. eps_{N-1} from the Riccati-Bloch series.
std::vector<BlochTerm> gb_terms(int order);
std::vector<BlochTerm> gb_terms(int order, const PtSeries& series);

/// Coefficient of lambda^{2n} in lambda^2 Z' - Z^2 - lambda^2 eps + u^2 + u^4,
/// assembled from the full Cauchy product. Zero for a valid hierarchy.
BlochTerm gb_residual(const std::vector<BlochTerm>& terms, const PtSeries& series, int n);

inline constexpr double kOriginSeriesThreshold = 1e-4;

/// sum_n lambda^{2n} Z_n(u). For |u| below 1e-4 the closed forms are 0/0 and
/// each term is replaced by its Taylor polynomial through four nonzero orders.
template <class Real>
Real gb_eval(const std::vector<BlochTerm>& terms, const Real& lambda, const Real& u) {
  using std::abs;
  const Real l2 = lambda * lambda;
  Real acc = 0;
  const bool near_origin = abs(u) < Real(kOriginSeriesThreshold);
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    Real value;
    if (near_origin) {
      const auto coeffs = it->taylor(it->order_at_origin() + 7);
      value = eval_poly(coeffs, u);
    } else {
      value = it->eval(u);
    }
    acc = acc * l2 + value;
  }
  return acc;
}

/// F with F' = term, found by exact linear algebra over an ansatz with the
/// matching monomial denominator. Absent when the integral needs logarithms
/// (or falls outside the ansatz).
std::optional<BlochTerm> ring_antiderivative(const BlochTerm& term, int extra_degree = 4);

/// First three terms of the semiclassical phase,
///   (1+g^2x^2)^{3/2}/(3g^2) + log(1+g^2x^2)/4 + (2n+p+1/2) log(1+sqrt(1+g^2x^2)).
double phase_leading(double x, double g, int n, int p);

/// g x^2|x|/3 + |x|/(2g) + (n + p/2 + 1/2) log(x^2).
double large_x_asymptote(double x, double g, int n, int p);

/// Phase with the closed-form leading part plus higher semiclassical
/// corrections g^{2k-2} (F_k(gx) - F_k(0)) from ring antiderivatives F_k.
struct PhaseExpansion {
  int n = 0;
  int p = 0;
  double g = 1.0;
  std::vector<BlochTerm> higher;  // F_2, F_3, ...

  static PhaseExpansion build(int n, int p, double g, int max_order);
  double operator()(double x) const;
};

void to_json(nlohmann::json& j, const BlochTerm& term);
BlochTerm bloch_term_from_json(const nlohmann::json& j);

}  // namespace anharmonic
