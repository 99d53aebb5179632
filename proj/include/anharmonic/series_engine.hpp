#pragma once

// Riccati-Bloch perturbation theory for the ground state of
// H = -d^2/dv^2 + v^2 + lambda^2 v^4.
//
// With Y = -(log psi)' the Riccati-Bloch equation reads
//   Y' - Y^2 = eps(lambda^2) - v^2 - lambda^2 v^4,
// and expanding eps = sum lambda^{2n} eps_n, Y = sum lambda^{2n} Y_n gives
//   Y_n' - 2 v Y_n = eps_n - delta_{n,1} v^4 + sum_{k=1}^{n-1} Y_k Y_{n-k}.
// Each Y_n is an odd polynomial of degree 2n+1 and eps_n is fixed by the
// requirement that the order-n equation admits a polynomial solution.

#include <anharmonic/rational.hpp>

#include <nlohmann/json_fwd.hpp>

#include <vector>

namespace anharmonic {

/// v * P(v^2): coeffs[k] multiplies v^(2k+1).
struct OddPolynomial {
  std::vector<Rational> coeffs;

  int degree() const { return coeffs.empty() ? -1 : 2 * static_cast<int>(coeffs.size()) - 1; }

  template <class Real>
  Real operator()(const Real& v) const {
    const Real v2 = v * v;
    Real acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * v2 + to_real<Real>(*it);
    return acc * v;
  }

  bool operator==(const OddPolynomial&) const = default;
};

struct PtSeries {
  int order = 0;
  std::vector<Rational> eps;             // eps_0 .. eps_N
  std::vector<OddPolynomial> y_terms;    // Y_0 .. Y_N
};

inline constexpr int kDefaultSeriesOrder = 20;

PtSeries rb_coefficients(int order = kDefaultSeriesOrder);

/// Even polynomial in v (index = power of v) left over when {eps_n, Y_n} are
/// substituted into the order-lambda^{2n} equation. Zero for a valid series.
RationalPoly rb_residual(const PtSeries& series, int n);

template <class Real>
struct RbValue {
  Real eps;
  Real y;
};

/// Truncated sums sum_n lambda^{2n} eps_n and sum_n lambda^{2n} Y_n(v),
/// Horner in lambda^2.
template <class Real>
RbValue<Real> rb_eval(const PtSeries& series, const Real& lambda, const Real& v) {
  const Real l2 = lambda * lambda;
  Real eps = 0;
  Real y = 0;
  for (int n = series.order; n >= 0; --n) {
    eps = eps * l2 + to_real<Real>(series.eps[n]);
    y = y * l2 + series.y_terms[n](v);
  }
  return {eps, y};
}

/// Exact truncated energy sum at a rational coupling.
Rational rb_energy_exact(const PtSeries& series, const Rational& lambda);

/// Odd Taylor coefficients c1, c3, ... (count = `order`) of the solution of
/// Y' - Y^2 = eps - v^2 - lambda^2 v^4 that is regular and odd at v = 0.
template <class T>
std::vector<T> small_v_series(const T& eps, const T& lambda, int order) {
  std::vector<T> c;  // c[k] multiplies v^(2k+1)
  if (order < 1) return c;
  c.push_back(eps);
  for (int m = 1; m < order; ++m) {
    T rhs = 0;
    if (m == 1) rhs = -1;
    if (m == 2) rhs = -lambda * lambda;
    T conv = 0;  // coefficient of v^(2m) in Y^2
    for (int i = 0; i < m; ++i) conv += c[i] * c[m - 1 - i];
    c.push_back((conv + rhs) / T(2 * m + 1));
  }
  return c;
}

void to_json(nlohmann::json& j, const PtSeries& series);
PtSeries series_from_json(const nlohmann::json& j);

}  // namespace anharmonic
