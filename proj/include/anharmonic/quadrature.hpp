#pragma once

// Quadrature on the half line for even integrands.
//
// Energies: exp-sinh map x = c exp(pi/2 sinh t) truncated at the point where
// Psi^2 has dropped by e^{-100}, trapezoidal in t. Cumulative integrals for
// the nonlinearization: composite Gauss-Legendre panels with a spectral
// integration matrix, panels split at the wavefunction nodes.

#include <anharmonic/defaults.hpp>
#include <anharmonic/errors.hpp>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace anharmonic {

struct QuadratureSpec {
  int points = defaults::kQuadraturePoints;
  double rel_tol = defaults::kQuadratureRelTol;
  double mapping_scale = 0.0;  // 0: set from B and g^2
  double cutoff = 0.0;         // 0: set from the decay of Psi^2

  void validate() const {
    if (points < 63) throw ValidationError("quadrature needs at least 63 points");
    if (!(rel_tol > 1e-16 && rel_tol < 1e-6)) throw ValidationError("quadrature rel_tol must lie in (1e-16, 1e-6)");
  }
};

template <class Real>
struct Grid {
  std::vector<Real> x;
  std::vector<Real> w;
};

/// Trapezoidal rule in t for x = c exp(pi/2 sinh t) on (0, x_max].
template <class Real>
Grid<Real> exp_sinh_grid(const Real& c, const Real& x_max, int points) {
  using std::asinh;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sinh;
  const Real half_pi = boost::math::constants::half_pi<Real>();
  // Lower end: x = c * 1e-30 contributes nothing to a bounded integrand.
  const Real t_lo = asinh(log(Real(1e-30)) / half_pi);
  const Real t_hi = asinh(log(x_max / c) / half_pi);
  const Real h = (t_hi - t_lo) / Real(points - 1);
  Grid<Real> g;
  g.x.reserve(points);
  g.w.reserve(points);
  for (int i = 0; i < points; ++i) {
    const Real t = t_lo + h * Real(i);
    const Real x = c * exp(half_pi * sinh(t));
    Real w = h * x * half_pi * cosh(t);
    if (i == 0 || i == points - 1) w /= Real(2);
    g.x.push_back(x);
    g.w.push_back(w);
  }
  return g;
}

/// Gauss-Legendre panel set with spectral cumulative integration.
template <class Real>
class PanelGrid {
 public:
  static constexpr int kOrder = defaults::kPanelOrder;

  /// Breakpoints must be increasing; each interval is split into panels no
  /// wider than `max_width`. Around every interior breakpoint listed in
  /// `centres` the two adjacent panels have equal width.
  PanelGrid(std::vector<Real> breaks, const std::vector<Real>& centres, const Real& max_width) {
    using std::ceil;
    using std::min;
    init_reference();
    // Symmetric collars around centres.
    std::vector<Real> b;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
      const Real& x = breaks[i];
      const bool centre = std::find(centres.begin(), centres.end(), x) != centres.end();
      if (centre && i > 0 && i + 1 < breaks.size()) {
        const Real room = min(x - breaks[i - 1], breaks[i + 1] - x) / Real(3);
        const Real d = min(room, max_width);
        b.push_back(x - d);
        b.push_back(x);
        b.push_back(x + d);
      } else {
        b.push_back(x);
      }
    }
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      const Real len = b[i + 1] - b[i];
      const int m = std::max(1, static_cast<int>(ceil(static_cast<double>(len / max_width))));
      for (int k = 0; k < m; ++k) {
        const Real lo = b[i] + len * Real(k) / Real(m);
        const Real hi = b[i] + len * Real(k + 1) / Real(m);
        lo_.push_back(lo);
        hi_.push_back(hi);
      }
    }
    for (std::size_t p = 0; p < lo_.size(); ++p) {
      const Real half = (hi_[p] - lo_[p]) / Real(2);
      const Real mid = (hi_[p] + lo_[p]) / Real(2);
      for (int j = 0; j < kOrder; ++j) {
        x_.push_back(mid + half * tau_[j]);
        w_.push_back(half * wref_[j]);
      }
    }
  }

  const std::vector<Real>& x() const { return x_; }
  const std::vector<Real>& w() const { return w_; }
  std::size_t size() const { return x_.size(); }
  std::size_t panels() const { return lo_.size(); }

  Real integrate(const std::vector<Real>& f) const {
    Real s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w_[i] * f[i];
    return s;
  }

  /// F(x_i) = int_{x_i}^{end} f, plus `tail` beyond the last breakpoint.
  std::vector<Real> cumulative_from_right(const std::vector<Real>& f, const Real& tail) const {
    std::vector<Real> out(f.size());
    Real acc = tail;
    for (std::size_t p = lo_.size(); p-- > 0;) {
      const Real half = (hi_[p] - lo_[p]) / Real(2);
      const std::size_t off = p * kOrder;
      for (int j = 0; j < kOrder; ++j) {
        Real s = 0;
        for (int k = 0; k < kOrder; ++k) s += S_[j][k] * f[off + k];
        out[off + j] = acc + half * s;
      }
      Real full = 0;
      for (int k = 0; k < kOrder; ++k) full += wref_[k] * f[off + k];
      acc += half * full;
    }
    return out;
  }

  /// Integral over the panels left of `x`; `x` is expected to be a breakpoint.
  Real integral_left_of(const std::vector<Real>& f, const Real& x) const {
    Real acc = 0;
    for (std::size_t p = 0; p < lo_.size(); ++p) {
      if ((lo_[p] + hi_[p]) / Real(2) >= x) break;
      const Real half = (hi_[p] - lo_[p]) / Real(2);
      Real full = 0;
      for (int k = 0; k < kOrder; ++k) full += wref_[k] * f[p * kOrder + k];
      acc += half * full;
    }
    return acc;
  }

  /// G(x_i) = int_{start}^{x_i} f.
  std::vector<Real> cumulative_from_left(const std::vector<Real>& f) const {
    std::vector<Real> out(f.size());
    Real acc = 0;
    for (std::size_t p = 0; p < lo_.size(); ++p) {
      const Real half = (hi_[p] - lo_[p]) / Real(2);
      const std::size_t off = p * kOrder;
      Real full = 0;
      for (int k = 0; k < kOrder; ++k) full += wref_[k] * f[off + k];
      for (int j = 0; j < kOrder; ++j) {
        Real s = 0;
        for (int k = 0; k < kOrder; ++k) s += (wref_[k] - S_[j][k]) * f[off + k];
        out[off + j] = acc + half * s;
      }
      acc += half * full;
    }
    return out;
  }

 private:
  void init_reference() {
    using Rule = boost::math::quadrature::gauss<Real, kOrder>;
    const auto& a = Rule::abscissa();
    const auto& wt = Rule::weights();
    for (std::size_t i = a.size(); i-- > 0;) {
      tau_.push_back(-a[i]);
      wref_.push_back(wt[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      tau_.push_back(a[i]);
      wref_.push_back(wt[i]);
    }
    // S_jk = int_{tau_j}^{1} l_k, with l_k = w_k sum_n (2n+1)/2 P_n(tau_k) P_n
    // and int_tau^1 P_n = (P_{n-1}(tau) - P_{n+1}(tau)) / (2n+1).
    auto legendre = [](const Real& t, int nmax) {
      std::vector<Real> P(nmax + 1);
      P[0] = 1;
      if (nmax >= 1) P[1] = t;
      for (int n = 1; n < nmax; ++n) P[n + 1] = (Real(2 * n + 1) * t * P[n] - Real(n) * P[n - 1]) / Real(n + 1);
      return P;
    };
    S_.assign(kOrder, std::vector<Real>(kOrder));
    for (int j = 0; j < kOrder; ++j) {
      const auto Pj = legendre(tau_[j], kOrder);
      for (int k = 0; k < kOrder; ++k) {
        const auto Pk = legendre(tau_[k], kOrder);
        Real s = (Real(1) - tau_[j]) / Real(2);
        for (int n = 1; n < kOrder; ++n) s += Pk[n] * (Pj[n - 1] - Pj[n + 1]) / Real(2);
        S_[j][k] = wref_[k] * s;
      }
    }
  }

  std::vector<Real> tau_, wref_;
  std::vector<std::vector<Real>> S_;
  std::vector<Real> lo_, hi_;
  std::vector<Real> x_, w_;
};

}  // namespace anharmonic
