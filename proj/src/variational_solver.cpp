#include <anharmonic/variational_solver.hpp>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

namespace anharmonic {

namespace {

template <class Real>
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Psi = Q(x) Phi(x) with Q = x^p P(x^2) and Phi = exp(log_envelope - Lref).
template <class Real>
struct Trial {
  const ApproximantParams& prm;
  std::vector<Real> c;  // P(t) = sum_j c_j t^j
  Real Lref;

  explicit Trial(const ApproximantParams& p) : prm(p) {
    c.push_back(Real(1));
    for (std::size_t j = 0; j < p.nodes.size(); ++j) c.push_back((j % 2 == 0 ? Real(-1) : Real(1)) * Real(p.nodes[j]));
    Lref = log_envelope<Real>(p, Real(0)).v;
  }
};

template <class Real>
struct Point {
  Real x, q, q1, q2, P, Pt, phi, l1, l2;
  Real psi() const { return q * phi; }
  Real d1() const { return phi * (q1 + q * l1); }
  Real d2() const { return phi * (q2 + Real(2) * q1 * l1 + q * (l2 + l1 * l1)); }
};

// P(t), P'(t), P''(t)/2 by Horner.
template <class Real>
void poly3(const std::vector<Real>& c, const Real& t, Real& P, Real& P1, Real& P2h) {
  P = 0;
  P1 = 0;
  P2h = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    P2h = P2h * t + P1;
    P1 = P1 * t + P;
    P = P * t + *it;
  }
}

template <class Real>
Point<Real> eval(const Trial<Real>& tr, const Real& x) {
  using std::exp;
  const auto L = log_envelope<Real>(tr.prm, x);
  const Real t = x * x;
  Real P, P1, P2h;
  poly3(tr.c, t, P, P1, P2h);
  Point<Real> pt;
  pt.x = x;
  pt.P = P;
  pt.Pt = P1;
  if (tr.prm.p == 0) {
    pt.q = P;
    pt.q1 = Real(2) * x * P1;
    pt.q2 = Real(2) * P1 + Real(8) * t * P2h;
  } else {
    pt.q = x * P;
    pt.q1 = P + Real(2) * t * P1;
    pt.q2 = Real(6) * x * P1 + Real(8) * x * t * P2h;
  }
  pt.phi = exp(L.v - tr.Lref);
  pt.l1 = L.d1;
  pt.l2 = L.d2;
  return pt;
}

template <class Real>
Real potential(const ApproximantParams& prm, const Real& x) {
  const Real t = x * x;
  return t + Real(prm.g2) * t * t;
}

double mapping_scale(const ApproximantParams& prm, const QuadratureSpec& quad) {
  if (quad.mapping_scale > 0) return quad.mapping_scale;
  return std::min(1.0, 1.0 / std::sqrt(prm.B));
}

// First x beyond the maximum of |Psi| where log|Psi| has dropped by
// kTailLogDrop, using sum_j |c_j| t^j as a bound for |P|.
template <class Real>
Real find_cutoff(const Trial<Real>& tr) {
  using std::abs;
  using std::log;
  Real best = -std::numeric_limits<Real>::infinity();
  Real x = Real(0.01);
  for (int i = 0; i < 4000; ++i, x *= Real(1.02)) {
    const Real t = x * x;
    Real bound = 0;
    for (auto it = tr.c.rbegin(); it != tr.c.rend(); ++it) bound = bound * t + abs(*it);
    Real h = log_envelope<Real>(tr.prm, x).v - tr.Lref + log(bound);
    if (tr.prm.p == 1) h += log(x);
    if (h > best) best = h;
    if (h < best - Real(defaults::kTailLogDrop)) return x;
  }
  throw QuadratureNotConverged("wavefunction does not decay; cannot place the quadrature cutoff");
}

template <class Real>
Real cutoff_for(const Trial<Real>& tr, const QuadratureSpec& quad) {
  return quad.cutoff > 0 ? Real(quad.cutoff) : find_cutoff(tr);
}

template <class Real>
struct Sums {
  Real norm = 0, rayleigh = 0, effective = 0;
};

template <class Real>
Sums<Real> energy_sums(const Trial<Real>& tr, const Grid<Real>& g) {
  Sums<Real> s;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const auto pt = eval(tr, g.x[i]);
    const Real psi = pt.psi(), d1 = pt.d1(), d2 = pt.d2();
    const Real V = potential(tr.prm, g.x[i]);
    s.norm += g.w[i] * psi * psi;
    s.rayleigh += g.w[i] * (d1 * d1 + V * psi * psi);
    s.effective += g.w[i] * (V * psi * psi - psi * d2);
  }
  return s;
}

template <class Real>
Real energy_value(const ApproximantParams& prm, const QuadratureSpec& quad) {
  Trial<Real> tr(prm);
  const auto g = exp_sinh_grid<Real>(Real(mapping_scale(prm, quad)), cutoff_for(tr, quad), quad.points);
  const auto s = energy_sums(tr, g);
  return s.rayleigh / s.norm;
}

template <class Real>
EnergyReport energy_report(const ApproximantParams& prm, const QuadratureSpec& quad) {
  using std::abs;
  Trial<Real> tr(prm);
  const Real c(mapping_scale(prm, quad));
  const Real X = cutoff_for(tr, quad);
  const auto coarse = energy_sums(tr, exp_sinh_grid<Real>(c, X, quad.points));
  const auto fine = energy_sums(tr, exp_sinh_grid<Real>(c, X, 2 * quad.points - 1));
  const Real e = fine.rayleigh / fine.norm;
  const Real e20 = fine.effective / fine.norm;
  EnergyReport r;
  r.E = static_cast<double>(e);
  r.E_effective = static_cast<double>(e20);
  r.E0 = static_cast<double>(effective_potential<Real>(prm, Real(0)).e0);
  r.doubling_delta = static_cast<double>(abs(e - coarse.rayleigh / coarse.norm));
  r.cutoff = static_cast<double>(X);
  r.mapping_scale = static_cast<double>(c);
  r.points = 2 * quad.points - 1;
  const double tol = quad.rel_tol * std::abs(r.E);
  if (!(r.doubling_delta <= tol))
    throw QuadratureNotConverged("energy changed by " + std::to_string(r.doubling_delta) + " on doubling the points");
  if (!(std::abs(r.E - r.E_effective) <= tol))
    throw QuadratureNotConverged("Rayleigh and effective-potential energies disagree by " +
                                 std::to_string(std::abs(r.E - r.E_effective)));
  return r;
}

template <class Real>
OrthoResult ortho_impl(const ApproximantParams& target, const std::vector<ApproximantParams>& lower,
                       const QuadratureSpec& quad, bool residuals) {
  using std::abs;
  using std::sqrt;
  const int n = target.n;
  OrthoResult out;
  if (n == 0) return out;
  if (static_cast<int>(lower.size()) != n) throw ValidationError("orthogonalize needs exactly n lower states");
  for (int k = 0; k < n; ++k)
    if (lower[k].p != target.p || lower[k].n != k)
      throw ValidationError("lower states must be (0,p) .. (n-1,p) of the target parity");

  ApproximantParams shape = target;
  shape.nodes.clear();
  for (const auto& a : harmonic_node_coeffs(n, target.p)) shape.nodes.push_back(to_real<double>(a));
  std::vector<Trial<Real>> lo;
  lo.reserve(n);
  Real X = find_cutoff(Trial<Real>(shape));
  double c = mapping_scale(target, quad);
  for (const auto& l : lower) {
    lo.emplace_back(l);
    X = std::max(X, find_cutoff(lo.back()));
    c = std::min(c, mapping_scale(l, quad));
  }
  if (quad.cutoff > 0) X = Real(quad.cutoff);
  Trial<Real> tr(shape);

  auto overlaps = [&](const Grid<Real>& g) {
    Mat<Real> M = Mat<Real>::Zero(n, n + 1);
    Vec<Real> norms = Vec<Real>::Zero(n);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const Real x = g.x[i];
      const auto base = eval(tr, x);
      const Real xp = target.p == 1 ? x : Real(1);
      const Real t = x * x;
      for (int k = 0; k < n; ++k) {
        const Real pk = eval(lo[k], x).psi();
        norms[k] += g.w[i] * pk * pk;
        Real tj = g.w[i] * pk * xp * base.phi;
        for (int j = 0; j <= n; ++j, tj *= t) M(k, j) += tj;
      }
    }
    return std::pair{M, norms};
  };

  const auto grid = exp_sinh_grid<Real>(Real(c), X, quad.points);
  const auto [M, norms] = overlaps(grid);
  Mat<Real> Am = M.rightCols(n);
  Vec<Real> b = -M.col(0);
  Vec<Real> rs(n), cs(n);
  for (int k = 0; k < n; ++k) {
    rs[k] = Real(1) / Am.row(k).cwiseAbs().maxCoeff();
    Am.row(k) *= rs[k];
    b[k] *= rs[k];
  }
  for (int j = 0; j < n; ++j) {
    cs[j] = Real(1) / Am.col(j).cwiseAbs().maxCoeff();
    Am.col(j) *= cs[j];
  }
  Eigen::JacobiSVD<Mat<Real>> svd(Am, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Real cond = sv[0] / sv[n - 1];
  out.condition = static_cast<double>(cond);
  if (!(out.condition <= defaults::kMaxGramCondition))
    throw SingularConstraint("orthogonality system is ill-conditioned (condition " + std::to_string(out.condition) + ")");
  const Vec<Real> z = svd.solve(b);
  std::vector<Real> coeff(n + 1);
  coeff[0] = 1;
  for (int j = 0; j < n; ++j) {
    coeff[j + 1] = z[j] * cs[j];
    out.nodes.push_back(static_cast<double>((j % 2 == 0 ? Real(-1) : Real(1)) * coeff[j + 1]));
  }
  if (!residuals) return out;

  // Residual overlaps on the doubled grid with the coefficients as stored.
  ApproximantParams solved = target;
  solved.nodes = out.nodes;
  Trial<Real> ts(solved);
  const auto fine = exp_sinh_grid<Real>(Real(c), X, 2 * quad.points - 1);
  Vec<Real> ov = Vec<Real>::Zero(n), nk = Vec<Real>::Zero(n);
  Real nt = 0;
  for (std::size_t i = 0; i < fine.x.size(); ++i) {
    const Real pt = eval(ts, fine.x[i]).psi();
    nt += fine.w[i] * pt * pt;
    for (int k = 0; k < n; ++k) {
      const Real pk = eval(lo[k], fine.x[i]).psi();
      ov[k] += fine.w[i] * pk * pt;
      nk[k] += fine.w[i] * pk * pk;
    }
  }
  for (int k = 0; k < n; ++k) out.residuals.push_back(static_cast<double>(ov[k] / sqrt(nk[k] * nt)));
  return out;
}

// Roots of P(x^2), refined by Newton in Real.
template <class Real>
std::vector<Real> polished_nodes(const Trial<Real>& tr) {
  using std::abs;
  using std::sqrt;
  std::vector<Real> out;
  for (double r : positive_nodes(tr.prm)) {
    Real t = Real(r) * Real(r);
    for (int it = 0; it < 50; ++it) {
      Real P, P1, P2h;
      poly3(tr.c, t, P, P1, P2h);
      const Real dt = P / P1;
      t -= dt;
      if (abs(dt) <= Real(4) * std::numeric_limits<Real>::epsilon() * t) break;
    }
    out.push_back(sqrt(t));
  }
  return out;
}

template <class Real>
NonlinearResult nonlinear_impl(const ApproximantParams& prm, const QuadratureSpec& quad) {
  using std::abs;
  const int n = prm.n;
  Trial<Real> tr(prm);
  const auto nodes = polished_nodes(tr);
  if (static_cast<int>(nodes.size()) != n)
    throw NodeRegularityViolated("node polynomial has " + std::to_string(nodes.size()) + " positive roots, expected " +
                                 std::to_string(n));
  const Real X = cutoff_for(tr, quad);
  const Real c(mapping_scale(prm, quad));
  std::vector<Real> breaks{Real(0)};
  for (const auto& r : nodes) breaks.push_back(r);
  breaks.push_back(X);
  const PanelGrid<Real> pg(breaks, nodes, c / Real(4));
  const auto& xs = pg.x();
  const std::size_t m = xs.size();

  std::vector<Point<Real>> pts;
  pts.reserve(m);
  std::vector<Real> psi(m), d2(m), V(m);
  for (std::size_t i = 0; i < m; ++i) {
    pts.push_back(eval(tr, xs[i]));
    psi[i] = pts[i].psi();
    d2[i] = pts[i].d2();
    V[i] = potential(prm, xs[i]);
  }
  std::vector<Real> tmp(m);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = psi[i] * psi[i];
  const Real norm = pg.integrate(tmp);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = V[i] * psi[i] * psi[i] - psi[i] * d2[i];
  const Real E1 = pg.integrate(tmp) / norm;

  std::vector<Real> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = (V[i] - E1) * psi[i] * psi[i] - psi[i] * d2[i];

  // Tail beyond X: the integrand decays like Psi^2, i.e. like exp(-2 int y0).
  const auto endpt = eval(tr, X);
  const Real y0 = -(endpt.l1 + endpt.q1 / endpt.q);
  auto tail_of = [&](const Real& integrand_at_X) { return integrand_at_X / (Real(2) * y0); };
  const Real psiX = endpt.psi();
  const Real fX = (potential(prm, X) - E1) * psiX * psiX - psiX * endpt.d2();

  std::size_t split = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (psi[i] * psi[i] > psi[split] * psi[split]) split = i;
  const Real x_split = xs[split];

  // F(x) = int_x^inf f; left of the maximum of Psi^2 use -int_0^x f.
  auto anchored = [&](const std::vector<Real>& g, const Real& tail) {
    const auto right = pg.cumulative_from_right(g, tail);
    const auto left = pg.cumulative_from_left(g);
    std::vector<Real> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = xs[i] < x_split ? -left[i] : right[i];
    return out;
  };
  const auto F = anchored(f, tail_of(fX));
  const Real f_total = pg.integrate(f) + tail_of(fX);

  NonlinearResult res;
  res.E1 = static_cast<double>(E1);

  // Double poles of y1 at the nodes: y1 ~ beta / d^2 + gamma / d.
  std::vector<Real> beta(n), rhs(n);
  for (int k = 0; k < n; ++k) {
    const Real xk = nodes[k];
    const Real left = pg.integral_left_of(f, xk);
    const Real Fk = xk < x_split ? -left : f_total - left;
    const auto pk = eval(tr, xk);
    const Real dpsi = pk.phi * pk.q1;
    const Real ddpsi = pk.phi * (pk.q2 + Real(2) * pk.q1 * pk.l1);
    beta[k] = Fk / (dpsi * dpsi);
    const Real a0 = -ddpsi / (Real(2) * dpsi);
    const Real gamma = Real(2) * a0 * beta[k];
    res.node_shift.push_back(static_cast<double>(beta[k]));
    res.node_residue.push_back(static_cast<double>(gamma));
    rhs[k] = Real(2) * xk * pk.Pt * beta[k];
    if (abs(gamma) > Real(defaults::kNodeResidueTol))
    {
      char buf[160];
      std::snprintf(buf, sizeof buf, "y1 keeps a simple pole of residue %.3e at node %.6f (tolerance %.0e)",
                    static_cast<double>(gamma), static_cast<double>(xk), defaults::kNodeResidueTol);
      throw NodeRegularityViolated(buf);
    }
  }
  // Node-shift polynomial dP(t) = sum_{j=1..n} d_j t^j with
  // dP(x_k^2) = 2 x_k P'(x_k^2) beta_k, so (dP/P)' cancels beta_k / d^2.
  std::vector<Real> dcoef(n + 1, Real(0));
  if (n > 0) {
    Mat<Real> Vd(n, n);
    Vec<Real> b(n);
    for (int k = 0; k < n; ++k) {
      const Real t = nodes[k] * nodes[k];
      Real tj = t;
      for (int j = 0; j < n; ++j, tj *= t) Vd(k, j) = tj;
      b[k] = rhs[k];
    }
    const Vec<Real> d = Vd.fullPivLu().solve(b);
    for (int j = 0; j < n; ++j) dcoef[j + 1] = d[j];
  }

  std::vector<Real> y1(m), yhat(m), dP(m), dPt(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Real t = xs[i] * xs[i];
    Real a, a1, a2h;
    poly3(dcoef, t, a, a1, a2h);
    dP[i] = a;
    dPt[i] = a1;
    y1[i] = F[i] / (psi[i] * psi[i]);
    const Real P = pts[i].P, Pt = pts[i].Pt;
    yhat[i] = y1[i] + Real(2) * xs[i] * (a1 * P - a * Pt) / (P * P);
  }
  const auto phi1 = pg.cumulative_from_left(yhat);
  Real sup = 0, sup_allowed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sup = std::max(sup, abs(phi1[i]));
    if (V[i] <= E1) sup_allowed = std::max(sup_allowed, abs(phi1[i]));
  }
  res.phi1_sup = static_cast<double>(sup);
  res.phi1_sup_allowed = static_cast<double>(sup_allowed);

  // Rayleigh-Schroedinger form: Psi1 = -Psi phi1 + x^p dP Phi.
  std::vector<Real> g1(m), g2(m), g3(m), psi1(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Real xp = prm.p == 1 ? xs[i] : Real(1);
    const Real shift = xp * dP[i] * pts[i].phi;
    psi1[i] = -psi[i] * phi1[i] + shift;
    // f * (phi1 - dP/P) without dividing by P.
    g1[i] = f[i] * phi1[i] - shift * ((V[i] - E1) * psi[i] - d2[i]);
    g2[i] = psi1[i] * psi1[i] * (V[i] - E1 - d2[i] / psi[i]);
    g3[i] = psi[i] * psi1[i];
  }
  const Real E2 = -pg.integrate(g1) / norm;
  const Real E3 = (pg.integrate(g2) - Real(2) * E2 * pg.integrate(g3)) / norm;
  res.E2 = static_cast<double>(E2);
  res.E3 = static_cast<double>(E3);

  if (n == 0) {
    for (std::size_t i = 0; i < m; ++i) tmp[i] = F[i] * y1[i];
    const Real E2r = -pg.integrate(tmp) / norm;
    std::vector<Real> h(m);
    for (std::size_t i = 0; i < m; ++i) h[i] = E2r * psi[i] * psi[i] + F[i] * y1[i];
    const Real FX = tail_of(fX);
    const Real hX = E2r * psiX * psiX + FX * FX / (psiX * psiX);
    const auto right = pg.cumulative_from_right(h, tail_of(hX));
    const auto left = pg.cumulative_from_left(h);
    for (std::size_t i = 0; i < m; ++i) {
      const Real y2 = (xs[i] < x_split ? left[i] : -right[i]) / (psi[i] * psi[i]);
      tmp[i] = F[i] * y2;
    }
    const Real E3r = Real(-2) * pg.integrate(tmp) / norm;
    res.E2_riccati = static_cast<double>(E2r);
    res.E3_riccati = static_cast<double>(E3r);
  } else {
    res.E2_riccati = std::numeric_limits<double>::quiet_NaN();
    res.E3_riccati = std::numeric_limits<double>::quiet_NaN();
  }

  res.x.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    res.x.push_back(static_cast<double>(xs[i]));
    res.y1.push_back(static_cast<double>(yhat[i]));
    res.phi1.push_back(static_cast<double>(phi1[i]));
  }
  return res;
}

void check_state(int n, int p, double g2) {
  if (n < 0) throw ValidationError("n must be >= 0");
  if (p != 0 && p != 1) throw ValidationError("p must be 0 or 1");
  if (!(g2 > 0) || !std::isfinite(g2)) throw ValidationError("g2 must be finite and > 0");
}

template <class Real>
VariationalResult optimize_impl(int n, int p, double g2, const std::vector<ApproximantParams>& lower,
                                const SolverOptions& opt) {
  check_state(n, p, g2);
  opt.quad.validate();
  if (static_cast<int>(lower.size()) != n) throw ValidationError("optimize needs the n lower states of the same parity");
  ApproximantParams base;
  base.n = n;
  base.p = p;
  base.g2 = g2;
  base.nodes.assign(n, 0.0);

  auto with_ab = [&](double A, double B) {
    ApproximantParams q = base;
    q.A = A;
    q.B = B;
    if (n > 0) q.nodes = ortho_impl<Real>(q, lower, opt.quad, false).nodes;
    return q;
  };
  auto objective = [&](const std::array<double, 2>& ab) {
    if (!(ab[1] > 0) || !std::isfinite(ab[0]) || !std::isfinite(ab[1])) return std::numeric_limits<double>::infinity();
    try {
      const double e = static_cast<double>(energy_value<Real>(with_ab(ab[0], ab[1]), opt.quad));
      return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    } catch (const SingularConstraint&) {
      return std::numeric_limits<double>::infinity();
    } catch (const QuadratureNotConverged&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const auto [A0, B0] = ab_interpolation(g2, n, p);
  const std::array<double, 2> step{std::abs(A0) * 0.05 + 1e-3, std::abs(B0) * 0.05 + 1e-3};
  std::array<double, 2> start{A0, B0};
  int survey_evals = 0;
  if (n > 0) {
    // Excited states can have a second, shallower valley next to the
    // interpolated guess (n = 2 near g^2 ~ 0.5). Descend roughly from a few
    // starts spread along A and continue from the lowest.
    SimplexOptions coarse = opt.simplex;
    coarse.spread_tol = defaults::kSurveySpread;
    double lowest = std::numeric_limits<double>::infinity();
    const double d = 1.0 + 0.5 * std::abs(A0);
    for (int k = -defaults::kSurveyHalfWidth; k <= defaults::kSurveyHalfWidth; ++k) {
      try {
        const auto run = nelder_mead_2d(objective, {A0 + k * d, B0}, step, coarse);
        survey_evals += run.evaluations;
        if (run.f < lowest) {
          lowest = run.f;
          start = run.x;
        }
      } catch (const OptimizerStalled&) {
      }
    }
  }
  auto best = minimize_with_restarts(objective, start, step, opt.simplex);
  best.evaluations += survey_evals;

  VariationalResult r;
  r.params = base;
  r.params.A = best.x[0];
  r.params.B = best.x[1];
  if (n > 0) {
    const auto o = ortho_impl<Real>(r.params, lower, opt.quad, true);
    r.params.nodes = o.nodes;
    r.ortho_residuals = o.residuals;
  }
  r.energy = energy_report<Real>(r.params, opt.quad);
  r.E_var = r.energy.E;
  r.evaluations = best.evaluations;
  if (opt.nonlinear) {
    r.nonlinear = nonlinear_impl<Real>(r.params, opt.quad);
    r.E2 = r.nonlinear.E2;
    r.E3 = r.nonlinear.E3;
    r.phi1_sup = r.nonlinear.phi1_sup;
  }
  return r;
}

}  // namespace

Precision parse_precision(const std::string& s) {
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  throw ValidationError("precision must be 'double' or 'extended', got '" + s + "'");
}

std::string to_string(Precision p) { return p == Precision::Double ? "double" : "extended"; }

EnergyReport expectation_energy(const ApproximantParams& prm, const QuadratureSpec& quad, Precision precision) {
  prm.validate();
  quad.validate();
  return precision == Precision::Double ? energy_report<double>(prm, quad) : energy_report<long double>(prm, quad);
}

OrthoResult orthogonalize(const ApproximantParams& target, const std::vector<ApproximantParams>& lower,
                          const QuadratureSpec& quad, Precision precision) {
  quad.validate();
  return precision == Precision::Double ? ortho_impl<double>(target, lower, quad, true)
                                        : ortho_impl<long double>(target, lower, quad, true);
}

NonlinearResult nonlinearization(const ApproximantParams& prm, const QuadratureSpec& quad, Precision precision) {
  prm.validate();
  quad.validate();
  return precision == Precision::Double ? nonlinear_impl<double>(prm, quad) : nonlinear_impl<long double>(prm, quad);
}

VariationalResult optimize(int n, int p, double g2, const std::vector<ApproximantParams>& lower,
                           const SolverOptions& opt) {
  return opt.precision == Precision::Double ? optimize_impl<double>(n, p, g2, lower, opt)
                                            : optimize_impl<long double>(n, p, g2, lower, opt);
}

std::vector<VariationalResult> solve_chain(double g2, int p, int n_max, const SolverOptions& opt) {
  check_state(n_max, p, g2);
  std::vector<VariationalResult> out;
  std::vector<ApproximantParams> lower;
  for (int n = 0; n <= n_max; ++n) {
    out.push_back(optimize(n, p, g2, lower, opt));
    lower.push_back(out.back().params);
  }
  return out;
}

int worker_threads() {
  if (const char* env = std::getenv("ANHARMONIC_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<VariationalResult>> solve_chains(const std::vector<ChainRequest>& jobs,
                                                         const SolverOptions& opt, int threads) {
  std::vector<std::vector<VariationalResult>> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        out[i] = solve_chain(jobs[i].g2, jobs[i].p, jobs[i].n_max, opt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nt = std::max(1, std::min<int>(threads > 0 ? threads : worker_threads(), static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void to_json(nlohmann::json& j, const EnergyReport& r) {
  j = nlohmann::json{{"E", r.E},
                     {"E_effective", r.E_effective},
                     {"E0", r.E0},
                     {"doubling_delta", r.doubling_delta},
                     {"cutoff", r.cutoff},
                     {"mapping_scale", r.mapping_scale},
                     {"points", r.points}};
}

void to_json(nlohmann::json& j, const VariationalResult& r) {
  j = nlohmann::json{{"params", r.params},
                     {"E_var", r.E_var},
                     {"E2", r.E2},
                     {"E3", r.E3},
                     {"phi1_sup", r.phi1_sup},
                     {"phi1_sup_allowed", r.nonlinear.phi1_sup_allowed},
                     {"ortho_residuals", r.ortho_residuals},
                     {"quadrature", r.energy},
                     {"evaluations", r.evaluations}};
}

}  // namespace anharmonic
