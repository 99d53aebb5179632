#include <anharmonic/radial_extension.hpp>

#include <anharmonic/approximant.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>

namespace anharmonic {

namespace {

struct RadialPoint {
  double psi, dpsi;
};

double node_value(const std::vector<double>& a, double t, double& dt) {
  // P(t) = sum_k a_{2k} (-t)^k and dP/dt
  double P = 0, P1 = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    P1 = P1 * (-t) - P;
    P = P * (-t) + *it;
  }
  P1 = P1 * (-t) - P;
  P = P * (-t) + 1.0;
  dt = P1;
  return P;
}

RadialPoint eval(const RadialParams& prm, double Lref, double r) {
  const auto L = log_envelope_power<double>(prm.g2, prm.A, prm.B, 1.0, prm.envelope_power(), r);
  double Pt;
  const double P = node_value(prm.nodes, r * r, Pt);
  const double rl = std::pow(r, prm.ell);
  const double q = rl * P;
  const double q1 = (prm.ell > 0 ? prm.ell * std::pow(r, prm.ell - 1) * P : 0.0) + rl * 2 * r * Pt;
  const double phi = std::exp(L.v - Lref);
  return {q * phi, phi * (q1 + q * L.d1)};
}

double find_cutoff(const RadialParams& prm, double Lref) {
  double best = -std::numeric_limits<double>::infinity();
  double r = 0.01;
  for (int i = 0; i < 4000; ++i, r *= 1.02) {
    double bound = 1;
    for (std::size_t k = 0; k < prm.nodes.size(); ++k) bound += std::abs(prm.nodes[k]) * std::pow(r * r, k + 1);
    const auto L = log_envelope_power<double>(prm.g2, prm.A, prm.B, 1.0, prm.envelope_power(), r);
    const double h = L.v - Lref + std::log(bound) + (prm.ell + (prm.D - 1) / 2.0) * std::log(r);
    best = std::max(best, h);
    if (h < best - defaults::kTailLogDrop) return r;
  }
  throw QuadratureNotConverged("radial wavefunction does not decay; cannot place the quadrature cutoff");
}

struct Sums {
  double norm = 0, energy = 0;
};

Sums sums(const RadialParams& prm, double Lref, const Grid<double>& g) {
  Sums s;
  const double cent = prm.ell * (prm.ell + prm.D - 2.0);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double r = g.x[i];
    const auto pt = eval(prm, Lref, r);
    const double w = g.w[i] * std::pow(r, prm.D - 1);
    const double V = r * r + prm.g2 * r * r * r * r;
    s.norm += w * pt.psi * pt.psi;
    s.energy += w * (pt.dpsi * pt.dpsi + (cent / (r * r) + V) * pt.psi * pt.psi);
  }
  return s;
}

double mapping_scale(const RadialParams& prm, const QuadratureSpec& quad) {
  return quad.mapping_scale > 0 ? quad.mapping_scale : std::min(1.0, 1.0 / std::sqrt(prm.B));
}

}  // namespace

void RadialParams::validate() const {
  if (D < 1) throw ValidationError("dimension D must be >= 1");
  if (n_r < 0) throw ValidationError("n_r must be >= 0");
  if (ell < 0) throw ValidationError("ell must be >= 0");
  if (D == 1 && ell > 1) throw InvalidAngular("in one dimension only ell = 0 (even) and ell = 1 (odd) exist");
  if (!(g2 > 0) || !std::isfinite(g2)) throw ValidationError("g2 must be finite and > 0");
  if (!(B > 0) || !std::isfinite(B)) throw ValidationError("B must be positive");
  if (!std::isfinite(A)) throw ValidationError("A must be finite");
  if (static_cast<int>(nodes.size()) != n_r) throw ValidationError("node polynomial must have n_r coefficients");
}

double log_psi_radial(const RadialParams& prm, double r) {
  prm.validate();
  if (r < 0) throw ValidationError("r must be >= 0");
  if (prm.ell > 0 && r < kNodeExclusion) throw NodeEvaluation("wavefunction vanishes at r = 0");
  double Pt;
  const double P = node_value(prm.nodes, r * r, Pt);
  if (std::abs(P) < kNodeExclusion * std::max(1.0, std::abs(2 * r * Pt)))
    throw NodeEvaluation("evaluation at a node of the radial wavefunction");
  const auto L = log_envelope_power<double>(prm.g2, prm.A, prm.B, 1.0, prm.envelope_power(), r);
  return L.v + std::log(std::abs(P)) + (prm.ell > 0 ? prm.ell * std::log(r) : 0.0);
}

RadialResult radial_energy(const RadialParams& prm, const QuadratureSpec& quad) {
  prm.validate();
  quad.validate();
  const double Lref = log_envelope_power<double>(prm.g2, prm.A, prm.B, 1.0, prm.envelope_power(), 0.0).v;
  const double X = quad.cutoff > 0 ? quad.cutoff : find_cutoff(prm, Lref);
  const double c = mapping_scale(prm, quad);
  const auto coarse = sums(prm, Lref, exp_sinh_grid<double>(c, X, quad.points));
  const auto fine = sums(prm, Lref, exp_sinh_grid<double>(c, X, 2 * quad.points - 1));
  RadialResult r;
  r.params = prm;
  r.E_var = fine.energy / fine.norm;
  r.doubling_delta = std::abs(r.E_var - coarse.energy / coarse.norm);
  if (!(r.doubling_delta <= quad.rel_tol * std::abs(r.E_var)))
    throw QuadratureNotConverged("radial energy changed by " + std::to_string(r.doubling_delta) +
                                 " on doubling the points");
  return r;
}

RadialResult optimize_radial(int D, int n_r, int ell, double g2, const QuadratureSpec& quad,
                             const SimplexOptions& simplex) {
  RadialParams base;
  base.D = D;
  base.n_r = n_r;
  base.ell = ell;
  base.g2 = g2;
  base.nodes.assign(std::max(n_r, 0), 0.0);
  base.validate();
  quad.validate();
  if (n_r != 0) throw ValidationError("only ground radial states (n_r = 0) are supported");

  auto objective = [&](const std::array<double, 2>& ab) {
    if (!(ab[1] > 0) || !std::isfinite(ab[0]) || !std::isfinite(ab[1])) return std::numeric_limits<double>::infinity();
    RadialParams q = base;
    q.A = ab[0];
    q.B = ab[1];
    const double Lref = log_envelope_power<double>(q.g2, q.A, q.B, 1.0, q.envelope_power(), 0.0).v;
    try {
      const double X = quad.cutoff > 0 ? quad.cutoff : find_cutoff(q, Lref);
      const auto s = sums(q, Lref, exp_sinh_grid<double>(mapping_scale(q, quad), X, quad.points));
      const double e = s.energy / s.norm;
      return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    } catch (const QuadratureNotConverged&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const int N = 2 * n_r + ell;
  const auto [A0, B0] = ab_interpolation(g2, N / 2, N % 2);
  const std::array<double, 2> step{std::abs(A0) * 0.05 + 1e-3, std::abs(B0) * 0.05 + 1e-3};
  const auto best = minimize_with_restarts(objective, {A0, B0}, step, simplex);
  RadialParams opt = base;
  opt.A = best.x[0];
  opt.B = best.x[1];
  auto r = radial_energy(opt, quad);
  r.evaluations = best.evaluations;
  return r;
}

void to_json(nlohmann::json& j, const RadialParams& prm) {
  j = nlohmann::json{{"D", prm.D}, {"n_r", prm.n_r}, {"ell", prm.ell}, {"g2", prm.g2},
                     {"A", prm.A}, {"B", prm.B},     {"nodes", prm.nodes}};
}

void to_json(nlohmann::json& j, const RadialResult& r) {
  j = nlohmann::json{{"params", r.params},
                     {"E_var", r.E_var},
                     {"doubling_delta", r.doubling_delta},
                     {"evaluations", r.evaluations}};
}

}  // namespace anharmonic
