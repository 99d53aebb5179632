#pragma once

// Two-parameter matched trial function for H = -d^2/dx^2 + x^2 + g^2 x^4:
//
//   Psi = x^p P(x^2) / [ s^{1/2} (alpha B + s)^{2n+p+1/2} ]
//         * exp( -[A + (B^2+3) x^2/6 + g^2 x^4/3] / s + A/B ),
//   s = sqrt(B^2 + g^2 x^2),
//
// with P(t) = 1 - a_2 t + a_4 t^2 - ... carrying the n positive nodes in t.
// Small x reproduces the perturbative expansion of log Psi, large x the
// semiclassical one.

#include <anharmonic/errors.hpp>
#include <anharmonic/jet.hpp>
#include <anharmonic/rational.hpp>

#include <nlohmann/json_fwd.hpp>

#include <cmath>
#include <utility>
#include <vector>

namespace anharmonic {

struct ApproximantParams {
  int n = 0;
  int p = 0;
  double g2 = 1.0;
  double A = 0.0;
  double B = 1.0;
  double alpha = 1.0;
  std::vector<double> nodes;  // a_2 .. a_{2n}: P(t) = sum_k a_{2k} (-t)^k, a_0 = 1

  int quanta() const { return 2 * n + p; }
  void validate() const;
};

inline constexpr double kNodeExclusion = 1e-12;

/// P(t) = 1 - a_2 t + a_4 t^2 - ...
template <class T>
T node_poly(const std::vector<double>& a, const T& t) {
  T acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = (acc + T(*it)) * (-t);
  return acc + T(1);
}

/// log of s^{-1/2} (alpha B + s)^{-k} exp(-[A + (B^2+3) x^2/6 + g^2 x^4/3]/s + A/B)
/// as a jet in x.
template <class T>
Jet<T> log_envelope_power(double g2_, double A_, double B_, double alpha_, const T& k, const T& x) {
  const T g2(g2_), A(A_), B(B_), alpha(alpha_);
  const auto X = Jet<T>::variable(x);
  const auto x2 = X * X;
  const auto s = sqrt(Jet<T>(B * B) + Jet<T>(g2) * x2);
  // A/B - A/s written without cancellation.
  const auto shift = Jet<T>(A * g2 / B) * x2 / (s * (Jet<T>(B) + s));
  const auto poly = Jet<T>((B * B + T(3)) / T(6)) * x2 + Jet<T>(g2 / T(3)) * x2 * x2;
  return Jet<T>(T(-0.5)) * log(s) - Jet<T>(k) * log(Jet<T>(alpha * B) + s) + shift - poly / s;
}

/// Node-free even factor log Phi(x) with Psi = x^p P(x^2) Phi(x), as a jet in x.
template <class T>
Jet<T> log_envelope(const ApproximantParams& prm, const T& x) {
  return log_envelope_power<T>(prm.g2, prm.A, prm.B, prm.alpha, T(2 * prm.n + prm.p) + T(0.5), x);
}

/// log|P(x^2)| as a jet in x.
template <class T>
Jet<T> log_node_factor(const ApproximantParams& prm, const T& x) {
  if (prm.nodes.empty()) return Jet<T>(T(0));
  const auto X = Jet<T>::variable(x);
  const auto t = X * X;
  Jet<T> acc(T(0));
  for (auto it = prm.nodes.rbegin(); it != prm.nodes.rend(); ++it) acc = (acc + Jet<T>(T(*it))) * (-t);
  return log(acc + Jet<T>(T(1)));
}

/// Positive roots of P(x^2) in increasing order.
std::vector<double> positive_nodes(const ApproximantParams& prm);

/// log|Psi| with its first two x-derivatives. Throws NodeEvaluation within
/// 1e-12 of a zero of x^p P(x^2).
template <class T>
Jet<T> log_psi(const ApproximantParams& prm, const T& x) {
  using std::abs;
  using std::log;
  if (prm.p == 1 && abs(x) < T(kNodeExclusion)) throw NodeEvaluation("wavefunction vanishes at x = 0");
  for (double r : positive_nodes(prm))
    if (abs(abs(x) - T(r)) < T(kNodeExclusion)) throw NodeEvaluation("evaluation at a node of the wavefunction");
  Jet<T> out = log_envelope(prm, x) + log_node_factor(prm, x);
  if (prm.p == 1) out += Jet<T>(log(abs(x)), T(1) / x, T(-1) / (x * x));
  return out;
}

/// Signed Psi(x); exact zeros at nodes.
template <class T>
T psi(const ApproximantParams& prm, const T& x) {
  using std::exp;
  const T px = node_poly(prm.nodes, x * x);
  const T xp = prm.p == 1 ? x : T(1);
  return xp * px * exp(log_envelope(prm, x).v);
}

template <class T>
struct EffectivePotential {
  T v_eff;  // V^{(n,p)}(x), zero at the origin
  T e0;     // energy the trial function would have if it were exact
};

/// Psi''/Psi + E0 with E0 fixed by V^{(n,p)}(0) = 0. For odd states the
/// origin value is the limit 3 (log Phi)''(0).
template <class T>
EffectivePotential<T> effective_potential(const ApproximantParams& prm, const T& x) {
  using std::abs;
  const auto g0 = log_envelope(prm, T(0));
  const auto n0 = log_node_factor(prm, T(0));
  const T e0 = -T(1 + 2 * prm.p) * (g0.d2 + n0.d2);
  if (x == T(0)) return {T(0), e0};
  for (double r : positive_nodes(prm))
    if (abs(abs(x) - T(r)) < T(kNodeExclusion)) throw NodeEvaluation("effective potential has a double pole at a node");
  // Split off x^p so the odd-state 1/x^2 terms cancel analytically.
  const auto g = log_envelope(prm, x) + log_node_factor(prm, x);
  T ratio = g.d2 + g.d1 * g.d1;
  if (prm.p == 1) ratio += T(2) * g.d1 / x;
  return {ratio + e0, e0};
}

/// Node coefficients of the harmonic limit: x^p L_n^{(p-1/2)}(x^2) normalized
/// to P(0) = 1, a_{2k} = C(n,k) / (p+1/2)_k.
std::vector<Rational> harmonic_node_coeffs(int n, int p);

struct NodeFit {
  double a2 = 0.0;
  double a4 = 0.0;
  bool range_warning = false;
};

/// Fitted a_2, a_4 for the pure quartic potential; nominal range n in [0, 40].
NodeFit strong_coupling_node_fit(int n, int p);

/// Strong-coupling amplitudes: A -> -a g^{2/3}, B -> b g^{2/3}, N = 2n+p.
double a_fit(int N);
double b_fit(int N);
double lambda_tilde(double g2);

/// Rational interpolants of the optimal ground-state parameters.
std::pair<double, double> ground_state_ab(double g2);

/// Initial guess for (A, B). The ground state uses the interpolants above;
/// other states blend the weak- and strong-coupling limits with s = g^2/(1+g^2).
std::pair<double, double> ab_interpolation(double g2, int n, int p);

/// log|x^p L_n^{(p-1/2)}(x^2) / L_n^{(p-1/2)}(0)| - x^2/2.
double harmonic_log_psi(int n, int p, double x);

ApproximantParams harmonic_limit_params(int n, int p, double g2);

void to_json(nlohmann::json& j, const ApproximantParams& prm);
ApproximantParams params_from_json(const nlohmann::json& j);

}  // namespace anharmonic
