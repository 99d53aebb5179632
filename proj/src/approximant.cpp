#include <anharmonic/approximant.hpp>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace anharmonic {

void ApproximantParams::validate() const {
  if (n < 0) throw ValidationError("node count n must be >= 0");
  if (p != 0 && p != 1) throw ValidationError("parity p must be 0 or 1");
  if (!(g2 >= 0) || !std::isfinite(g2)) throw ValidationError("g2 must be finite and >= 0");
  if (!(B > 0) || !std::isfinite(B)) throw ValidationError("B must be positive");
  if (!std::isfinite(A)) throw ValidationError("A must be finite");
  if (static_cast<int>(nodes.size()) != n) throw ValidationError("node polynomial must have n coefficients");
}

std::vector<double> positive_nodes(const ApproximantParams& prm) {
  const auto& a = prm.nodes;
  std::vector<double> roots;
  // Trailing zero coefficients lower the degree.
  int deg = static_cast<int>(a.size());
  while (deg > 0 && a[deg - 1] == 0.0) --deg;
  if (deg == 0) return roots;
  std::vector<double> ts;
  if (deg == 1) {
    ts.push_back(1.0 / a[0]);
  } else {
    // Monic companion matrix of sum_k a_{2k} (-t)^k.
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    const double lead = (deg % 2 == 0 ? 1.0 : -1.0) * a[deg - 1];
    for (int k = 0; k < deg; ++k) {
      const double ck = k == 0 ? 1.0 : (k % 2 == 0 ? 1.0 : -1.0) * a[k - 1];
      C(k, deg - 1) = -ck / lead;
      if (k > 0) C(k, k - 1) = 1.0;
    }
    const Eigen::VectorXcd ev = C.eigenvalues();
    for (int i = 0; i < deg; ++i)
      if (std::abs(ev[i].imag()) <= 1e-10 * std::max(1.0, std::abs(ev[i].real()))) ts.push_back(ev[i].real());
  }
  for (double t : ts)
    if (t > 0) roots.push_back(std::sqrt(t));
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<Rational> harmonic_node_coeffs(int n, int p) {
  if (n < 0) throw ValidationError("n must be >= 0");
  if (p != 0 && p != 1) throw ValidationError("parity p must be 0 or 1");
  std::vector<Rational> a;
  Rational binom = 1;
  Rational poch = 1;
  const Rational base = Rational(2 * p + 1, 2);
  for (int k = 1; k <= n; ++k) {
    binom = binom * (n - k + 1) / k;
    poch *= base + (k - 1);
    a.push_back(binom / poch);
  }
  return a;
}

NodeFit strong_coupling_node_fit(int n, int p) {
  if (n < 0) throw ValidationError("n must be >= 0");
  if (p != 0 && p != 1) throw ValidationError("parity p must be 0 or 1");
  NodeFit f;
  const double dn = n;
  if (p == 0) {
    f.a2 = dn * std::cbrt(7.372 + 10.872 * dn);
    f.a4 = dn * (dn - 1) * std::pow(0.830 + 1.420 * dn, 2.0 / 3.0);
  } else {
    f.a2 = dn * std::cbrt(0.834 + 0.773 * dn);
    f.a4 = dn * (dn - 1) * std::pow(0.167 + 0.127 * dn, 2.0 / 3.0);
  }
  f.range_warning = n > 40;
  return f;
}

double a_fit(int N) {
  if (N < 0) throw ValidationError("N must be >= 0");
  const double x = N;
  return std::cbrt(8.869 + x * (23.120 + x * (7.856 + x * (4.140 + x * 0.262))));
}

double b_fit(int N) {
  if (N < 0) throw ValidationError("N must be >= 0");
  return std::cbrt(10.040 + 3.255 * N);
}

double lambda_tilde(double g2) {
  if (!(g2 >= 0)) throw ValidationError("g2 must be >= 0");
  return std::cbrt(0.008 + g2);
}

std::pair<double, double> ground_state_ab(double g2) {
  if (!(g2 > 0)) throw ValidationError("g2 must be positive");
  const double l = lambda_tilde(g2);
  const double p5 = -0.0171 + l * (0.4205 + l * (-0.1990 + l * (1.039 + l * (-0.0567 + l * -1.797))));
  const double q3 = 0.3716 + l * (5.476 + l * (2.231 + l * 33.51));
  const double q2 = 1.0 + l * (0.9981 + l * 15.61);
  return {p5 / (g2 * l), q3 / q2};
}

std::pair<double, double> ab_interpolation(double g2, int n, int p) {
  if (!(g2 > 0)) throw ValidationError("g2 must be positive");
  if (n == 0 && p == 0) return ground_state_ab(g2);
  const int N = 2 * n + p;
  const double s = g2 / (1.0 + g2);
  const double g23 = std::cbrt(g2);
  const double weak_a = 1.0 / (3.0 * g2);
  const double A = weak_a + (-a_fit(N) * g23 - weak_a) * s;
  const double B = 1.0 + (b_fit(N) * g23 - 1.0) * s;
  return {A, B};
}

double harmonic_log_psi(int n, int p, double x) {
  const auto a = harmonic_node_coeffs(n, p);
  std::vector<double> ad;
  for (const auto& c : a) ad.push_back(to_real<double>(c));
  const double P = node_poly(ad, x * x);
  return (p == 1 ? std::log(std::abs(x)) : 0.0) + std::log(std::abs(P)) - 0.5 * x * x;
}

ApproximantParams harmonic_limit_params(int n, int p, double g2) {
  ApproximantParams prm;
  prm.n = n;
  prm.p = p;
  prm.g2 = g2;
  prm.A = 1.0 / (3.0 * g2);
  prm.B = 1.0;
  for (const auto& c : harmonic_node_coeffs(n, p)) prm.nodes.push_back(to_real<double>(c));
  return prm;
}

void to_json(nlohmann::json& j, const ApproximantParams& prm) {
  j = nlohmann::json{{"n", prm.n},         {"p", prm.p},         {"g2", prm.g2},       {"A", prm.A},
                     {"B", prm.B},         {"alpha", prm.alpha}, {"nodes", prm.nodes}};
}

ApproximantParams params_from_json(const nlohmann::json& j) {
  ApproximantParams prm;
  prm.n = j.at("n").get<int>();
  prm.p = j.at("p").get<int>();
  prm.g2 = j.at("g2").get<double>();
  prm.A = j.at("A").get<double>();
  prm.B = j.at("B").get<double>();
  prm.alpha = j.value("alpha", 1.0);
  prm.nodes = j.value("nodes", std::vector<double>{});
  prm.validate();
  return prm;
}

}  // namespace anharmonic
