#include <anharmonic/mesh_oracle.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace anharmonic {

namespace {

// Log grid search for the plateau of |E(N) - E(N-10)|.
double tune_scale(const std::function<double(int, double)>& energy, int N, double lo, double hi) {
  const int M = defaults::kMeshScaleGrid;
  std::vector<double> hs(M), delta(M);
  for (int i = 0; i < M; ++i) {
    hs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (M - 1));
    const double e = energy(N, hs[i]);
    const double el = energy(N - defaults::kMeshDeltaStep, hs[i]);
    delta[i] = std::isfinite(e) && std::isfinite(el) ? std::abs(e - el) : INFINITY;
  }
  const double best = *std::min_element(delta.begin(), delta.end());
  // Deltas at the round-off floor are indistinguishable; widen the band to
  // include them before picking the centre of the longest run.
  const double band = std::max(10 * best, 1e-14 * std::abs(energy(N, hs[std::min_element(delta.begin(), delta.end()) - delta.begin()])));
  int run_start = 0, run_len = 0, best_start = 0, best_len = 0;
  for (int i = 0; i < M; ++i) {
    if (delta[i] <= band) {
      if (run_len == 0) run_start = i;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
    } else {
      run_len = 0;
    }
  }
  const int lo_i = best_start, hi_i = best_start + best_len - 1;
  return std::sqrt(hs[lo_i] * hs[hi_i]);
}

double coupling_scale(double c2, double g2) {
  // Width of the ground state shrinks like (c2 + g2)^{-1/6} for strong coupling.
  return std::pow(c2 + g2, -1.0 / 6.0);
}

struct LaguerreMesh {
  Eigen::VectorXd t;
  Eigen::MatrixXd kinetic;
};

LaguerreMesh laguerre_mesh(int N, double Lambda) {
  const double alpha = Lambda + 0.5;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < N; ++k) J(k, k) = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < N; ++k) J(k, k - 1) = J(k - 1, k) = -std::sqrt(k * (k + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  // U(k, i) = sqrt(w_i) p_k(t_i): rows index the Laguerre degree, columns
  // the nodes.
  const Eigen::MatrixXd& U = es.eigenvectors();
  Eigen::VectorXd levels(N);
  for (int k = 0; k < N; ++k) levels[k] = 4.0 * k + 2.0 * Lambda + 3.0;
  LaguerreMesh m;
  m.t = es.eigenvalues();
  m.kinetic = U.transpose() * levels.asDiagonal() * U;
  m.kinetic.diagonal() -= m.t;
  return m;
}

double radial_eigenvalue(const LaguerreMesh& m, double h, double g2, int k) {
  const int N = static_cast<int>(m.t.size());
  Eigen::MatrixXd H = m.kinetic / (h * h);
  for (int i = 0; i < N; ++i) {
    const double r2 = h * h * m.t[i];
    H(i, i) += r2 + g2 * r2 * r2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[k];
}

void check_k(int k, int N) {
  if (k < 0) throw ValidationError("eigenvalue index must be >= 0");
  if (2 * k >= N) throw ValidationError("eigenvalue index must be below N/2");
}

}  // namespace

double tune_hermite_scale(const MeshConfig& cfg, int k) {
  const double c = coupling_scale(cfg.c2, cfg.g2);
  auto energy = [&](int N, double h) {
    const auto mesh = hermite_mesh<double>(N);
    return hermite_spectrum(mesh, h, cfg.g2, cfg.c2)[k];
  };
  return tune_scale(energy, cfg.points, defaults::kMeshScaleLow * c, defaults::kMeshScaleHigh * c);
}

MeshResult mesh_energy(const MeshConfig& cfg, int k) {
  if (cfg.points < 10 + defaults::kMeshDeltaStep) throw ValidationError("mesh needs at least 20 points");
  if (!(cfg.g2 >= 0) || !(cfg.c2 >= 0) || (cfg.g2 == 0 && cfg.c2 == 0))
    throw ValidationError("potential must be confining (g2 >= 0, c2 >= 0, not both zero)");
  check_k(k, cfg.points);
  MeshResult r;
  r.k = k;
  r.N_used = cfg.points;
  r.scale_used = cfg.scale > 0 ? cfg.scale : tune_hermite_scale(cfg, k);
  const auto mesh = hermite_mesh<double>(cfg.points);
  const auto low = hermite_mesh<double>(cfg.points - defaults::kMeshDeltaStep);
  const auto levels = hermite_spectrum(mesh, r.scale_used, cfg.g2, cfg.c2);
  const double e_low = hermite_spectrum(low, r.scale_used, cfg.g2, cfg.c2)[k];
  r.eigenvalues.assign(levels.data(), levels.data() + cfg.points / 2);
  r.convergence_delta = std::abs(levels[k] - e_low);
  if (cfg.check_convergence && r.convergence_delta > cfg.tol * std::abs(levels[k]))
    throw NotConverged("mesh eigenvalue changed by " + std::to_string(r.convergence_delta) + " between N-10 and N");
  return r;
}

MeshResult radial_mesh_energy(int D, int ell, double g2, int N, int k, double scale, double tol) {
  if (D < 1) throw ValidationError("dimension D must be >= 1");
  if (ell < 0) throw ValidationError("angular momentum must be >= 0");
  if (D == 1 && ell > 1) throw InvalidAngular("in one dimension only ell = 0 (even) and ell = 1 (odd) exist");
  if (!(g2 >= 0)) throw ValidationError("g2 must be >= 0");
  const double Lambda = ell + (D - 3) / 2.0;
  if (Lambda * (Lambda + 1) < -0.25) throw InvalidAngular("centrifugal coefficient below -1/4");
  if (N < 10 + defaults::kMeshDeltaStep) throw ValidationError("mesh needs at least 20 points");
  check_k(k, N);
  MeshResult r;
  r.k = k;
  r.N_used = N;
  auto energy = [&](int n, double h) { return radial_eigenvalue(laguerre_mesh(n, Lambda), h, g2, k); };
  if (scale > 0) {
    r.scale_used = scale;
  } else {
    const double c = coupling_scale(1.0, g2);
    r.scale_used = tune_scale(energy, N, defaults::kMeshScaleLow * c, defaults::kMeshScaleHigh * c);
  }
  const auto mesh = laguerre_mesh(N, Lambda);
  Eigen::MatrixXd H = mesh.kinetic / (r.scale_used * r.scale_used);
  for (int i = 0; i < N; ++i) {
    const double r2 = r.scale_used * r.scale_used * mesh.t[i];
    H(i, i) += r2 + g2 * r2 * r2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + N / 2);
  r.convergence_delta = std::abs(r.eigenvalues[k] - energy(N - defaults::kMeshDeltaStep, r.scale_used));
  if (r.convergence_delta > tol * std::abs(r.eigenvalues[k]))
    throw NotConverged("radial mesh eigenvalue changed by " + std::to_string(r.convergence_delta) +
                       " between N-10 and N");
  return r;
}

MeshResult pure_quartic_ground(int N) {
  MeshConfig cfg;
  cfg.points = N;
  cfg.g2 = 1.0;
  cfg.c2 = 0.0;
  return mesh_energy(cfg, 0);
}

void to_json(nlohmann::json& j, const MeshResult& r) {
  j = nlohmann::json{{"k", r.k},
                     {"N", r.N_used},
                     {"E", r.energy()},
                     {"convergence_delta", r.convergence_delta},
                     {"scale", r.scale_used}};
}

}  // namespace anharmonic
