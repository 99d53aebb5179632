#pragma once

// Lagrange-mesh eigensolver used as the reference for every energy.
//
// 1-D: Hermite mesh. The mesh points are the zeros of H_N and the kinetic
// matrix is the one for which -d^2/dx^2 + x^2 is exactly diagonal on the
// Lagrange basis, T_ii = (2N+1-x_i^2)/3, T_ij = (-1)^{i-j} 2/(x_i-x_j)^2.
// Radial: generalized Laguerre mesh in t = r^2 with index Lambda + 1/2, built
// the same way from the exact spectrum 4k + 2 Lambda + 3 of the radial
// harmonic oscillator.

#include <anharmonic/defaults.hpp>
#include <anharmonic/errors.hpp>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace anharmonic {

template <class Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <class Real>
struct HermiteMesh {
  std::vector<Real> points;
  Matrix<Real> kinetic;
};

/// Orthonormal Hermite functions without the Gaussian, h_N(x) and h_{N-1}(x).
template <class Real>
std::pair<Real, Real> hermite_pair(int N, const Real& x) {
  using std::sqrt;
  Real prev = 0;
  Real cur = 1;  // constant normalization drops out of Newton steps
  for (int k = 0; k < N; ++k) {
    const Real next = sqrt(Real(2) / Real(k + 1)) * x * cur - sqrt(Real(k) / Real(k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

/// Zeros of H_N: Golub-Welsch in double for the start values, then Newton
/// on the three-term recurrence in the working precision.
template <class Real>
std::vector<Real> hermite_roots(int N) {
  using std::abs;
  using std::sqrt;
  if (N < 2) throw ValidationError("Hermite mesh needs N >= 2");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  for (int k = 1; k < N; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  const Real eps = std::numeric_limits<Real>::epsilon();
  std::vector<Real> roots(N);
  for (int i = 0; i < N; ++i) {
    Real x = es.eigenvalues()[i];
    bool done = false;
    for (int it = 0; it < 100 && !done; ++it) {
      const auto [hn, hm] = hermite_pair(N, x);
      const Real dx = hn / (sqrt(Real(2 * N)) * hm);
      x -= dx;
      done = abs(dx) <= Real(4) * eps * (Real(1) + abs(x));
    }
    if (!done) throw RootFindingFailed("Newton iteration for Hermite zeros did not converge");
    roots[i] = x;
  }
  // Exact symmetry.
  for (int i = 0; i < N / 2; ++i) {
    const Real m = (roots[N - 1 - i] - roots[i]) / Real(2);
    roots[i] = -m;
    roots[N - 1 - i] = m;
  }
  if (N % 2 == 1) roots[N / 2] = 0;
  return roots;
}

template <class Real>
HermiteMesh<Real> hermite_mesh(int N) {
  HermiteMesh<Real> mesh;
  mesh.points = hermite_roots<Real>(N);
  mesh.kinetic = Matrix<Real>(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Real& xi = mesh.points[i];
      if (i == j) {
        mesh.kinetic(i, i) = (Real(2 * N + 1) - xi * xi) / Real(3);
      } else {
        const Real d = xi - mesh.points[j];
        const Real sign = (i - j) % 2 == 0 ? Real(1) : Real(-1);
        mesh.kinetic(i, j) = sign * Real(2) / (d * d);
      }
    }
  return mesh;
}

struct MeshConfig {
  int points = defaults::kMeshPoints;
  double scale = 0.0;  // 0: auto-tune
  double g2 = 1.0;
  double c2 = 1.0;     // coefficient of x^2; 0 gives the pure quartic
  double tol = defaults::kMeshTolerance;
  bool check_convergence = true;
};

struct MeshResult {
  std::vector<double> eigenvalues;  // lower half of the spectrum
  int N_used = 0;
  double convergence_delta = 0.0;
  double scale_used = 0.0;
  int k = 0;
  double energy() const { return eigenvalues.at(k); }
};

/// Eigenvalues of T/h^2 + diag(c2 (h x_i)^2 + g2 (h x_i)^4), ascending.
template <class Real>
Vector<Real> hermite_spectrum(const HermiteMesh<Real>& mesh, const Real& h, const Real& g2, const Real& c2) {
  const int N = static_cast<int>(mesh.points.size());
  Matrix<Real> H = mesh.kinetic / (h * h);
  for (int i = 0; i < N; ++i) {
    const Real y2 = h * h * mesh.points[i] * mesh.points[i];
    H(i, i) += c2 * y2 + g2 * y2 * y2;
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Scale with the flattest N vs N-10 dependence of eigenvalue k: the centre
/// of the longest run of grid points within a factor 10 of the best delta.
double tune_hermite_scale(const MeshConfig& cfg, int k);

/// k-th eigenvalue (k = 2n + p for the state (n, p)).
MeshResult mesh_energy(const MeshConfig& cfg, int k);

/// Same, with mesh and eigensolver in Real; the scale is tuned in double
/// unless given. Returns the k-th eigenvalue and the N-10 delta.
template <class Real>
std::pair<Real, Real> mesh_energy_extended(const MeshConfig& cfg, int k, double scale) {
  using std::abs;
  const auto mesh = hermite_mesh<Real>(cfg.points);
  const auto low = hermite_mesh<Real>(cfg.points - defaults::kMeshDeltaStep);
  const Real h(scale), g2(cfg.g2), c2(cfg.c2);
  const Real e = hermite_spectrum(mesh, h, g2, c2)[k];
  const Real e_low = hermite_spectrum(low, h, g2, c2)[k];
  return {e, abs(e - e_low)};
}

/// Lagrange-Laguerre mesh for the reduced radial problem
/// -u'' + Lambda(Lambda+1)/r^2 u + (r^2 + g^2 r^4) u = E u, Lambda = ell + (D-3)/2.
/// Returns the k-th radial eigenvalue. D = 1 with ell = 0 / 1 gives the even /
/// odd 1-D sector.
MeshResult radial_mesh_energy(int D, int ell, double g2, int N = defaults::kMeshPoints, int k = 0,
                              double scale = 0.0, double tol = defaults::kMeshTolerance);

/// Ground energy of -d^2/dx^2 + x^4 with its convergence certificate.
MeshResult pure_quartic_ground(int N = 120);

void to_json(nlohmann::json& j, const MeshResult& r);

}  // namespace anharmonic
