#pragma once

// Variational optimization of the approximant and the nonlinearization
// corrections on top of it.

#include <anharmonic/approximant.hpp>
#include <anharmonic/defaults.hpp>
#include <anharmonic/nelder_mead.hpp>
#include <anharmonic/quadrature.hpp>

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace anharmonic {

enum class Precision { Double, Extended };

Precision parse_precision(const std::string& s);
std::string to_string(Precision p);

struct EnergyReport {
  double E = 0.0;              // Rayleigh quotient from int (Psi')^2 + V Psi^2
  double E_effective = 0.0;    // E0 + <Psi (V - V_eff) Psi> / <Psi, Psi>
  double E0 = 0.0;
  double doubling_delta = 0.0; // |E(2 points) - E(points)|
  double cutoff = 0.0;
  double mapping_scale = 0.0;
  int points = 0;
};

/// Both energy forms with the point-doubling check. Throws
/// QuadratureNotConverged when the doubling changes E by more than rel_tol |E|
/// or the two forms disagree by more than that.
EnergyReport expectation_energy(const ApproximantParams& prm, const QuadratureSpec& quad = {},
                                Precision precision = Precision::Double);

struct OrthoResult {
  std::vector<double> nodes;      // a_2 .. a_2n
  std::vector<double> residuals;  // normalized overlaps with each lower state
  double condition = 1.0;         // of the equilibrated constraint matrix
};

/// Node coefficients making `target` orthogonal to every state in `lower`
/// (same parity, increasing n). The overlaps are linear in the coefficients
/// of P written in powers of t = x^2.
OrthoResult orthogonalize(const ApproximantParams& target, const std::vector<ApproximantParams>& lower,
                          const QuadratureSpec& quad = {}, Precision precision = Precision::Double);

struct NonlinearResult {
  double E1 = 0.0;  // <V - V_eff> + E0, equal to E_var
  double E2 = 0.0;
  double E3 = 0.0;
  // Ground state only: the Riccati-form values -<y1^2> and -2<y1 y2>,
  // kept next to E2, E3 (Rayleigh-Schroedinger form) as a cross-check.
  double E2_riccati = 0.0;
  double E3_riccati = 0.0;
  double phi1_sup = 0.0;          // over [0, cutoff]
  double phi1_sup_allowed = 0.0;  // over the classically allowed region V <= E1
  std::vector<double> node_shift;   // beta_k: y1 ~ beta_k / (x - x_k)^2
  std::vector<double> node_residue; // gamma_k: leftover 1/(x - x_k) term
  std::vector<double> x, y1, phi1;  // samples on the panel grid
};

/// First two orders of the Riccati perturbation theory in V - V_eff. For
/// excited states the double poles of y1 at the nodes are absorbed into a
/// shift of the node polynomial; the leftover simple-pole residue must stay
/// below 1e-8 (NodeRegularityViolated otherwise).
NonlinearResult nonlinearization(const ApproximantParams& prm, const QuadratureSpec& quad = {},
                                 Precision precision = Precision::Double);

struct SolverOptions {
  QuadratureSpec quad;
  SimplexOptions simplex;
  Precision precision = Precision::Double;
  bool nonlinear = true;
};

struct VariationalResult {
  ApproximantParams params;
  double E_var = 0.0;
  double E2 = 0.0;
  double E3 = 0.0;
  double phi1_sup = 0.0;
  std::vector<double> ortho_residuals;
  EnergyReport energy;
  NonlinearResult nonlinear;
  int evaluations = 0;
};

/// Minimizes the energy over (A, B) with the node coefficients re-solved at
/// every step. `lower` holds the optimized states (0, p) .. (n-1, p).
VariationalResult optimize(int n, int p, double g2, const std::vector<ApproximantParams>& lower,
                           const SolverOptions& opt = {});

/// States (0, p) .. (n_max, p) in order.
std::vector<VariationalResult> solve_chain(double g2, int p, int n_max, const SolverOptions& opt = {});

struct ChainRequest {
  double g2 = 1.0;
  int p = 0;
  int n_max = 0;
};

/// Independent chains on a worker pool; the output order follows `jobs`.
std::vector<std::vector<VariationalResult>> solve_chains(const std::vector<ChainRequest>& jobs,
                                                         const SolverOptions& opt = {}, int threads = 0);

/// ANHARMONIC_LAB_THREADS if set, else the hardware concurrency.
int worker_threads();

void to_json(nlohmann::json& j, const EnergyReport& r);
void to_json(nlohmann::json& j, const VariationalResult& r);

}  // namespace anharmonic
