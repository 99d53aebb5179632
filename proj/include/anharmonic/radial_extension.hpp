#pragma once

// Radial approximant for -Delta_D + r^2 + g^2 r^4:
//
//   Psi = r^ell P(r^2) / [ s^{1/2} (B + s)^{2 n_r + ell + D/2} ]
//         * exp( -[A + (B^2+3) r^2/6 + g^2 r^4/3] / s + A/B ),  s = sqrt(B^2 + g^2 r^2).
//
// For D = 1 and ell = p this is the one-dimensional approximant with alpha = 1.

#include <anharmonic/nelder_mead.hpp>
#include <anharmonic/quadrature.hpp>

#include <nlohmann/json_fwd.hpp>

#include <vector>

namespace anharmonic {

struct RadialParams {
  int D = 3;
  int n_r = 0;
  int ell = 0;
  double g2 = 1.0;
  double A = 0.0;
  double B = 1.0;
  std::vector<double> nodes;  // a_2 .. a_{2 n_r}, same convention as the 1-D node polynomial

  double envelope_power() const { return 2.0 * n_r + ell + D / 2.0; }
  void validate() const;
};

/// log|Psi(r)|. Throws NodeEvaluation near r = 0 for ell > 0 or near a node.
double log_psi_radial(const RadialParams& prm, double r);

struct RadialResult {
  RadialParams params;
  double E_var = 0.0;
  double doubling_delta = 0.0;
  int evaluations = 0;
};

/// Rayleigh quotient with the D-dimensional measure,
/// int r^{D-1} [Psi'^2 + ell(ell+D-2) Psi^2/r^2 + V Psi^2] / int r^{D-1} Psi^2,
/// checked by point doubling.
RadialResult radial_energy(const RadialParams& prm, const QuadratureSpec& quad = {});

/// Ground radial states only (n_r = 0).
RadialResult optimize_radial(int D, int n_r, int ell, double g2, const QuadratureSpec& quad = {},
                             const SimplexOptions& simplex = {});

void to_json(nlohmann::json& j, const RadialParams& prm);
void to_json(nlohmann::json& j, const RadialResult& r);

}  // namespace anharmonic
