#pragma once

// Numerical defaults shared by the library, the CLI and the test suites.
// The CLI exposes overrides for the ones a user is expected to touch.

namespace anharmonic::defaults {

// Lagrange mesh
inline constexpr int kMeshPoints = 75;
inline constexpr int kMeshDeltaStep = 10;  // convergence check against N - 10
inline constexpr double kMeshTolerance = 1e-10;
inline constexpr double kMeshScaleLow = 0.1;
inline constexpr double kMeshScaleHigh = 3.0;
inline constexpr int kMeshScaleGrid = 41;

// Variational quadrature
inline constexpr int kQuadraturePoints = 400;
inline constexpr double kQuadratureRelTol = 1e-13;
inline constexpr double kTailLogDrop = 50.0;  // integrate until Psi^2 fell by e^{-2*50}

// Optimizer
inline constexpr double kSimplexSpread = 1e-13;
inline constexpr int kRestarts = 3;
inline constexpr double kRestartJitter = 0.2;
inline constexpr int kMaxSimplexIterations = 4000;
inline constexpr unsigned long long kSeed = 20211;
inline constexpr int kSurveyHalfWidth = 2;      // excited states: starts at A0 + k d, |k| <= 2
inline constexpr double kSurveySpread = 1e-10;  // spread of the survey descents

// Orthogonality and nonlinearization
inline constexpr double kMaxGramCondition = 1e12;
inline constexpr double kNodeResidueTol = 1e-8;
inline constexpr int kPanelOrder = 16;

// Series
inline constexpr int kBlochOrder = 6;

}  // namespace anharmonic::defaults
