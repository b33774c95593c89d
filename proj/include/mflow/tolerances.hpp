#pragma once

namespace mflow::tol {

// Set membership is distance-based; all variant projections are closed-form
// up to this scale.
inline constexpr double kSet = 1e-10;

// Alternating-projection (Dykstra) stop tolerance and iteration cap for
// polyhedra; desk-scale polyhedra only.
inline constexpr double kDykstra = 1e-12;
inline constexpr int kDykstraCap = 100000;

// Residual above which a stalled Dykstra run is reported as an empty set.
inline constexpr double kInfeasible = 1e-7;

// Mean-value-inequality witness search budget.
inline constexpr int kWitnessSamples = 1000;

// Number of pseudo-random support directions used for Hausdorff estimates.
inline constexpr int kSupportDirs = 64;

// Integrator diagnostics.
inline constexpr double kVel = 1e-6;   // relative, velocity bound
inline constexpr double kMult = 1e-6;  // absolute, multiplier bound
inline constexpr double kPen = 1e-6;   // absolute, penalty bound

// Polar test deciding whether the normal-cone infimum diverges.
inline constexpr double kCone = 1e-9;

// Hamiltonian decrease margin tolerance for (H1)/(H2) checks.
inline constexpr double kHam = 1e-9;

// Lyapunov-pair decrease and sublevel invariance tolerance.
inline constexpr double kLyap = 1e-6;

// Tail-oscillation threshold for convergence detection.
inline constexpr double kConv = 1e-4;

// Equilibrium residual threshold.
inline constexpr double kEq = 1e-6;

}  // namespace mflow::tol
