#pragma once

#include "mflow/stability.hpp"

namespace mflow {

/// Second-order inertial system with Hessian-driven damping,
///   x'' + alpha x' + grad Phi(x) + beta Hess Phi(x) x' = 0,
/// reformulated on the state y = (x, x').
struct DinParams {
    SmoothFn phi;  // twice differentiable; Hessian oracle required
    double alpha = 1.0;
    double beta = 1.0;
    Vec x0;
    Vec v0;
    double T = 40.0;
};

/// 1-D dry-friction oscillator m x'' + alpha x' + beta x in -d|x'| on the
/// state y = (x, x').
struct FrictionParams {
    double m = 1.0;
    double alpha = 0.1;
    double beta = 1.0;
    int n = 1;
    double x0 = 3.0;
    double v0 = 0.0;
    double T = 15.0;
    double ybar = 0.0;  // center of V; requires |beta * ybar| <= 1
    int k = 2000000;    // selection index; delta_k bounds the residual creep speed
};

struct CatalogSystem {
    Scenario scenario;
    LyapunovPair pair;
    EquilibriaDescriptor equilibria;
};

CatalogSystem build_din(const DinParams& p);
CatalogSystem build_friction(const FrictionParams& p);

/// Exact descriptor for catalog systems; residual-thresholded sampler for
/// user scenarios (empty descriptor with a warning when nothing qualifies).
EquilibriaDescriptor equilibria_descriptor(const Scenario& sc, std::uint64_t seed = 0);

/// Event-driven exact propagation for the 1-D friction system.
Propagator friction_oracle_propagator(double m, double alpha, double beta, double h_out = 1e-3);

}  // namespace mflow
