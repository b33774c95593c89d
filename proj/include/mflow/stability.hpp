#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mflow/integrator.hpp"

namespace mflow {

/// Value of the lower Hamiltonian; the infimum over the normal cone diverges
/// to -infinity whenever the cone supports the direction.
struct ExtendedReal {
    bool neg_infinity = false;
    double value = 0.0;

    static ExtendedReal finite(double v) { return {false, v}; }
    static ExtendedReal neg_inf() { return {true, 0.0}; }
};

enum class HamiltonianMode { Exact, Approx };

/// Lower Hamiltonian h(x, zeta) = <zeta, f(x)> - support(G(x), zeta) - cone
/// term, with G = clco A0 (Exact) or F_k (Approx, index k; 0 uses the
/// scenario's k). NegInfinity when the normal-cone support of zeta exceeds
/// the polar tolerance. Requires x in C.
ExtendedReal hamiltonian(const Scenario& sc, const Vec& x, const Vec& zeta, HamiltonianMode mode,
                         int k = 0);

/// Value + subgradient oracles for V and a nonnegative W.
struct LyapunovPair {
    std::function<double(const Vec&)> V;
    std::function<std::vector<Vec>(const Vec&)> subgradients;  // proximal subgradient oracle
    std::function<double(const Vec&)> W;

    /// W = coef * ||x_block - center||^2, enabling closed-form envelopes and
    /// exact distances to W^{-1}(0).
    struct QuadW {
        double coef = 0.0;
        int block_begin = 0, block_len = 0;
        Vec center;
    };
    std::optional<QuadW> w_quad;
};

struct ApproxGapReport {
    double eps = 0.0;  // measured support excess of F_k(x) over clco A0(x)
    ExtendedReal h_exact, h_approx;
    bool both_neg_inf = false;
    bool ok = true;
};

/// Verifies h <= h_k + eps(x) ||zeta|| + 1e-8 with eps(x) measured by support
/// sampling (the test direction is included in the sample). NegInfinity on
/// exactly one side raises an inconsistency error.
ApproxGapReport approx_gap_check(const Scenario& sc, int k, const Vec& x, const Vec& zeta,
                                 std::uint64_t seed = 0);

enum class Verdict { PASS, FAIL, INCONCLUSIVE };
std::string verdict_name(Verdict v);

struct CheckResult {
    std::string check;
    Verdict verdict = Verdict::PASS;
    double worst_margin = 0.0;
    Vec witness;
    nlohmann::json details;
};

struct StabilityReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    nlohmann::json to_json() const;
};

enum class ConditionMode { H1, H2 };

/// Samples h(x, zeta) over the subgradient oracle of V: asserts <= 0 (H1) or
/// <= -W(x) (H2) within the margin tolerance. NegInfinity passes trivially.
/// Reports say "no violation found on N points", never "holds for all of C".
StabilityReport check_condition(const Scenario& sc, const LyapunovPair& pair,
                                const std::vector<Vec>& points, ConditionMode mode,
                                double tau = tol::kHam);

struct DecreaseReport {
    double max_violation = 0.0;
    std::vector<double> series;  // V(x_i) + trapz(W) - V(x_0)
    bool pass = true;
};

/// Lyapunov-pair decrease along a trajectory with trapezoidal quadrature on
/// the trajectory grid.
DecreaseReport lyapunov_decrease(const Trajectory& traj, const LyapunovPair& pair);

/// V(x_i) <= alpha + tol along the trajectory; start-outside error when
/// V(x_0) > alpha.
CheckResult sublevel_invariance(const Trajectory& traj, const LyapunovPair& pair, double alpha);

/// Distance from f(x) to clco A0(x) + N_C(x); zero (within tolerance) exactly
/// on the equilibrium set.
double equilibrium_residual(const Scenario& sc, const Vec& x);

/// Target-set descriptor: an exact convex set in state space, a finite sample
/// list, or both.
struct EquilibriaDescriptor {
    std::optional<ConvexSet> exact;
    std::vector<Vec> samples;

    double distance(const Vec& x) const;
    bool empty() const { return !exact && samples.empty(); }
};

using Propagator = std::function<Trajectory(const Vec& x0, double T)>;

struct ProbeConfig {
    double T = 10.0;
    double lambda = 1e-3;
    double h_max = 1e-3;
    std::optional<StepMode> mode;
    double tau_conv = tol::kConv;
    double tau_eq = tol::kEq;
    int a1_samples = 8;
    int bisect_iters = 12;
    std::uint64_t seed = 0;
    std::optional<Propagator> propagator;  // e.g. the event-driven oracle
    int threads = 0;
};

/// Pointwise-asymptotic-stability probe. (A1) bisects a positive delta per
/// tested (z, eps) such that sampled runs from B(z, delta) ∩ C stay in
/// B(z, eps); (A2) checks convergence of each grid run (tail oscillation) and
/// that its limit is a near-equilibrium point near Z. Non-convergent runs are
/// INCONCLUSIVE, not FAIL.
StabilityReport pas_probe(const Scenario& sc, const EquilibriaDescriptor& Z,
                          const std::vector<Vec>& x0_grid, const std::vector<double>& eps_list,
                          const ProbeConfig& cfg);

/// Semistability evidence: requires H2 on a seed grid, E ⊆ W^{-1}(0) on the
/// sampled equilibria, then runs the PAS probe with Z sampled from W^{-1}(0)
/// and checks W(x(T)) -> 0 and d(x(T); W^{-1}(0)) <= tau along runs.
StabilityReport semistability_report(const Scenario& sc, const LyapunovPair& pair,
                                     const std::vector<Vec>& x0_grid,
                                     const EquilibriaDescriptor& equilibria,
                                     const std::vector<double>& eps_list, const ProbeConfig& cfg);

/// inf_y { W(y) + n ||x - y||^2 }: closed form for quadratic descriptors,
/// shrinking grid search otherwise (dimension <= 3).
double moreau_envelope(const std::function<double(const Vec&)>& W, double n, const Vec& x,
                       const std::optional<LyapunovPair::QuadW>& quad = std::nullopt);

}  // namespace mflow
