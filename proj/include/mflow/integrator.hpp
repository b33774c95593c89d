#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "mflow/selection.hpp"

namespace mflow {

struct VectorField {
    int dim = 0;
    std::function<Vec(const Vec&)> eval;
    // populated for affine fields; enables the exact stepping mode
    std::optional<Mat> linear_A;
    std::optional<Vec> linear_offset;

    static VectorField linear(Mat A, Vec offset);
    static VectorField constant(Vec c);
    static VectorField generic(int dim, std::function<Vec(const Vec&)> f);
};

enum class StepMode { RK4, Split, StiffExact };

StepMode step_mode_from_string(const std::string& s);
std::string step_mode_name(StepMode m);

/// One integrable problem: dynamics f, decomposition (F, C, b), family index
/// k, initial state and horizon, with the declared local bound M_f of f on
/// B(x0, rho).
struct Scenario {
    std::string name;
    int dim = 0;
    VectorField f;
    double M_f = 0.0;
    double rho = 0.0;
    OperatorDecomposition dec;
    LipschitzFamily family;
    int k = 1;
    Vec x0;
    double T = 1.0;
    StepMode default_mode = StepMode::RK4;

    struct FrictionTag {
        double m, alpha, beta;
    };
    std::optional<FrictionTag> friction;  // set by the catalog friction builder

    double beta_bound() const { return M_f + dec.b; }
};

/// Checks x0 in C and the declared M_f against samples of ||f|| on B(x0, rho).
void validate_scenario(const Scenario& sc, std::uint64_t seed = 0);

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec> x;
    std::vector<Vec> v;
    std::vector<Vec> g;    // filled by extract_multipliers
    std::vector<Vec> eta;  // filled by extract_multipliers
    std::vector<double> penalty;  // (1/lambda) d(x; C)
    std::vector<double> dist_C;
    double lambda = 0.0;
    int k = 0;
    bool multipliers_filled = false;
    bool exited_rho = false;        // left the ball where M_f was declared
    int inconsistent_regime = 0;    // steps with d(x;C) > lambda * beta
    double worst_velocity = 0.0;    // max ||xdot|| over accepted steps

    std::size_t size() const { return t.size(); }
    /// Linear interpolation onto an arbitrary time in [t.front(), t.back()].
    Vec state_at(double time) const;
};

/// Integrates the penalty-regularized system
///   xdot = f(x) - psi_k(x) - (1/lambda)(x - proj_C(x))
/// from sc.x0 over [0, sc.T].
///
/// RK4: classical 4-stage explicit stepping with clamp h <= min(h_max,
/// lambda/4) while the penalty is active. Split: Strang splitting with exact
/// exponential decay toward the frozen projection, explicit treatment of
/// f - psi_k. StiffExact: exact piecewise-affine propagation, available for
/// affine companion dynamics with a scalar block norm family and C = R^n.
///
/// Enforces the penalty estimate (1/lambda) d(x;C) <= beta (1 - e^{-t/lambda})
/// + tol and records per-step diagnostics.
Trajectory integrate_regularized(const Scenario& sc, double lambda, double h_max,
                                 std::optional<StepMode> mode = std::nullopt);

struct RefineResult {
    Trajectory finest;
    std::vector<double> gaps;    // sup-norm gaps between consecutive runs
    std::vector<double> orders;  // empirical order per refinement step
    bool gaps_flagged = false;   // a gap failed to decrease
};

/// Integrates for each lambda in the strictly decreasing schedule and reports
/// sup-norm gaps between consecutive trajectories on the coarser grid.
RefineResult refine_lambda(const Scenario& sc, const std::vector<double>& schedule, double h_max,
                           std::optional<StepMode> mode = std::nullopt);

/// Fills g_i (nearest point of clco A0(x_i) to psi_k(x_i)) and eta_i =
/// (1/lambda)(x_i - proj_C(x_i)); enforces ||eta|| <= ||f - g|| + tol.
void extract_multipliers(Trajectory& traj, const Scenario& sc);

/// Event-driven exact integration of m x'' + alpha x' + beta x in -d|x'|
/// (1-D dry friction). Between events the linear ODE is solved in closed
/// form; velocity zero-crossings are located by bisection; the mass sticks
/// permanently once x' = 0 with |beta x| <= 1.
Trajectory integrate_friction_oracle(double m, double alpha, double beta, double x0, double v0,
                                     double T, double h_out = 1e-3);

/// CSV with the fixed header t, x_1..x_n, v_1..v_n, penalty, dist_C,
/// eta_norm, g_1..g_n. Requires multipliers to be filled.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace mflow
