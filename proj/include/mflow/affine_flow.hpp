#pragma once

#include <functional>
#include <optional>

#include "mflow/error.hpp"
#include "mflow/vec.hpp"

namespace mflow {

/// Exact flow of the second-order scalar system
///   x'' + damping x' + stiffness x = forcing,
/// with state (x, v). Requires stiffness > 0. Covers underdamped, overdamped
/// and critically damped branches.
struct LinearOscFlow {
    double stiffness = 1.0;
    double damping = 0.0;
    double forcing = 0.0;

    struct State {
        double x, v;
    };

    State at(double x0, double v0, double t) const;
    double accel(double x, double v) const { return forcing - damping * v - stiffness * x; }
    /// Magnitude of the fastest characteristic rate (for time scaling).
    double fast_rate() const;
};

/// First root of g in (t_min, t_max], located by a geometric+linear scan and
/// bisection refinement. osc_period > 0 adds period/16-spaced samples so
/// oscillatory g cannot slip between scan points.
std::optional<double> first_crossing(const std::function<double(double)>& g, double t_min,
                                     double t_max, double osc_period = 0.0);

}  // namespace mflow
