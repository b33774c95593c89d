#include "mflow/integrator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "mflow/affine_flow.hpp"
#include "mflow/rng.hpp"
#include "mflow/tolerances.hpp"

namespace mflow {

VectorField VectorField::linear(Mat A, Vec offset) {
    VectorField f;
    f.dim = static_cast<int>(offset.size());
    f.linear_A = A;
    f.linear_offset = offset;
    f.eval = [A, offset](const Vec& x) { return add(A.apply(x), offset); };
    return f;
}

VectorField VectorField::constant(Vec c) {
    VectorField f;
    f.dim = static_cast<int>(c.size());
    f.eval = [c](const Vec&) { return c; };
    return f;
}

VectorField VectorField::generic(int dim, std::function<Vec(const Vec&)> fn) {
    VectorField f;
    f.dim = dim;
    f.eval = std::move(fn);
    return f;
}

StepMode step_mode_from_string(const std::string& s) {
    if (s == "rk4") return StepMode::RK4;
    if (s == "split") return StepMode::Split;
    if (s == "stiff_exact") return StepMode::StiffExact;
    fail(Err::SchemaError, "unknown step mode: " + s);
}

std::string step_mode_name(StepMode m) {
    switch (m) {
        case StepMode::RK4: return "rk4";
        case StepMode::Split: return "split";
        case StepMode::StiffExact: return "stiff_exact";
    }
    return "?";
}

void validate_scenario(const Scenario& sc, std::uint64_t seed) {
    if (!(sc.T > 0.0)) fail(Err::ConstructionError, "scenario horizon must be > 0");
    if (!sc.dec.C.contains(sc.x0))
        fail(Err::ConstructionError, "scenario initial state is outside cl(dom A)");
    if (sc.rho > 0.0) {
        Rng rng = seeded_stream(seed, "scenario-mf-check");
        for (int i = 0; i < 256; ++i) {
            Vec y = add(sc.x0, rng.ball_point(sc.x0.size(), sc.rho));
            if (norm(sc.f.eval(y)) > sc.M_f * (1.0 + 1e-9))
                fail(Err::ConstructionError, "declared M_f violated on the sampled ball");
        }
    }
}

Vec Trajectory::state_at(double time) const {
    if (t.empty()) fail(Err::ArgumentError, "empty trajectory");
    if (time <= t.front()) return x.front();
    if (time >= t.back()) return x.back();
    auto it = std::lower_bound(t.begin(), t.end(), time);
    std::size_t hi = static_cast<std::size_t>(it - t.begin());
    std::size_t lo = hi - 1;
    double w = (time - t[lo]) / (t[hi] - t[lo]);
    Vec r = x[lo];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += w * (x[hi][i] - x[lo][i]);
    return r;
}

namespace {

struct FieldEval {
    const Scenario& sc;
    double lambda;
    bool penalty_active;

    Vec operator()(const Vec& x) const {
        Vec r = sc.f.eval(x);
        axpy(r, -1.0, sc.family.eval_psi(sc.k, x));
        if (penalty_active) {
            Vec p = sc.dec.C.project(x);
            axpy(r, -1.0 / lambda, sub(x, p));
        }
        return r;
    }
};

void record_step(Trajectory& traj, const Scenario& sc, const FieldEval& field, double t,
                 const Vec& x, double lambda) {
    if (!all_finite(x)) fail(Err::BlowUp, "non-finite state at t=" + std::to_string(t));
    double d = sc.dec.C.distance(x);
    double pen = field.penalty_active ? d / lambda : 0.0;
    const double beta = sc.beta_bound();
    if (field.penalty_active && pen > beta * (1.0 - std::exp(-t / lambda)) + tol::kPen)
        fail(Err::IntegratorDiagnostic,
             "penalty bound violated at t=" + std::to_string(t) +
                 " (step size too large or inconsistent M_f/b)");
    Vec vel = field(x);
    traj.worst_velocity = std::max(traj.worst_velocity, norm(vel));
    if (sc.rho > 0.0 && dist(x, sc.x0) > sc.rho) traj.exited_rho = true;
    if (field.penalty_active && d > lambda * beta * (1.0 + 1e-9)) traj.inconsistent_regime += 1;
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.v.push_back(std::move(vel));
    traj.penalty.push_back(pen);
    traj.dist_C.push_back(d);
}

Vec rk4_step(const FieldEval& field, const Vec& x, double h) {
    Vec k1 = field(x);
    Vec x2 = x;
    axpy(x2, 0.5 * h, k1);
    Vec k2 = field(x2);
    Vec x3 = x;
    axpy(x3, 0.5 * h, k2);
    Vec k3 = field(x3);
    Vec x4 = x;
    axpy(x4, h, k3);
    Vec k4 = field(x4);
    Vec out = x;
    axpy(out, h / 6.0, k1);
    axpy(out, h / 3.0, k2);
    axpy(out, h / 3.0, k3);
    axpy(out, h / 6.0, k4);
    return out;
}

Trajectory integrate_rk4(const Scenario& sc, double lambda, double h_max, bool split) {
    const bool penalty_active = sc.dec.C.kind() != ConvexSet::Kind::WholeSpace;
    double h_eff = h_max;
    if (penalty_active && !split) h_eff = std::min(h_max, lambda / 4.0);
    int n = std::max(1, static_cast<int>(std::ceil(sc.T / h_eff - 1e-12)));
    double h = sc.T / n;

    FieldEval field{sc, lambda, penalty_active};
    FieldEval smooth_field{sc, lambda, false};

    auto penalty_halfstep = [&](Vec& x, double tau) {
        if (!penalty_active) return;
        Vec p = sc.dec.C.project(x);
        double decay = std::exp(-tau / lambda);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = p[i] + (x[i] - p[i]) * decay;
    };

    Trajectory traj;
    traj.lambda = lambda;
    traj.k = sc.k;
    traj.t.reserve(static_cast<std::size_t>(n) + 1);
    Vec x = sc.x0;
    record_step(traj, sc, field, 0.0, x, lambda);
    for (int i = 1; i <= n; ++i) {
        if (split) {
            penalty_halfstep(x, 0.5 * h);
            x = rk4_step(smooth_field, x, h);
            penalty_halfstep(x, 0.5 * h);
        } else {
            x = rk4_step(field, x, h);
        }
        record_step(traj, sc, field, i * h, x, lambda);
    }
    return traj;
}

// Exact propagation for affine companion dynamics with the scalar block norm
// selection: within each selection piece the full system is a damped linear
// oscillator solved in closed form; piece boundaries are located on the
// closed-form velocity.
Trajectory integrate_stiff_exact(const Scenario& sc, double lambda, double h_out) {
    if (sc.dim != 2 || !sc.f.linear_A || !sc.f.linear_offset)
        fail(Err::Unsupported, "stiff_exact needs 2-d affine dynamics");
    if (sc.family.family_kind() != LipschitzFamily::Kind::BlockScaledNorm ||
        sc.family.block_begin() != 1 || sc.family.block_len() != 1)
        fail(Err::Unsupported, "stiff_exact needs a scalar velocity-block norm family");
    if (sc.dec.C.kind() != ConvexSet::Kind::WholeSpace)
        fail(Err::Unsupported, "stiff_exact does not handle constrained domains");
    const Mat& A = *sc.f.linear_A;
    const Vec& off = *sc.f.linear_offset;
    if (A(0, 0) != 0.0 || A(0, 1) != 1.0 || off[0] != 0.0)
        fail(Err::Unsupported, "stiff_exact needs companion-form dynamics");

    const double delta = sc.family.delta(sc.k);
    const double cs = sc.family.block_scale();
    const double K = -A(1, 0);
    const double damp0 = -A(1, 1);
    const double f2 = off[1];

    // selection pieces over v: slope/intercept of the scaled norm selection
    struct Piece {
        double slope, intercept, lo, hi;
    };
    const double inf = std::numeric_limits<double>::infinity();
    const Piece pieces[5] = {
        {0.0, -cs, -inf, -delta},
        {2.0 * cs / delta, cs, -delta, -0.5 * delta},
        {0.0, 0.0, -0.5 * delta, 0.5 * delta},
        {2.0 * cs / delta, -cs, 0.5 * delta, delta},
        {0.0, cs, delta, inf},
    };
    auto flow_for = [&](int p) {
        return LinearOscFlow{K, damp0 + pieces[p].slope, f2 - pieces[p].intercept};
    };
    auto accel_full = [&](double xx, double vv) {
        double mag = std::abs(vv) >= delta
                         ? cs
                         : std::max(2.0 * (std::abs(vv) / delta) - 1.0, 0.0) * cs;
        double sel = vv >= 0.0 ? mag : -mag;
        return A(1, 0) * xx + A(1, 1) * vv + f2 - sel;
    };
    auto classify = [&](double vv, double vdot) {
        int p = vv < -delta ? 0 : vv < -0.5 * delta ? 1 : vv < 0.5 * delta ? 2 : vv < delta ? 3 : 4;
        // on-boundary states pick the piece in the direction of motion
        for (int b = 0; b < 4; ++b) {
            double level = b == 0 ? -delta : b == 1 ? -0.5 * delta : b == 2 ? 0.5 * delta : delta;
            if (vv == level) p = vdot > 0.0 ? b + 1 : b;
        }
        return p;
    };

    FieldEval field{sc, lambda, false};
    Trajectory traj;
    traj.lambda = lambda;
    traj.k = sc.k;

    double x = sc.x0[0], v = sc.x0[1], t = 0.0;
    record_step(traj, sc, field, 0.0, Vec{x, v}, lambda);
    int n_out = std::max(1, static_cast<int>(std::ceil(sc.T / h_out - 1e-12)));
    double h = sc.T / n_out;
    int switches = 0;
    for (int i = 1; i <= n_out; ++i) {
        double t_target = i * h;
        while (t < t_target - 1e-15 * sc.T) {
            int p = classify(v, accel_full(x, v));
            LinearOscFlow flow = flow_for(p);
            double horizon = t_target - t;
            double disc = flow.damping * flow.damping - 4.0 * flow.stiffness;
            double period = disc < 0.0 ? 4.0 * M_PI / std::sqrt(-disc) : 0.0;
            std::optional<double> best;
            double best_level = 0.0;
            for (double level : {pieces[p].lo, pieces[p].hi}) {
                if (!std::isfinite(level)) continue;
                auto g = [&](double s) { return flow.at(x, v, s).v - level; };
                auto hit = first_crossing(g, horizon * 1e-15, horizon, period);
                if (hit && (!best || *hit < *best)) {
                    best = hit;
                    best_level = level;
                }
            }
            if (best) {
                auto st = flow.at(x, v, *best);
                x = st.x;
                v = best_level;  // snap onto the boundary
                t += *best;
                if (++switches > 1000000)
                    fail(Err::NotConverged, "stiff_exact exceeded the piece-switch budget");
            } else {
                auto st = flow.at(x, v, horizon);
                x = st.x;
                v = st.v;
                t = t_target;
            }
        }
        t = t_target;
        record_step(traj, sc, field, t, Vec{x, v}, lambda);
    }
    return traj;
}

}  // namespace

Trajectory integrate_regularized(const Scenario& sc, double lambda, double h_max,
                                 std::optional<StepMode> mode) {
    if (!(lambda > 0.0)) fail(Err::ArgumentError, "lambda must be > 0");
    if (!(h_max > 0.0)) fail(Err::ArgumentError, "h_max must be > 0");
    StepMode m = mode.value_or(sc.default_mode);
    switch (m) {
        case StepMode::RK4: return integrate_rk4(sc, lambda, h_max, false);
        case StepMode::Split: return integrate_rk4(sc, lambda, h_max, true);
        case StepMode::StiffExact: return integrate_stiff_exact(sc, lambda, h_max);
    }
    fail(Err::ArgumentError, "unreachable step mode");
}

RefineResult refine_lambda(const Scenario& sc, const std::vector<double>& schedule, double h_max,
                           std::optional<StepMode> mode) {
    if (schedule.size() < 2) fail(Err::ArgumentError, "lambda schedule needs >= 2 entries");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            fail(Err::ArgumentError, "lambda schedule must be strictly decreasing");

    RefineResult res;
    Trajectory prev;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        Trajectory cur;
        try {
            cur = integrate_regularized(sc, schedule[i], h_max, mode);
        } catch (const Error& e) {
            fail(e.code, "lambda=" + std::to_string(schedule[i]) + ": " + e.what());
        }
        if (i > 0) {
            double gap = 0.0;
            for (std::size_t j = 0; j < prev.size(); ++j)
                gap = std::max(gap, dist(prev.x[j], cur.state_at(prev.t[j])));
            res.gaps.push_back(gap);
        }
        prev = std::move(cur);
    }
    for (std::size_t i = 0; i + 1 < res.gaps.size(); ++i) {
        if (res.gaps[i + 1] > res.gaps[i] + 1e-12 && res.gaps[i + 1] > 1e-10)
            res.gaps_flagged = true;
        if (res.gaps[i] > 1e-13 && res.gaps[i + 1] > 1e-13)
            res.orders.push_back(std::log(res.gaps[i] / res.gaps[i + 1]) /
                                 std::log(schedule[i] / schedule[i + 1]));
        else
            res.orders.push_back(std::numeric_limits<double>::infinity());
    }
    res.finest = std::move(prev);
    return res;
}

void extract_multipliers(Trajectory& traj, const Scenario& sc) {
    traj.g.resize(traj.size());
    traj.eta.resize(traj.size());
    double worst = 0.0;
    std::size_t worst_idx = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Vec& xi = traj.x[i];
        Vec psi = sc.family.eval_psi(sc.k, xi);
        Value val = sc.dec.F.eval(xi);
        traj.g[i] = val.nearest_point(psi);
        if (traj.lambda > 0.0 && sc.dec.C.kind() != ConvexSet::Kind::WholeSpace) {
            Vec p = sc.dec.C.project(xi);
            traj.eta[i] = scale(sub(xi, p), 1.0 / traj.lambda);
        } else {
            traj.eta[i] = zeros(xi.size());
        }
        double slack = norm(traj.eta[i]) - norm(sub(sc.f.eval(xi), traj.g[i]));
        if (slack > worst) {
            worst = slack;
            worst_idx = i;
        }
    }
    traj.multipliers_filled = true;
    if (worst > tol::kMult)
        fail(Err::MultiplierBound, "multiplier bound violated at step " +
                                       std::to_string(worst_idx) + " by " + std::to_string(worst));
}

Trajectory integrate_friction_oracle(double m, double alpha, double beta, double x0, double v0,
                                     double T, double h_out) {
    if (!(m > 0.0) || alpha < 0.0 || !(beta > 0.0) || !(T > 0.0))
        fail(Err::ArgumentError, "friction oracle needs m > 0, alpha >= 0, beta > 0, T > 0");

    Trajectory traj;
    traj.lambda = 0.0;
    traj.k = 0;

    auto accel = [&](double x, double v, double S) {
        return (-alpha * v - beta * x - S) / m;
    };
    auto record = [&](double t, double x, double v, double a) {
        traj.t.push_back(t);
        traj.x.push_back(Vec{x, v});
        traj.v.push_back(Vec{v, a});
        traj.penalty.push_back(0.0);
        traj.dist_C.push_back(0.0);
        traj.worst_velocity = std::max(traj.worst_velocity, norm(Vec{v, a}));
    };

    double x = x0, v = v0, t = 0.0;
    bool stuck = v == 0.0 && std::abs(beta * x) <= 1.0;
    double S = 0.0;
    if (!stuck) {
        if (v > 0.0)
            S = 1.0;
        else if (v < 0.0)
            S = -1.0;
        else
            S = beta * x > 1.0 ? -1.0 : 1.0;  // slip starts against the spring pull
    }
    record(0.0, x, v, stuck ? 0.0 : accel(x, v, S));

    int n_out = std::max(1, static_cast<int>(std::ceil(T / h_out - 1e-12)));
    double h = T / n_out;
    int events = 0;
    const int event_cap = 10000;

    for (int i = 1; i <= n_out; ++i) {
        double t_target = i * h;
        while (!stuck && t < t_target - 1e-15 * T) {
            LinearOscFlow flow{beta / m, alpha / m, -S / m};
            double horizon = t_target - t;
            double disc = flow.damping * flow.damping - 4.0 * flow.stiffness;
            double period = disc < 0.0 ? 4.0 * M_PI / std::sqrt(-disc) : 0.0;
            auto g = [&](double s) { return flow.at(x, v, s).v; };
            auto hit = first_crossing(g, horizon * 1e-15, horizon, period);
            if (!hit) {
                auto st = flow.at(x, v, horizon);
                x = st.x;
                v = st.v;
                t = t_target;
                break;
            }
            auto st = flow.at(x, v, *hit);
            x = st.x;
            v = 0.0;
            t += *hit;
            if (++events > event_cap)
                fail(Err::OracleFailure, "friction oracle exceeded the event cap");
            if (std::abs(beta * x) <= 1.0) {
                stuck = true;  // force balance inside the friction interval
                record(t, x, 0.0, 0.0);
            } else {
                S = beta * x > 1.0 ? -1.0 : 1.0;
                record(t, x, 0.0, accel(x, 0.0, S));
            }
        }
        t = t_target;
        record(t, x, v, stuck ? 0.0 : accel(x, v, S));
    }
    return traj;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    if (!traj.multipliers_filled)
        fail(Err::ArgumentError, "trajectory CSV export needs extracted multipliers");
    const std::size_t n = traj.x.empty() ? 0 : traj.x.front().size();
    std::string line = "t";
    for (std::size_t i = 1; i <= n; ++i) line += ",x_" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) line += ",v_" + std::to_string(i);
    line += ",penalty,dist_C,eta_norm";
    for (std::size_t i = 1; i <= n; ++i) line += ",g_" + std::to_string(i);
    line += "\n";
    os << line;
    for (std::size_t r = 0; r < traj.size(); ++r) {
        std::string row;
        append_double(row, traj.t[r]);
        for (double c : traj.x[r]) {
            row += ',';
            append_double(row, c);
        }
        for (double c : traj.v[r]) {
            row += ',';
            append_double(row, c);
        }
        row += ',';
        append_double(row, traj.penalty[r]);
        row += ',';
        append_double(row, traj.dist_C[r]);
        row += ',';
        append_double(row, norm(traj.eta[r]));
        for (double c : traj.g[r]) {
            row += ',';
            append_double(row, c);
        }
        row += '\n';
        os << row;
    }
}

}  // namespace mflow
