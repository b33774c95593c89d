#include "mflow/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mflow/parallel.hpp"
#include "mflow/rng.hpp"

namespace mflow {

ExtendedReal hamiltonian(const Scenario& sc, const Vec& x, const Vec& zeta, HamiltonianMode mode,
                         int k) {
    if (!sc.dec.C.contains(x)) fail(Err::DomainError, "hamiltonian evaluated outside C");
    double cone = sc.dec.C.cone_cap_ball_support(x, zeta);
    if (cone > tol::kCone) return ExtendedReal::neg_inf();
    Value G = mode == HamiltonianMode::Exact ? sc.dec.F.eval(x)
                                             : sc.family.eval_Fk(k > 0 ? k : sc.k, x);
    return ExtendedReal::finite(dot(zeta, sc.f.eval(x)) - G.support(zeta));
}

ApproxGapReport approx_gap_check(const Scenario& sc, int k, const Vec& x, const Vec& zeta,
                                 std::uint64_t seed) {
    ApproxGapReport rep;
    rep.h_exact = hamiltonian(sc, x, zeta, HamiltonianMode::Exact);
    rep.h_approx = hamiltonian(sc, x, zeta, HamiltonianMode::Approx, k);
    if (rep.h_exact.neg_infinity != rep.h_approx.neg_infinity)
        fail(Err::ArgumentError,
             "hamiltonian cone inconsistency: NegInfinity on exactly one side");

    auto dirs = unit_directions(static_cast<std::size_t>(sc.dim), tol::kSupportDirs, seed);
    double nz = norm(zeta);
    if (nz > 0.0) dirs.push_back(scale(zeta, 1.0 / nz));
    Value fk = sc.family.eval_Fk(k > 0 ? k : sc.k, x);
    Value base = sc.dec.F.eval(x);
    rep.eps = std::max(0.0, support_excess(fk, base, dirs));

    if (rep.h_exact.neg_infinity) {
        rep.both_neg_inf = true;
        rep.ok = true;
        return rep;
    }
    rep.ok = rep.h_exact.value <= rep.h_approx.value + rep.eps * nz + 1e-8;
    return rep;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::PASS: return "PASS";
        case Verdict::FAIL: return "FAIL";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

bool StabilityReport::all_pass() const {
    for (const auto& c : checks)
        if (c.verdict != Verdict::PASS) return false;
    return true;
}

nlohmann::json StabilityReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json j;
        j["check"] = c.check;
        j["verdict"] = verdict_name(c.verdict);
        j["worst_margin"] = c.worst_margin;
        j["witness"] = c.witness;
        j["details"] = c.details;
        arr.push_back(j);
    }
    return nlohmann::json{{"checks", arr}};
}

StabilityReport check_condition(const Scenario& sc, const LyapunovPair& pair,
                                const std::vector<Vec>& points, ConditionMode mode, double tau) {
    StabilityReport rep;
    CheckResult res;
    res.check = mode == ConditionMode::H1 ? "H1" : "H2";
    res.worst_margin = -std::numeric_limits<double>::infinity();
    int skipped = 0, neg_inf_count = 0, evaluated = 0;
    for (const auto& x : points) {
        auto subs = pair.subgradients(x);
        if (subs.empty()) {
            ++skipped;  // skipped-with-warning
            continue;
        }
        for (const auto& zeta : subs) {
            ExtendedReal h = hamiltonian(sc, x, zeta, HamiltonianMode::Exact);
            ++evaluated;
            if (h.neg_infinity) {
                ++neg_inf_count;  // passes trivially
                continue;
            }
            double margin = h.value + (mode == ConditionMode::H2 ? pair.W(x) : 0.0);
            if (margin > res.worst_margin) {
                res.worst_margin = margin;
                res.witness = x;
            }
        }
    }
    res.verdict = res.worst_margin <= tau ? Verdict::PASS : Verdict::FAIL;
    res.details = {{"points", points.size()},
                   {"evaluated", evaluated},
                   {"skipped_empty_oracle", skipped},
                   {"neg_infinity", neg_inf_count},
                   {"note", "no violation found on sampled points; not a global certificate"}};
    rep.checks.push_back(std::move(res));
    return rep;
}

DecreaseReport lyapunov_decrease(const Trajectory& traj, const LyapunovPair& pair) {
    DecreaseReport rep;
    if (traj.size() == 0) fail(Err::ArgumentError, "empty trajectory");
    double v0 = pair.V(traj.x.front());
    double acc = 0.0;
    double w_prev = pair.W(traj.x.front());
    rep.series.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (i > 0) {
            double w = pair.W(traj.x[i]);
            acc += 0.5 * (w_prev + w) * (traj.t[i] - traj.t[i - 1]);
            w_prev = w;
        }
        double d = pair.V(traj.x[i]) + acc - v0;
        rep.series.push_back(d);
        rep.max_violation = std::max(rep.max_violation, d);
    }
    rep.pass = rep.max_violation <= tol::kLyap;
    return rep;
}

CheckResult sublevel_invariance(const Trajectory& traj, const LyapunovPair& pair, double alpha) {
    if (traj.size() == 0) fail(Err::ArgumentError, "empty trajectory");
    if (pair.V(traj.x.front()) > alpha)
        fail(Err::StartOutside, "sublevel invariance requires V(x0) <= alpha");
    CheckResult res;
    res.check = "sublevel_invariance";
    res.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double m = pair.V(traj.x[i]) - alpha;
        if (m > res.worst_margin) {
            res.worst_margin = m;
            res.witness = traj.x[i];
        }
    }
    res.verdict = res.worst_margin <= tol::kLyap ? Verdict::PASS : Verdict::FAIL;
    res.details = {{"alpha", alpha}, {"steps", traj.size()}};
    return res;
}

double equilibrium_residual(const Scenario& sc, const Vec& x) {
    Value val = clco_A0(sc.dec, x);
    Vec w = sc.f.eval(x);
    if (sc.dec.C.kind() == ConvexSet::Kind::WholeSpace || sc.dec.C.strictly_inside(x, tol::kSet)) {
        return dist(w, val.nearest_point(w));
    }
    // alternating minimization of ||w - g - n|| over g in the value and n in
    // the normal cone at x
    Vec gv = val.nearest_point(w);
    Vec nv = zeros(w.size());
    for (int it = 0; it < 500; ++it) {
        nv = sc.dec.C.normal_project(x, sub(w, gv));
        Vec gv2 = val.nearest_point(sub(w, nv));
        double moved = dist(gv2, gv);
        gv = std::move(gv2);
        if (moved < 1e-13) break;
    }
    Vec r = sub(w, gv);
    axpy(r, -1.0, nv);
    return norm(r);
}

double EquilibriaDescriptor::distance(const Vec& x) const {
    if (exact) return exact->distance(x);
    if (samples.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) best = std::min(best, dist(x, s));
    return best;
}

namespace {

Propagator make_propagator(const Scenario& sc, const ProbeConfig& cfg) {
    if (cfg.propagator) return *cfg.propagator;
    Scenario base = sc;
    double lambda = cfg.lambda, h_max = cfg.h_max;
    auto mode = cfg.mode;
    return [base, lambda, h_max, mode](const Vec& x0, double T) {
        Scenario s = base;
        s.x0 = x0;
        s.T = T;
        return integrate_regularized(s, lambda, h_max, mode);
    };
}

double tail_oscillation(const Trajectory& traj, double window_start) {
    // bounding-box diagonal of the states in the time window (upper bound on
    // the diameter)
    std::size_t n = traj.x.front().size();
    Vec lo(n, std::numeric_limits<double>::infinity());
    Vec hi(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.t[i] < window_start) continue;
        for (std::size_t j = 0; j < n; ++j) {
            lo[j] = std::min(lo[j], traj.x[i][j]);
            hi[j] = std::max(hi[j], traj.x[i][j]);
        }
    }
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = hi[j] - lo[j];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

StabilityReport pas_probe(const Scenario& sc, const EquilibriaDescriptor& Z,
                          const std::vector<Vec>& x0_grid, const std::vector<double>& eps_list,
                          const ProbeConfig& cfg) {
    if (Z.samples.empty()) fail(Err::ArgumentError, "pas_probe needs sampled target points");
    for (const auto& z : Z.samples)
        if (equilibrium_residual(sc, z) > cfg.tau_eq)
            fail(Err::ArgumentError, "pas_probe target point is not an equilibrium");

    Propagator run = make_propagator(sc, cfg);
    StabilityReport rep;

    // (A1) Lyapunov stability of each tested z: bisect delta per epsilon.
    auto dirs = unit_directions(static_cast<std::size_t>(sc.dim),
                                static_cast<std::size_t>(cfg.a1_samples), cfg.seed);
    for (const auto& z : Z.samples) {
        for (double eps : eps_list) {
            auto stays_within = [&](double delta) {
                std::vector<char> ok(dirs.size(), 1);
                parallel_for(
                    static_cast<int>(dirs.size()),
                    [&](int i) {
                        Vec ic = z;
                        axpy(ic, delta, dirs[static_cast<std::size_t>(i)]);
                        ic = sc.dec.C.project(ic);
                        Trajectory traj = run(ic, cfg.T);
                        for (const auto& xs : traj.x)
                            if (dist(xs, z) > eps) {
                                ok[static_cast<std::size_t>(i)] = 0;
                                return;
                            }
                    },
                    cfg.threads);
                return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
            };
            double found = 0.0;
            if (stays_within(eps)) {
                found = eps;
            } else {
                double lo = 0.0, hi = eps;
                for (int it = 0; it < cfg.bisect_iters; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (stays_within(mid))
                        lo = mid;
                    else
                        hi = mid;
                }
                found = lo;
            }
            CheckResult res;
            res.check = "A1_stability";
            res.witness = z;
            res.worst_margin = -found;  // negative margin = found a positive delta
            res.verdict = found > 0.0 ? Verdict::PASS : Verdict::FAIL;
            res.details = {{"epsilon", eps}, {"delta", found}};
            rep.checks.push_back(std::move(res));
        }
    }

    // (A2) Convergence of each grid run to a point of Z.
    std::vector<CheckResult> a2(x0_grid.size());
    parallel_for(
        static_cast<int>(x0_grid.size()),
        [&](int i) {
            const Vec& x0 = x0_grid[static_cast<std::size_t>(i)];
            CheckResult res;
            res.check = "A2_convergence";
            res.witness = x0;
            Trajectory traj = run(sc.dec.C.project(x0), cfg.T);
            double osc = tail_oscillation(traj, 0.9 * cfg.T);
            Vec limit = traj.x.back();
            if (osc > cfg.tau_conv) {
                res.verdict = Verdict::INCONCLUSIVE;
                res.worst_margin = osc;
                res.details = {{"tail_oscillation", osc}, {"note", "run not converged at T"}};
            } else {
                double resid = equilibrium_residual(sc, limit);
                double dz = Z.distance(limit);
                bool pass = resid <= cfg.tau_eq && dz <= cfg.tau_conv;
                res.verdict = pass ? Verdict::PASS : Verdict::FAIL;
                res.worst_margin = std::max(resid - cfg.tau_eq, dz - cfg.tau_conv);
                res.details = {{"limit", limit},
                               {"residual", resid},
                               {"distance_to_target", dz},
                               {"tail_oscillation", osc}};
            }
            a2[static_cast<std::size_t>(i)] = std::move(res);
        },
        cfg.threads);
    for (auto& r : a2) rep.checks.push_back(std::move(r));
    return rep;
}

StabilityReport semistability_report(const Scenario& sc, const LyapunovPair& pair,
                                     const std::vector<Vec>& x0_grid,
                                     const EquilibriaDescriptor& equilibria,
                                     const std::vector<double>& eps_list, const ProbeConfig& cfg) {
    StabilityReport rep;

    // (H2) on a seed grid drawn from the equilibria samples and the run grid.
    std::vector<Vec> seed_points = equilibria.samples;
    for (const auto& x : x0_grid)
        if (sc.dec.C.contains(x)) seed_points.push_back(x);
    StabilityReport h2 = check_condition(sc, pair, seed_points, ConditionMode::H2);
    rep.checks.insert(rep.checks.end(), h2.checks.begin(), h2.checks.end());
    if (!h2.all_pass()) return rep;  // precondition failed; report and stop

    // E ⊆ W^{-1}(0) on the sampled equilibria.
    {
        CheckResult res;
        res.check = "E_subset_W_zero";
        res.worst_margin = 0.0;
        for (const auto& z : equilibria.samples) {
            double w = pair.W(z);
            if (w > res.worst_margin) {
                res.worst_margin = w;
                res.witness = z;
            }
        }
        res.verdict = res.worst_margin <= cfg.tau_eq ? Verdict::PASS : Verdict::FAIL;
        res.details = {{"samples", equilibria.samples.size()}};
        rep.checks.push_back(std::move(res));
    }

    // Z = sampled W^{-1}(0), gated by the equilibrium residual (the PAS probe
    // precondition).
    EquilibriaDescriptor Z;
    Z.exact = equilibria.exact;
    for (const auto& z : equilibria.samples)
        if (pair.W(z) <= cfg.tau_eq && equilibrium_residual(sc, z) <= cfg.tau_eq)
            Z.samples.push_back(z);
    if (Z.samples.empty()) {
        CheckResult res;
        res.check = "W_zero_sampling";
        res.verdict = Verdict::FAIL;
        res.details = {{"note", "no W-zero equilibrium samples available"}};
        rep.checks.push_back(std::move(res));
        return rep;
    }

    StabilityReport pas = pas_probe(sc, Z, x0_grid, eps_list, cfg);
    rep.checks.insert(rep.checks.end(), pas.checks.begin(), pas.checks.end());

    // W(x(t)) -> 0 and d(x(T); W^{-1}(0)) along runs.
    Propagator run = make_propagator(sc, cfg);
    std::vector<CheckResult> wchecks(x0_grid.size());
    parallel_for(
        static_cast<int>(x0_grid.size()),
        [&](int i) {
            Trajectory traj = run(sc.dec.C.project(x0_grid[static_cast<std::size_t>(i)]), cfg.T);
            double w_final = pair.W(traj.x.back());
            double d_wzero;
            if (pair.w_quad) {
                d_wzero = std::sqrt(std::max(0.0, w_final / pair.w_quad->coef));
            } else {
                d_wzero = Z.distance(traj.x.back());
            }
            CheckResult res;
            res.check = "W_decay";
            res.witness = x0_grid[static_cast<std::size_t>(i)];
            res.worst_margin = std::max(w_final - cfg.tau_conv, d_wzero - cfg.tau_conv);
            res.verdict = res.worst_margin <= 0.0 ? Verdict::PASS : Verdict::FAIL;
            res.details = {{"W_final", w_final}, {"dist_W_zero", d_wzero}};
            wchecks[static_cast<std::size_t>(i)] = std::move(res);
        },
        cfg.threads);
    for (auto& r : wchecks) rep.checks.push_back(std::move(r));
    return rep;
}

double moreau_envelope(const std::function<double(const Vec&)>& W, double n, const Vec& x,
                       const std::optional<LyapunovPair::QuadW>& quad) {
    if (!(n > 0.0)) fail(Err::ArgumentError, "moreau envelope needs n > 0");
    if (quad) {
        double c = quad->coef;
        double s = 0.0;
        for (int i = quad->block_begin; i < quad->block_begin + quad->block_len; ++i) {
            double d = x[static_cast<std::size_t>(i)] -
                       quad->center[static_cast<std::size_t>(i - quad->block_begin)];
            s += d * d;
        }
        return c * n / (c + n) * s;
    }
    if (x.size() > 3)
        fail(Err::Unsupported, "grid search envelope is infeasible above dimension 3");
    // Shrinking grid search; the minimizer satisfies n ||x-y||^2 <= W(x).
    double radius = std::sqrt(std::max(W(x), 1e-12) / n) * 1.5 + 1e-9;
    Vec center = x;
    double best = W(x);  // y = x is always feasible
    const int grid = 11;
    for (int round = 0; round < 80; ++round) {
        Vec arg = center;
        Vec y(x.size());
        std::function<void(std::size_t)> rec = [&](std::size_t d) {
            if (d == x.size()) {
                double val = W(y) + n * [&] {
                    double s = 0.0;
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        double dd = x[i] - y[i];
                        s += dd * dd;
                    }
                    return s;
                }();
                if (val < best) {
                    best = val;
                    arg = y;
                }
                return;
            }
            for (int i = 0; i < grid; ++i) {
                y[d] = center[d] - radius + 2.0 * radius * i / (grid - 1);
                rec(d + 1);
            }
        };
        rec(0);
        center = arg;
        radius *= 0.45;
        if (radius * radius * n < 1e-10 && round > 4) break;
    }
    return best;
}

}  // namespace mflow
