#include "mflow/verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mflow/rng.hpp"
#include "mflow/stability.hpp"

namespace mflow {

bool SuiteResult::all_pass() const {
    for (const auto& r : invariants)
        if (!r.pass) return false;
    return true;
}

nlohmann::json SuiteResult::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : invariants) {
        nlohmann::json j;
        j["invariant"] = r.name;
        j["samples"] = r.samples;
        j["worst_margin"] = r.worst_margin;
        j["pass"] = r.pass;
        if (!r.pass) j["witness"] = r.witness;
        arr.push_back(j);
    }
    return nlohmann::json{{"suite", suite}, {"invariants", arr}};
}

std::vector<std::string> suite_names() {
    return {"geometry", "selection", "hamiltonian", "multipliers"};
}

Scenario make_norm_scenario(int dim, int k) {
    Scenario sc;
    sc.name = "norm";
    sc.dim = dim;
    Mat A(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) A(i, i) = -1.0;
    sc.f = VectorField::linear(A, zeros(static_cast<std::size_t>(dim)));
    sc.dec = decompose(OperatorSpec::subdiff_norm(dim));
    sc.family = LipschitzFamily::norm(dim);
    sc.k = k;
    sc.x0 = zeros(static_cast<std::size_t>(dim));
    if (dim > 0) sc.x0[0] = 1.0;
    sc.T = 1.0;
    sc.rho = 4.0;
    sc.M_f = 6.0;
    return sc;
}

Scenario make_distance_scenario(int k) {
    Scenario sc;
    sc.name = "distance";
    sc.dim = 2;
    Mat A(2, 2);
    A(0, 0) = A(1, 1) = -1.0;
    sc.f = VectorField::linear(A, zeros(2));
    ConvexSet target = ConvexSet::ball(Vec{0.3, -0.2}, 0.7);
    sc.dec = decompose(OperatorSpec::subdiff_distance(target));
    sc.family = LipschitzFamily::distance(target);
    sc.k = k;
    sc.x0 = Vec{2.0, 0.0};
    sc.T = 1.0;
    sc.rho = 5.0;
    sc.M_f = 9.0;
    return sc;
}

Scenario make_wall_scenario() {
    Scenario sc;
    sc.name = "wall";
    sc.dim = 1;
    sc.f = VectorField::constant(Vec{-1.0});
    ConvexSet halfline = ConvexSet::halfspace(Vec{-1.0}, 0.0);  // { x >= 0 }
    sc.dec = decompose(OperatorSpec::normal_cone(halfline));
    sc.family = LipschitzFamily::smooth(sc.dec);
    sc.k = 1;
    sc.x0 = Vec{0.0};
    sc.T = 2.0;
    sc.rho = 3.0;
    sc.M_f = 1.0;
    return sc;
}

std::vector<std::pair<Vec, Vec>> sample_region_pairs(const LipschitzFamily& fam, int k, int n,
                                                     std::uint64_t seed) {
    Rng rng = seeded_stream(seed, "region-pairs");
    const double dk = fam.delta(k);
    const std::size_t dim = static_cast<std::size_t>(fam.dim());
    auto sample_point = [&]() -> Vec {
        int bucket = static_cast<int>(rng.next_u64() % 8);
        if (bucket == 0) return zeros(dim);  // exactly on the target (C = {0})
        double r;
        if (bucket <= 2)
            r = rng.uniform(1e-6 * dk, 0.5 * dk);
        else if (bucket <= 4)
            r = rng.uniform(0.5 * dk, dk);
        else
            r = rng.uniform(dk, 4.0 * dk);
        return scale(rng.unit_vec(dim), r);
    };
    std::vector<std::pair<Vec, Vec>> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pairs.emplace_back(sample_point(), sample_point());
    return pairs;
}

ApproxGapSweep approx_gap_sweep(const Scenario& sc, int k, int n_pairs, std::uint64_t seed) {
    Rng rng = seeded_stream(seed, "approx-gap");
    const double dk = 1.0 / k;
    ApproxGapSweep sweep;
    sweep.worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        // states stratified across the family regions and kept inside C
        Vec x;
        int bucket = static_cast<int>(rng.next_u64() % 4);
        if (sc.family.family_kind() == LipschitzFamily::Kind::BlockScaledNorm) {
            x = rng.ball_point(static_cast<std::size_t>(sc.dim), 2.0);
            double s = bucket == 0 ? 0.0 : bucket == 1 ? 0.4 * dk : bucket == 2 ? 0.9 * dk : 3.0;
            int b0 = sc.family.block_begin();
            for (int j = b0; j < b0 + sc.family.block_len(); ++j)
                x[static_cast<std::size_t>(j)] *= s / 2.0;
        } else {
            double r = bucket == 0 ? 0.0 : bucket == 1 ? 0.4 * dk : bucket == 2 ? 0.9 * dk : 2.5;
            x = scale(rng.unit_vec(static_cast<std::size_t>(sc.dim)), r);
            if (sc.family.family_kind() == LipschitzFamily::Kind::Distance) {
                // offset relative to the target set rather than the origin
                Vec base = rng.ball_point(static_cast<std::size_t>(sc.dim), 1.5);
                Vec p = sc.dec.C.project(base);
                (void)p;  // C is the whole space here; regions come from the target
            }
        }
        x = sc.dec.C.project(x);
        Vec zeta = scale(rng.unit_vec(static_cast<std::size_t>(sc.dim)), rng.uniform(0.1, 3.0));
        ApproxGapReport rep = approx_gap_check(sc, k, x, zeta, seed);
        ++sweep.n;
        if (!rep.ok) sweep.all_ok = false;
        if (!rep.both_neg_inf) {
            double margin = rep.h_exact.value - rep.h_approx.value - rep.eps * norm(zeta);
            sweep.worst = std::max(sweep.worst, margin);
        }
    }
    return sweep;
}

NestingSweep nesting_sweep(const LipschitzFamily& fam, int n_points, int k_max, int n_dirs,
                           std::uint64_t seed) {
    Rng rng = seeded_stream(seed, "nesting-sweep");
    auto dirs = unit_directions(static_cast<std::size_t>(fam.dim()),
                                static_cast<std::size_t>(n_dirs), seed);
    NestingSweep sweep;
    sweep.min_outer_gap = sweep.min_base_gap = sweep.min_bound_slack =
        std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_points; ++i) {
        Vec x = i % 8 == 0 ? zeros(static_cast<std::size_t>(fam.dim()))
                           : rng.ball_point(static_cast<std::size_t>(fam.dim()), 2.0);
        NestingReport rep = nesting_check(fam, x, k_max, n_dirs, seed);
        sweep.min_outer_gap = std::min(sweep.min_outer_gap, rep.worst_outer_gap);
        sweep.min_base_gap = std::min(sweep.min_base_gap, rep.worst_base_gap);
        sweep.min_bound_slack = std::min(sweep.min_bound_slack, rep.worst_bound_slack);
        double nv = norm(x);
        if (nv > tol::kSet) {
            int k_exact = static_cast<int>(std::ceil(1.0 / nv));
            if (k_exact <= k_max) {
                Value fk = fam.eval_Fk(std::max(k_exact, 1), x);
                Value base = fam.eval_F(x);
                for (const auto& d : dirs)
                    if (std::abs(fk.support(d) - base.support(d)) > 1e-15)
                        sweep.exact_once_past_delta = false;
            }
        }
    }
    return sweep;
}

namespace {

void push(SuiteResult& suite, std::string name, long samples, double worst, double limit,
          nlohmann::json witness = {}) {
    InvariantResult r;
    r.name = std::move(name);
    r.samples = samples;
    r.worst_margin = worst - limit;
    r.pass = worst <= limit;
    r.witness = std::move(witness);
    suite.invariants.push_back(std::move(r));
}

std::vector<std::pair<std::string, ConvexSet>> geometry_variants() {
    std::vector<std::pair<std::string, ConvexSet>> v;
    v.emplace_back("ball", ConvexSet::ball(Vec{0.3, -0.2}, 1.3));
    v.emplace_back("box", ConvexSet::box(Vec{-1.0, -0.5}, Vec{0.8, 1.2}));
    v.emplace_back("halfspace", ConvexSet::halfspace(Vec{1.0, 2.0}, 0.5));
    v.emplace_back("polyhedron",
                   ConvexSet::polyhedron({Halfspace{Vec{1.0, 0.0}, 0.0},
                                          Halfspace{Vec{0.0, 1.0}, 0.0},
                                          Halfspace{Vec{-1.0, -1.0}, 3.0}}));
    v.emplace_back("point", ConvexSet::point(Vec{0.4, 0.7}));
    v.emplace_back("orthant", ConvexSet::nonnegative_orthant(2));
    return v;
}

SuiteResult suite_geometry(std::uint64_t seed) {
    SuiteResult suite;
    suite.suite = "geometry";
    auto variants = geometry_variants();

    {  // firm nonexpansiveness + idempotence + distance identity
        double worst_firm = 0.0, worst_idem = 0.0, worst_dist = 0.0;
        nlohmann::json firm_witness;
        long n = 0;
        for (const auto& [name, S] : variants) {
            Rng rng = seeded_stream(seed, "geom-firm-" + name);
            for (int i = 0; i < 10000; ++i) {
                Vec x = rng.ball_point(2, 3.0);
                Vec y = rng.ball_point(2, 3.0);
                Vec px = S.project(x), py = S.project(y);
                double lhs = dot(sub(px, py), sub(x, y));
                double viol = norm2(sub(px, py)) - lhs;
                if (viol > worst_firm) {
                    worst_firm = viol;
                    firm_witness = {{"variant", name}, {"x", x}, {"y", y}};
                }
                worst_idem = std::max(worst_idem, dist(S.project(px), px));
                worst_dist = std::max(worst_dist, std::abs(S.distance(x) - dist(x, px)));
                ++n;
            }
        }
        push(suite, "projection_firm_nonexpansive", n, worst_firm, 1e-9, firm_witness);
        push(suite, "projection_idempotent", n, worst_idem, 1e-9);
        push(suite, "distance_equals_norm_of_residual", n, worst_dist, 1e-10);
    }

    {  // proximal-distance subgradient identity against central differences
        Rng rng = seeded_stream(seed, "geom-proxdist");
        double worst = 0.0;
        long n = 0;
        const double fd = 1e-6;
        while (n < 100) {
            const auto& [name, S] = variants[static_cast<std::size_t>(n) % variants.size()];
            (void)name;
            Vec x = rng.ball_point(2, 3.0);
            if (S.distance(x) < 0.05) continue;
            double s = rng.uniform(0.1, 0.9);
            Vec z = S.project(x);
            Vec p = z;
            axpy(p, s, sub(x, z));
            Vec u = S.prox_normal_direction(x);
            for (std::size_t c = 0; c < 2; ++c) {
                Vec hi = p, lo = p;
                hi[c] += fd;
                lo[c] -= fd;
                double grad = (S.distance(hi) - S.distance(lo)) / (2.0 * fd);
                worst = std::max(worst, std::abs(grad - u[c]));
            }
            ++n;
        }
        push(suite, "proxdist_matches_central_differences", n, worst, 1e-6);
    }

    {  // cone-cap-ball support vs brute-force sampled normals
        double worst_hi = 0.0, worst_lo = 0.0;
        long n = 0;
        auto run_case = [&](const ConvexSet& S, const Vec& x, Rng& rng) {
            for (int rep = 0; rep < 16; ++rep) {
                Vec zeta = scale(rng.unit_vec(2), rng.uniform(0.2, 2.0));
                double op = S.cone_cap_ball_support(x, zeta);
                double brute = 0.0;
                for (int i = 0; i < 10000; ++i) {
                    Vec eta = S.normal_project(x, rng.unit_vec(2));
                    double ne = norm(eta);
                    if (ne > 1.0) eta = scale(eta, 1.0 / ne);
                    brute = std::max(brute, dot(zeta, eta));
                }
                worst_hi = std::max(worst_hi, op - brute);   // sampling gap
                worst_lo = std::max(worst_lo, brute - op);   // op must dominate samples
                ++n;
            }
        };
        Rng rng = seeded_stream(seed, "geom-cone");
        ConvexSet ball = ConvexSet::ball(Vec{0.0, 0.0}, 1.0);
        run_case(ball, Vec{1.0, 0.0}, rng);
        ConvexSet box = ConvexSet::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0});
        run_case(box, Vec{1.0, 1.0}, rng);   // corner
        run_case(box, Vec{1.0, 0.2}, rng);   // face
        ConvexSet hs = ConvexSet::halfspace(Vec{1.0, 0.0}, 0.0);
        run_case(hs, Vec{0.0, 0.3}, rng);
        push(suite, "cone_cap_support_vs_sampled_normals", n, std::max(worst_hi, worst_lo), 1e-3);
    }

    {  // mean value inequality witnesses
        Rng rng = seeded_stream(seed, "geom-mvi");
        double worst = -std::numeric_limits<double>::infinity();
        long n = 0;
        while (n < 100) {
            const auto& [name, S] = variants[static_cast<std::size_t>(n) % variants.size()];
            (void)name;
            Vec x = rng.ball_point(2, 3.0);
            Vec y = rng.ball_point(2, 3.0);
            double gap = S.distance(y) - S.distance(x);
            if (gap < 0.05) continue;
            double r = 0.8 * gap;
            auto w = mean_value_witness(S, x, y, r, 0.05, seed + static_cast<std::uint64_t>(n));
            worst = std::max(worst, r - w.inner);  // must stay negative
            ++n;
        }
        push(suite, "mean_value_witness_found", n, worst, 0.0);
    }
    return suite;
}

SuiteResult suite_selection(std::uint64_t seed) {
    SuiteResult suite;
    suite.suite = "selection";

    for (int k : {10, 100}) {
        LipschitzFamily fam = LipschitzFamily::norm(2);
        const double dk = fam.delta(k);
        std::string tag = "k" + std::to_string(k);
        Rng rng = seeded_stream(seed, "sel-points-" + tag);

        {  // selection equals the origin projection; uniform bound
            double worst_agree = 0.0, worst_bound = 0.0;
            for (int i = 0; i < 10000; ++i) {
                Vec x = i % 7 == 0 ? zeros(2)
                                   : scale(rng.unit_vec(2), rng.uniform(1e-8 * dk, 4.0 * dk));
                Vec psi = fam.eval_psi(k, x);
                worst_agree = std::max(worst_agree,
                                       dist(psi, fam.eval_Fk(k, x).origin_projection()));
                worst_bound = std::max(worst_bound, norm(psi) - 1.0);
            }
            push(suite, "psi_equals_origin_projection_" + tag, 10000, worst_agree, 1e-12);
            push(suite, "psi_uniformly_bounded_" + tag, 10000, worst_bound, 1e-12);
        }

        {  // continuity across the region boundaries
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                Vec u = rng.unit_vec(2);
                for (double level : {dk, 0.5 * dk}) {
                    Vec a = scale(u, level * (1.0 - 1e-9));
                    Vec b = scale(u, level * (1.0 + 1e-9));
                    worst = std::max(worst, dist(fam.eval_psi(k, a), fam.eval_psi(k, b)));
                }
            }
            push(suite, "psi_region_boundary_continuity_" + tag, 200, worst, 1e-6);
        }

        {  // Lipschitz ratio scan against the per-case constants
            auto pairs = sample_region_pairs(fam, k, 10000, seed + static_cast<unsigned>(k));
            RatioScanReport rep = lipschitz_ratio_scan(fam, k, pairs);
            push(suite, "ratio_global_8_over_delta_" + tag, 10000, rep.global_max, 8.0 / dk + 1e-9);
            double outer = rep.region_max.count("outer-outer") ? rep.region_max.at("outer-outer")
                                                               : 0.0;
            push(suite, "ratio_outer_4_over_delta_" + tag, 10000, outer, 4.0 / dk + 1e-9);
            double boundary = rep.region_max.count("inset-outer")
                                  ? rep.region_max.at("inset-outer")
                                  : 0.0;
            push(suite, "ratio_boundary_1_over_delta_" + tag, 10000, boundary, 1.0 / dk + 1e-9);
        }

        {  // Hausdorff Lipschitz bound on both-outer pairs
            auto dirs = unit_directions(2, tol::kSupportDirs, seed);
            double worst = 0.0;
            for (int i = 0; i < 1000; ++i) {
                Vec x = scale(rng.unit_vec(2), rng.uniform(dk, 4.0 * dk));
                Vec y = scale(rng.unit_vec(2), rng.uniform(dk, 4.0 * dk));
                double dxy = dist(x, y);
                if (dxy == 0.0) continue;
                double dh = hausdorff(fam.eval_Fk(k, x), fam.eval_Fk(k, y), dirs);
                worst = std::max(worst, dh / dxy - 4.0 / dk);
            }
            push(suite, "hausdorff_outer_lipschitz_" + tag, 1000, worst, 1e-9);
        }
    }

    {  // nesting and graphical convergence (norm + distance families)
        LipschitzFamily norm_fam = LipschitzFamily::norm(2);
        NestingSweep ns = nesting_sweep(norm_fam, 500, 20, 64, seed);
        push(suite, "nesting_gaps_norm", 500L * 19 * 64, -std::min({ns.min_outer_gap,
                                                                    ns.min_base_gap,
                                                                    ns.min_bound_slack}),
             1e-9);
        push(suite, "graphical_exactness_norm", 500, ns.exact_once_past_delta ? 0.0 : 1.0, 0.5);

        LipschitzFamily dist_fam = LipschitzFamily::distance(ConvexSet::ball(Vec{0.3, -0.2}, 0.7));
        NestingSweep ds = nesting_sweep(dist_fam, 200, 12, 64, seed + 1);
        push(suite, "nesting_gaps_distance", 200L * 11 * 64, -std::min({ds.min_outer_gap,
                                                                        ds.min_base_gap,
                                                                        ds.min_bound_slack}),
             1e-9);

        Rng rng = seeded_stream(seed, "sel-convergence");
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            Vec x = scale(rng.unit_vec(2), rng.uniform(0.05, 2.0));
            auto probe = graphical_convergence_probe(norm_fam, x, rng.uniform(0.01, 1.0), 100,
                                                     seed);
            if (!probe.converged) worst = std::max(worst, 1.0);
            int bound = static_cast<int>(std::ceil(1.0 / norm(x))) + 1;
            worst = std::max(worst, static_cast<double>(probe.k - bound));
        }
        push(suite, "graphical_convergence_threshold", 200, worst, 0.0);
    }
    return suite;
}

SuiteResult suite_hamiltonian(std::uint64_t seed) {
    SuiteResult suite;
    suite.suite = "hamiltonian";
    Scenario norm_sc = make_norm_scenario(2, 5);
    Scenario dist_sc = make_distance_scenario(5);
    CatalogSystem fric = build_friction(FrictionParams{1.0, 0.1, 1.0, 1, 3.0, 0.0, 12.0, 0.0, 10});

    {  // zeta = 0 gives Finite(0)
        Rng rng = seeded_stream(seed, "ham-zero");
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            Vec x = rng.ball_point(2, 2.0);
            auto h = hamiltonian(norm_sc, x, zeros(2), HamiltonianMode::Exact);
            worst = std::max(worst, std::abs(h.value) + (h.neg_infinity ? 1.0 : 0.0));
        }
        push(suite, "zero_direction_vanishes", 100, worst, 1e-15);
    }

    {  // interior identity: h = <zeta, f> - support
        Rng rng = seeded_stream(seed, "ham-interior");
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            Vec x = rng.ball_point(2, 2.0);
            Vec zeta = rng.ball_point(2, 2.0);
            auto h = hamiltonian(norm_sc, x, zeta, HamiltonianMode::Exact);
            double manual = dot(zeta, norm_sc.f.eval(x)) - norm_sc.dec.F.eval(x).support(zeta);
            worst = std::max(worst, std::abs(h.value - manual));
        }
        push(suite, "interior_identity", 200, worst, 1e-12);
    }

    {  // approximation inequality per catalog family
        auto run = [&](const Scenario& sc, int k, const std::string& name) {
            ApproxGapSweep sweep = approx_gap_sweep(sc, k, 1000, seed);
            push(suite, "approx_gap_" + name, sweep.n, sweep.worst, 1e-8);
        };
        run(norm_sc, 5, "norm");
        run(dist_sc, 5, "distance");
        run(fric.scenario, 10, "friction_block");
    }

    {  // diverging cone term is consistent across exact/approx
        Scenario wall = make_wall_scenario();
        auto he = hamiltonian(wall, Vec{0.0}, Vec{-1.0}, HamiltonianMode::Exact);
        auto ha = hamiltonian(wall, Vec{0.0}, Vec{-1.0}, HamiltonianMode::Approx, 3);
        double bad = (he.neg_infinity && ha.neg_infinity) ? 0.0 : 1.0;
        push(suite, "cone_divergence_consistent", 2, bad, 0.5);
    }
    return suite;
}

SuiteResult suite_multipliers(std::uint64_t seed) {
    SuiteResult suite;
    suite.suite = "multipliers";
    (void)seed;

    {  // pushing-to-wall: velocity, penalty, multiplier bounds + steady state
        Scenario wall = make_wall_scenario();
        double beta = wall.beta_bound();
        double worst_vel = 0.0, worst_steady = 0.0, worst_mult = 0.0;
        for (double lambda : {1e-1, 1e-2, 1e-3}) {
            Trajectory traj = integrate_regularized(wall, lambda, 1e-3);
            worst_vel = std::max(worst_vel, traj.worst_velocity - 2.0 * beta * (1.0 + tol::kVel));
            worst_steady = std::max(worst_steady,
                                    std::abs(traj.x.back()[0] + lambda) / lambda - 1e-6);
            extract_multipliers(traj, wall);
            for (std::size_t i = 0; i < traj.size(); ++i) {
                double slack = norm(traj.eta[i]) -
                               norm(sub(wall.f.eval(traj.x[i]), traj.g[i])) - tol::kMult;
                worst_mult = std::max(worst_mult, slack);
            }
        }
        push(suite, "wall_velocity_bound", 3, worst_vel, 0.0);
        push(suite, "wall_steady_state_minus_lambda", 3, worst_steady, 0.0);
        push(suite, "wall_multiplier_bound", 3, worst_mult, 0.0);

        RefineResult ref = refine_lambda(wall, {1e-1, 5e-2, 2.5e-2, 1.25e-2}, 1e-3);
        double worst_order = 0.0;
        for (double o : ref.orders)
            if (std::isfinite(o)) worst_order = std::max(worst_order, 0.9 - o);
        push(suite, "wall_refinement_order", static_cast<long>(ref.orders.size()), worst_order,
             0.0);
    }

    {  // friction and din trajectories stay within the Thibault bounds
        CatalogSystem fric =
            build_friction(FrictionParams{1.0, 0.1, 1.0, 1, 3.0, 0.0, 12.0, 0.0, 2000000});
        Trajectory traj = integrate_regularized(fric.scenario, 1e-3, 1e-3);
        double beta = fric.scenario.beta_bound();
        push(suite, "friction_velocity_bound", static_cast<long>(traj.size()),
             traj.worst_velocity - 2.0 * beta * (1.0 + tol::kVel), 0.0);
        extract_multipliers(traj, fric.scenario);
        double worst_eta = 0.0;
        for (const auto& e : traj.eta) worst_eta = std::max(worst_eta, norm(e));
        push(suite, "friction_interior_multipliers_vanish", static_cast<long>(traj.size()),
             worst_eta, 1e-15);

        DinParams dp;
        dp.phi = SmoothFn::quadratic(1, 1.0);
        dp.x0 = Vec{1.0};
        dp.v0 = Vec{0.0};
        dp.T = 20.0;
        CatalogSystem din = build_din(dp);
        Trajectory dt = integrate_regularized(din.scenario, 1e-3, 1e-3);
        push(suite, "din_velocity_bound", static_cast<long>(dt.size()),
             dt.worst_velocity - 2.0 * din.scenario.beta_bound() * (1.0 + tol::kVel), 0.0);
        extract_multipliers(dt, din.scenario);
        push(suite, "din_multipliers_ok", static_cast<long>(dt.size()), 0.0, 0.5);
    }
    return suite;
}

}  // namespace

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "geometry") return suite_geometry(seed);
    if (name == "selection") return suite_selection(seed);
    if (name == "hamiltonian") return suite_hamiltonian(seed);
    if (name == "multipliers") return suite_multipliers(seed);
    fail(Err::ArgumentError, "unknown suite: " + name);
}

}  // namespace mflow
