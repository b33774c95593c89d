#include "mflow/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "mflow/rng.hpp"

namespace mflow {

namespace {

double sampled_field_bound(const VectorField& f, const Vec& center, double radius,
                           std::uint64_t seed) {
    Rng rng = seeded_stream(seed, "catalog-field-bound");
    double worst = norm(f.eval(center));
    for (int i = 0; i < 512; ++i) {
        Vec y = add(center, rng.ball_point(center.size(), radius));
        worst = std::max(worst, norm(f.eval(y)));
    }
    return worst * 1.1 + 1e-12;
}

}  // namespace

CatalogSystem build_din(const DinParams& p) {
    if (!p.phi.hess) fail(Err::ConstructionError, "din builder needs a Hessian oracle");
    if (!(p.alpha > 0.0) || !(p.beta > 0.0))
        fail(Err::ConstructionError, "din builder needs alpha > 0 and beta > 0");
    const int n = p.phi.dim;
    if (static_cast<int>(p.x0.size()) != n || static_cast<int>(p.v0.size()) != n)
        fail(Err::ConstructionError, "din initial state dimension mismatch");
    const int dim = 2 * n;
    const double alpha = p.alpha, beta = p.beta;
    SmoothFn phi = p.phi;

    // damping stays in f; the operator carries the potential terms
    VectorField f = VectorField::generic(dim, [n, alpha](const Vec& y) {
        Vec r(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            r[i] = y[n + i];
            r[n + i] = -alpha * y[n + i];
        }
        return r;
    });

    auto a0 = [n, beta, phi](const Vec& y) {
        Vec x1(y.begin(), y.begin() + n);
        Vec x2(y.begin() + n, y.end());
        Vec g = phi.grad(x1);
        Mat h = phi.hess(x1);
        Vec hv = h.apply(x2);
        Vec r(static_cast<std::size_t>(2 * n), 0.0);
        for (int i = 0; i < n; ++i) r[n + i] = g[i] + beta * hv[i];
        return r;
    };

    Vec y0(static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i) {
        y0[i] = p.x0[i];
        y0[n + i] = p.v0[i];
    }
    double rho = 2.0 * (norm(y0) + 1.0);

    double b = 0.0;
    {
        Rng rng = seeded_stream(7, "din-bound");
        for (int i = 0; i < 512; ++i)
            b = std::max(b, norm(a0(add(y0, rng.ball_point(y0.size(), rho)))));
        b = b * 1.1 + 1e-12;
    }

    OperatorDecomposition dec{
        SetValuedMap{dim, b, [a0](const Vec& y) { return Value::singleton(a0(y)); }},
        ConvexSet::whole_space(dim), b};

    Scenario sc;
    sc.name = "din";
    sc.dim = dim;
    sc.f = f;
    sc.rho = rho;
    sc.M_f = sampled_field_bound(f, y0, rho, 11);
    sc.dec = dec;
    sc.family = LipschitzFamily::smooth(dec);
    sc.k = 1;
    sc.x0 = y0;
    sc.T = p.T;
    sc.default_mode = StepMode::RK4;
    validate_scenario(sc);

    LyapunovPair pair;
    pair.V = [n, alpha, beta, phi](const Vec& y) {
        Vec x1(y.begin(), y.begin() + n);
        Vec x2(y.begin() + n, y.end());
        Vec g = phi.grad(x1);
        Vec w = x2;
        axpy(w, beta, g);
        return (alpha * beta + 1.0) * phi.value(x1) + 0.5 * norm2(w);
    };
    pair.subgradients = [n, alpha, beta, phi](const Vec& y) {
        Vec x1(y.begin(), y.begin() + n);
        Vec x2(y.begin() + n, y.end());
        Vec g = phi.grad(x1);
        Mat h = phi.hess(x1);
        Vec w = x2;
        axpy(w, beta, g);  // y2 + beta grad
        Vec hw = h.apply(w);
        Vec grad(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            grad[i] = (alpha * beta + 1.0) * g[i] + beta * hw[i];
            grad[n + i] = w[i];
        }
        return std::vector<Vec>{grad};
    };
    pair.W = [n, alpha](const Vec& y) {
        double s = 0.0;
        for (int i = n; i < 2 * n; ++i) s += y[i] * y[i];
        return alpha * s;
    };
    pair.w_quad = LyapunovPair::QuadW{alpha, n, n, zeros(static_cast<std::size_t>(n))};

    // quadratic potentials have the unique critical point at the origin
    EquilibriaDescriptor eq;
    Vec origin = zeros(static_cast<std::size_t>(dim));
    if (equilibrium_residual(sc, origin) <= tol::kEq) {
        eq.exact = ConvexSet::point(origin);
        eq.samples.push_back(origin);
    } else {
        eq = equilibria_descriptor(sc, 23);
    }
    return CatalogSystem{std::move(sc), std::move(pair), std::move(eq)};
}

CatalogSystem build_friction(const FrictionParams& p) {
    if (!(p.m > 0.0) || !(p.alpha > 0.0) || !(p.beta > 0.0))
        fail(Err::ConstructionError, "friction builder needs m, alpha, beta > 0");
    if (p.n < 1) fail(Err::ConstructionError, "friction builder needs dimension >= 1");
    if (std::abs(p.beta * p.ybar) > 1.0 + 1e-12)
        fail(Err::ConstructionError, "friction builder needs |beta * ybar| <= 1");
    if (p.k < 1) fail(Err::ConstructionError, "friction builder needs k >= 1");
    const int n = p.n;
    const int dim = 2 * n;
    const double m = p.m, alpha = p.alpha, beta = p.beta;

    VectorField f;
    if (n == 1) {
        Mat A(2, 2);
        A(0, 0) = 0.0;
        A(0, 1) = 1.0;
        A(1, 0) = -beta / m;
        A(1, 1) = -alpha / m;
        f = VectorField::linear(A, zeros(2));
    } else {
        f = VectorField::generic(dim, [n, m, alpha, beta](const Vec& y) {
            Vec r(static_cast<std::size_t>(2 * n));
            for (int i = 0; i < n; ++i) {
                r[i] = y[n + i];
                r[n + i] = (-beta * y[i] - alpha * y[n + i]) / m;
            }
            return r;
        });
    }

    // the coupling constant 1/m is baked into clco A0, so b = 1/m
    LipschitzFamily family = LipschitzFamily::block_scaled_norm(dim, n, n, 1.0 / m);
    OperatorDecomposition dec{
        SetValuedMap{dim, 1.0 / m, [family](const Vec& y) { return family.eval_F(y); }},
        ConvexSet::whole_space(dim), 1.0 / m};

    Vec y0(static_cast<std::size_t>(dim), 0.0);
    y0[0] = p.x0;
    y0[n] = p.v0;

    Scenario sc;
    sc.name = "friction";
    sc.dim = dim;
    sc.f = f;
    sc.rho = 2.5 * (norm(y0) + 2.0);
    sc.M_f = sampled_field_bound(f, y0, sc.rho, 13);
    sc.dec = dec;
    sc.family = family;
    sc.k = p.k;
    sc.x0 = y0;
    sc.T = p.T;
    sc.default_mode = n == 1 ? StepMode::StiffExact : StepMode::RK4;
    sc.friction = Scenario::FrictionTag{m, alpha, beta};
    validate_scenario(sc);

    const double ybar = p.ybar;
    LyapunovPair pair;
    pair.V = [n, m, beta, ybar](const Vec& y) {
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = y[i] - (i == 0 ? ybar : 0.0);
            s1 += d * d;
            s2 += y[n + i] * y[n + i];
        }
        return beta / (2.0 * m) * s1 + 0.5 * s2;
    };
    pair.subgradients = [n, m, beta, ybar](const Vec& y) {
        Vec grad(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            grad[i] = beta / m * (y[i] - (i == 0 ? ybar : 0.0));
            grad[n + i] = y[n + i];
        }
        return std::vector<Vec>{grad};
    };
    pair.W = [n, m, alpha](const Vec& y) {
        double s = 0.0;
        for (int i = n; i < 2 * n; ++i) s += y[i] * y[i];
        return alpha / m * s;
    };
    pair.w_quad = LyapunovPair::QuadW{alpha / m, n, n, zeros(static_cast<std::size_t>(n))};

    // equilibrium band { (x, 0) : ||beta x|| <= 1 }
    EquilibriaDescriptor eq;
    Vec lo(static_cast<std::size_t>(dim), 0.0), hi(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < n; ++i) {
        lo[i] = -1.0 / beta;
        hi[i] = 1.0 / beta;
    }
    eq.exact = ConvexSet::box(lo, hi);
    for (double s : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        Vec z(static_cast<std::size_t>(dim), 0.0);
        z[0] = s / beta;
        eq.samples.push_back(z);
    }
    return CatalogSystem{std::move(sc), std::move(pair), std::move(eq)};
}

EquilibriaDescriptor equilibria_descriptor(const Scenario& sc, std::uint64_t seed) {
    EquilibriaDescriptor eq;
    Rng rng = seeded_stream(seed, "equilibria-sampler");
    double radius = sc.rho > 0.0 ? sc.rho : 4.0;
    for (int i = 0; i < 2048 && eq.samples.size() < 64; ++i) {
        Vec cand = sc.dec.C.project(add(sc.x0, rng.ball_point(sc.x0.size(), radius)));
        if (equilibrium_residual(sc, cand) <= tol::kEq) eq.samples.push_back(cand);
    }
    return eq;  // may be empty; callers treat that as a warning
}

Propagator friction_oracle_propagator(double m, double alpha, double beta, double h_out) {
    return [m, alpha, beta, h_out](const Vec& x0, double T) {
        if (x0.size() != 2)
            fail(Err::Unsupported, "friction oracle propagation is 1-D only (state dim 2)");
        return integrate_friction_oracle(m, alpha, beta, x0[0], x0[1], T, h_out);
    };
}

}  // namespace mflow
