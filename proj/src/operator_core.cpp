#include "mflow/operator_core.hpp"

#include <algorithm>
#include <cmath>

#include "mflow/rng.hpp"
#include "mflow/tolerances.hpp"

namespace mflow {

SmoothFn SmoothFn::quadratic(int dim, double scale) {
    SmoothFn f;
    f.dim = dim;
    f.value = [scale](const Vec& x) { return 0.5 * scale * norm2(x); };
    f.grad = [scale](const Vec& x) { return mflow::scale(x, scale); };
    f.hess = [dim, scale](const Vec&) {
        Mat h = Mat::identity(static_cast<std::size_t>(dim));
        for (auto& v : h.data) v *= scale;
        return h;
    };
    return f;
}

SmoothFn SmoothFn::poly1d(std::vector<double> coeffs) {
    SmoothFn f;
    f.dim = 1;
    auto horner = [](const std::vector<double>& c, double x, int deriv) {
        // evaluates the deriv-th derivative of sum c[i] x^i
        double s = 0.0;
        for (int i = static_cast<int>(c.size()) - 1; i >= deriv; --i) {
            double factor = 1.0;
            for (int j = 0; j < deriv; ++j) factor *= static_cast<double>(i - j);
            s = s * x + factor * c[static_cast<std::size_t>(i)];
        }
        return s;
    };
    f.value = [coeffs, horner](const Vec& x) { return horner(coeffs, x[0], 0); };
    f.grad = [coeffs, horner](const Vec& x) { return Vec{horner(coeffs, x[0], 1)}; };
    f.hess = [coeffs, horner](const Vec& x) {
        Mat h(1, 1);
        h(0, 0) = horner(coeffs, x[0], 2);
        return h;
    };
    return f;
}

OperatorSpec OperatorSpec::gradient_of_smooth(SmoothFn phi) {
    if (!phi.value || !phi.grad)
        fail(Err::ConstructionError, "gradient_of_smooth needs value and gradient oracles");
    OperatorSpec s;
    s.kind_ = Kind::GradientOfSmooth;
    s.dim_ = phi.dim;
    s.phi_ = std::move(phi);
    return s;
}

OperatorSpec OperatorSpec::subdiff_norm(int dim) {
    OperatorSpec s;
    s.kind_ = Kind::SubdiffNorm;
    s.dim_ = dim;
    return s;
}

OperatorSpec OperatorSpec::subdiff_distance(ConvexSet target) {
    OperatorSpec s;
    s.kind_ = Kind::SubdiffDistance;
    s.dim_ = target.dim();
    s.set_ = std::make_shared<const ConvexSet>(std::move(target));
    return s;
}

OperatorSpec OperatorSpec::normal_cone(ConvexSet set) {
    OperatorSpec s;
    s.kind_ = Kind::NormalConeOp;
    s.dim_ = set.dim();
    s.set_ = std::make_shared<const ConvexSet>(std::move(set));
    return s;
}

OperatorSpec OperatorSpec::scaled_sum(std::vector<std::pair<double, OperatorSpec>> parts) {
    if (parts.empty()) fail(Err::ConstructionError, "scaled_sum needs parts");
    OperatorSpec s;
    s.kind_ = Kind::ScaledSum;
    s.dim_ = parts.front().second.dim();
    for (const auto& [c, p] : parts) {
        (void)c;
        if (p.dim() != s.dim_) fail(Err::DomainMismatch, "scaled_sum dimension mismatch");
        if (p.kind() == Kind::SubdiffNorm || p.kind() == Kind::SubdiffDistance ||
            p.kind() == Kind::ScaledSum)
            fail(Err::ConstructionError,
                 "scaled_sum admits smooth gradients and at most one normal cone; "
                 "nonsmooth parts are rejected at construction");
    }
    int cones = 0;
    for (const auto& [c, p] : parts) {
        (void)c;
        if (p.kind() == Kind::NormalConeOp) ++cones;
    }
    if (cones > 1) fail(Err::DomainMismatch, "scaled_sum admits at most one normal cone domain");
    s.parts_ = std::move(parts);
    return s;
}

namespace {

double estimate_bound(const std::function<Vec(const Vec&)>& g, const ConvexSet& C,
                      const RegionHint& hint, std::uint64_t seed) {
    Rng rng = seeded_stream(seed, "bound-estimate");
    double worst = 0.0;
    for (int i = 0; i < 512; ++i) {
        Vec x = add(hint.center, rng.ball_point(hint.center.size(), hint.radius));
        x = C.project(x);
        worst = std::max(worst, norm(g(x)));
    }
    return worst * 1.05 + 1e-12;
}

}  // namespace

OperatorDecomposition decompose(const OperatorSpec& spec, std::optional<RegionHint> hint,
                                std::optional<double> declared_b, std::uint64_t seed) {
    const int n = spec.dim();
    switch (spec.kind()) {
        case OperatorSpec::Kind::NormalConeOp: {
            // A0 vanishes on int C; its closed convex hull is {0} on all of C.
            OperatorDecomposition dec{
                SetValuedMap{n, declared_b.value_or(1e-12),
                             [n](const Vec&) { return Value::singleton(zeros(n)); }},
                spec.set(), 0.0};
            dec.b = dec.F.bound;
            return dec;
        }
        case OperatorSpec::Kind::SubdiffNorm: {
            double b = declared_b.value_or(1.0);  // globally Lipschitz with constant 1
            OperatorDecomposition dec{SetValuedMap{n, b,
                                                   [n](const Vec& x) {
                                                       double nx = norm(x);
                                                       if (nx > tol::kSet)
                                                           return Value::singleton(
                                                               scale(x, 1.0 / nx));
                                                       return Value::ball(zeros(n), 1.0);
                                                   }},
                                      ConvexSet::whole_space(n), b};
            return dec;
        }
        case OperatorSpec::Kind::SubdiffDistance: {
            double b = declared_b.value_or(1.0);
            auto target = std::make_shared<const ConvexSet>(spec.set());
            OperatorDecomposition dec{
                SetValuedMap{n, b,
                             [target, n](const Vec& x) {
                                 double d = target->distance(x);
                                 if (d > tol::kSet)
                                     return Value::singleton(target->prox_normal_direction(x));
                                 if (target->strictly_inside(x, 1e-9 * (1.0 + norm(x))))
                                     return Value::singleton(zeros(n));
                                 return Value::cone_cap_ball(*target, target->project(x));
                             }},
                ConvexSet::whole_space(n), b};
            return dec;
        }
        case OperatorSpec::Kind::GradientOfSmooth: {
            auto g = spec.smooth().grad;
            ConvexSet C = ConvexSet::whole_space(n);
            double b = declared_b ? *declared_b
                                  : estimate_bound(g, C, hint.value_or(RegionHint{zeros(n), 10.0}),
                                                   seed);
            OperatorDecomposition dec{
                SetValuedMap{n, b, [g](const Vec& x) { return Value::singleton(g(x)); }}, C, b};
            return dec;
        }
        case OperatorSpec::Kind::ScaledSum: {
            ConvexSet C = ConvexSet::whole_space(n);
            std::vector<std::pair<double, std::function<Vec(const Vec&)>>> grads;
            for (const auto& [c, p] : spec.parts()) {
                if (p.kind() == OperatorSpec::Kind::NormalConeOp)
                    C = p.set();
                else
                    grads.emplace_back(c, p.smooth().grad);
            }
            auto g = [grads, n](const Vec& x) {
                Vec s = zeros(n);
                for (const auto& [c, gr] : grads) axpy(s, c, gr(x));
                return s;
            };
            double b = declared_b ? *declared_b
                                  : estimate_bound(g, C, hint.value_or(RegionHint{zeros(n), 10.0}),
                                                   seed);
            OperatorDecomposition dec{
                SetValuedMap{n, b, [g](const Vec& x) { return Value::singleton(g(x)); }}, C, b};
            return dec;
        }
    }
    fail(Err::ArgumentError, "unreachable operator kind");
}

Value clco_A0(const OperatorDecomposition& dec, const Vec& x) {
    if (!dec.C.contains(x)) fail(Err::DomainError, "clco A0 evaluated outside cl(dom A)");
    return dec.F.eval(x);
}

nlohmann::json GraphProbeReport::to_json() const {
    nlohmann::json j;
    j["worst_bound_excess"] = worst_bound_excess;
    j["usc_trend_ok"] = usc_trend_ok;
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rings)
        rs.push_back({{"radius_hi", r.radius_hi},
                      {"worst_excess", r.worst_excess},
                      {"samples", r.samples}});
    j["rings"] = rs;
    return j;
}

GraphProbeReport graph_regularity_probe(const SetValuedMap& F, const Vec& x, double radius,
                                        int n_samples, std::uint64_t seed, double tau_usc) {
    if (n_samples < 1) fail(Err::ArgumentError, "graph probe needs n_samples >= 1");
    auto dirs = unit_directions(static_cast<std::size_t>(F.dim), tol::kSupportDirs, seed);
    Value at_x = F.eval(x);
    Rng rng = seeded_stream(seed, "graph-probe");

    GraphProbeReport rep;
    const int n_rings = 4;
    rep.rings.resize(n_rings);
    for (int r = 0; r < n_rings; ++r)
        rep.rings[static_cast<std::size_t>(r)].radius_hi = radius / std::pow(2.0, r);

    for (int i = 0; i < n_samples; ++i) {
        int ring = i % n_rings;
        double hi = rep.rings[static_cast<std::size_t>(ring)].radius_hi;
        Vec y = add(x, rng.ball_point(x.size(), hi));
        Value at_y = F.eval(y);
        double bound_excess = -F.bound, usc_excess = 0.0;
        for (const auto& d : dirs) {
            double sy = at_y.support(d);
            bound_excess = std::max(bound_excess, sy - F.bound);
            usc_excess = std::max(usc_excess, sy - at_x.support(d) - tau_usc);
        }
        rep.worst_bound_excess = std::max(rep.worst_bound_excess, bound_excess);
        auto& ringrep = rep.rings[static_cast<std::size_t>(ring)];
        ringrep.worst_excess = std::max(ringrep.worst_excess, std::max(0.0, usc_excess));
        ringrep.samples += 1;
    }
    for (int r = 0; r + 1 < n_rings; ++r)
        if (rep.rings[static_cast<std::size_t>(r + 1)].worst_excess >
            rep.rings[static_cast<std::size_t>(r)].worst_excess + 1e-12)
            rep.usc_trend_ok = false;
    return rep;
}

namespace {

SmoothFn smooth_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic")
        return SmoothFn::quadratic(j.at("dim").get<int>(), j.value("scale", 1.0));
    if (kind == "poly1d") return SmoothFn::poly1d(j.at("coeffs").get<std::vector<double>>());
    fail(Err::SchemaError, "unknown smooth potential kind: " + kind);
}

}  // namespace

OperatorSpec OperatorSpec::from_json(const nlohmann::json& j) {
    const std::string op = j.at("operator").get<std::string>();
    if (op == "gradient_of_smooth") return gradient_of_smooth(smooth_from_json(j.at("phi")));
    if (op == "subdiff_norm") return subdiff_norm(j.at("dim").get<int>());
    if (op == "subdiff_distance") return subdiff_distance(ConvexSet::from_json(j.at("target")));
    if (op == "normal_cone") return normal_cone(ConvexSet::from_json(j.at("set")));
    if (op == "scaled_sum") {
        std::vector<std::pair<double, OperatorSpec>> parts;
        for (const auto& pj : j.at("terms"))
            parts.emplace_back(pj.at("coef").get<double>(), from_json(pj.at("op")));
        return scaled_sum(std::move(parts));
    }
    fail(Err::SchemaError, "unknown operator variant: " + op);
}

}  // namespace mflow
