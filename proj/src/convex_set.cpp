#include "mflow/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mflow/rng.hpp"

namespace mflow {

namespace {

Vec project_halfspace(const Vec& normal, double offset, const Vec& x) {
    double viol = dot(normal, x) - offset;
    if (viol <= 0.0) return x;
    Vec p = x;
    axpy(p, -viol / norm2(normal), normal);
    return p;
}

}  // namespace

ConvexSet ConvexSet::whole_space(int dim) {
    ConvexSet s;
    s.kind_ = Kind::WholeSpace;
    s.dim_ = dim;
    return s;
}

ConvexSet ConvexSet::point(Vec p) {
    ConvexSet s;
    s.kind_ = Kind::Point;
    s.dim_ = static_cast<int>(p.size());
    s.a_ = std::move(p);
    return s;
}

ConvexSet ConvexSet::ball(Vec center, double radius) {
    if (!(radius > 0.0)) fail(Err::ConstructionError, "ball radius must be > 0");
    ConvexSet s;
    s.kind_ = Kind::Ball;
    s.dim_ = static_cast<int>(center.size());
    s.a_ = std::move(center);
    s.scalar_ = radius;
    return s;
}

ConvexSet ConvexSet::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) fail(Err::ConstructionError, "box lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) fail(Err::ConstructionError, "box requires lo <= hi componentwise");
    ConvexSet s;
    s.kind_ = Kind::Box;
    s.dim_ = static_cast<int>(lo.size());
    s.a_ = std::move(lo);
    s.b_ = std::move(hi);
    return s;
}

ConvexSet ConvexSet::halfspace(Vec normal, double offset) {
    if (norm(normal) == 0.0) fail(Err::ConstructionError, "halfspace normal must be nonzero");
    ConvexSet s;
    s.kind_ = Kind::Halfspace;
    s.dim_ = static_cast<int>(normal.size());
    s.a_ = std::move(normal);
    s.scalar_ = offset;
    return s;
}

ConvexSet ConvexSet::polyhedron(std::vector<Halfspace> halves) {
    if (halves.empty()) fail(Err::ConstructionError, "polyhedron needs at least one halfspace");
    ConvexSet s;
    s.kind_ = Kind::Polyhedron;
    s.dim_ = static_cast<int>(halves.front().normal.size());
    for (const auto& h : halves) {
        if (static_cast<int>(h.normal.size()) != s.dim_)
            fail(Err::ConstructionError, "polyhedron halfspace dimension mismatch");
        if (norm(h.normal) == 0.0)
            fail(Err::ConstructionError, "polyhedron halfspace normal must be nonzero");
    }
    s.halves_ = std::move(halves);
    return s;
}

ConvexSet ConvexSet::nonnegative_orthant(int dim) {
    ConvexSet s;
    s.kind_ = Kind::NonnegativeOrthant;
    s.dim_ = dim;
    return s;
}

Vec ConvexSet::project_polyhedron(const Vec& x) const {
    // Dykstra with per-constraint increments; detects empty intersections by a
    // stalled cycle that still violates some constraint.
    const std::size_t m = halves_.size();
    Vec p = x;
    std::vector<Vec> incr(m, zeros(p.size()));
    for (int cycle = 0; cycle < tol::kDykstraCap; ++cycle) {
        double moved = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            Vec y = add(p, incr[i]);
            Vec q = project_halfspace(halves_[i].normal, halves_[i].offset, y);
            incr[i] = sub(y, q);
            moved += dist(p, q);
            p = std::move(q);
        }
        if (moved <= tol::kDykstra) {
            double worst = 0.0;
            for (const auto& h : halves_) worst = std::max(worst, dot(h.normal, p) - h.offset);
            if (worst > tol::kInfeasible) fail(Err::InfeasibleSet, "polyhedron is empty");
            return p;
        }
    }
    double worst = 0.0;
    for (const auto& h : halves_) worst = std::max(worst, dot(h.normal, p) - h.offset);
    if (worst > tol::kInfeasible)
        fail(Err::InfeasibleSet, "polyhedron projection stalled with violated constraints");
    return p;  // feasible but slow convergence; accept the iterate
}

Vec ConvexSet::project(const Vec& x) const {
    switch (kind_) {
        case Kind::WholeSpace:
            return x;
        case Kind::Point:
            return a_;
        case Kind::Ball: {
            Vec d = sub(x, a_);
            double n = norm(d);
            if (n <= scalar_) return x;
            Vec p = a_;
            axpy(p, scalar_ / n, d);
            return p;
        }
        case Kind::Box: {
            Vec p(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::clamp(x[i], a_[i], b_[i]);
            return p;
        }
        case Kind::Halfspace:
            return project_halfspace(a_, scalar_, x);
        case Kind::Polyhedron:
            return project_polyhedron(x);
        case Kind::NonnegativeOrthant: {
            Vec p(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(x[i], 0.0);
            return p;
        }
    }
    fail(Err::ArgumentError, "unreachable set kind");
}

double ConvexSet::distance(const Vec& x) const {
    if (kind_ == Kind::WholeSpace) return 0.0;
    if (kind_ == Kind::Point) return dist(x, a_);
    if (kind_ == Kind::Ball) return std::max(0.0, dist(x, a_) - scalar_);
    if (kind_ == Kind::Halfspace) return std::max(0.0, dot(a_, x) - scalar_) / norm(a_);
    return dist(x, project(x));
}

bool ConvexSet::strictly_inside(const Vec& x, double margin) const {
    switch (kind_) {
        case Kind::WholeSpace:
            return true;
        case Kind::Point:
            return false;
        case Kind::Ball:
            return dist(x, a_) < scalar_ - margin;
        case Kind::Box: {
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] < a_[i] + margin || x[i] > b_[i] - margin) return false;
            return true;
        }
        case Kind::Halfspace:
            return dot(a_, x) - scalar_ < -margin * norm(a_);
        case Kind::Polyhedron: {
            for (const auto& h : halves_)
                if (dot(h.normal, x) - h.offset >= -margin * norm(h.normal)) return false;
            return true;
        }
        case Kind::NonnegativeOrthant: {
            for (double xi : x)
                if (xi < margin) return false;
            return true;
        }
    }
    return false;
}

Vec ConvexSet::prox_normal_direction(const Vec& x) const {
    double d = distance(x);
    if (d <= tol::kSet)
        fail(Err::DegenerateDirection, "prox normal direction requested at a point of the set");
    return scale(sub(x, project(x)), 1.0 / d);
}

Vec ConvexSet::tangent_project(const Vec& x, const Vec& z) const {
    if (!contains(x)) fail(Err::DomainError, "tangent cone query at a point outside the set");
    const double act = 1e-9 * (1.0 + norm(x));
    switch (kind_) {
        case Kind::WholeSpace:
            return z;
        case Kind::Point:
            return zeros(z.size());
        case Kind::Ball: {
            Vec d = sub(x, a_);
            double n = norm(d);
            if (n < scalar_ - act) return z;
            Vec u = scale(d, 1.0 / n);
            double c = dot(z, u);
            if (c <= 0.0) return z;
            Vec t = z;
            axpy(t, -c, u);
            return t;
        }
        case Kind::Box: {
            Vec t = z;
            for (std::size_t i = 0; i < x.size(); ++i) {
                bool at_lo = x[i] <= a_[i] + act;
                bool at_hi = x[i] >= b_[i] - act;
                if (at_lo && at_hi)
                    t[i] = 0.0;
                else if (at_hi)
                    t[i] = std::min(z[i], 0.0);
                else if (at_lo)
                    t[i] = std::max(z[i], 0.0);
            }
            return t;
        }
        case Kind::Halfspace: {
            if (dot(a_, x) - scalar_ < -act * norm(a_)) return z;
            Vec u = normalized(a_);
            double c = dot(z, u);
            if (c <= 0.0) return z;
            Vec t = z;
            axpy(t, -c, u);
            return t;
        }
        case Kind::NonnegativeOrthant: {
            Vec t = z;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] <= act) t[i] = std::max(z[i], 0.0);
            return t;
        }
        case Kind::Polyhedron: {
            std::vector<Halfspace> active;
            for (const auto& h : halves_)
                if (dot(h.normal, x) - h.offset >= -act * norm(h.normal))
                    active.push_back(Halfspace{h.normal, 0.0});
            if (active.empty()) return z;
            ConvexSet cone = ConvexSet::polyhedron(std::move(active));
            return cone.project_polyhedron(z);
        }
    }
    fail(Err::ArgumentError, "unreachable set kind");
}

Vec ConvexSet::normal_project(const Vec& x, const Vec& z) const {
    return sub(z, tangent_project(x, z));
}

double ConvexSet::cone_cap_ball_support(const Vec& x, const Vec& z) const {
    return norm(normal_project(x, z));
}

Vec ConvexSet::normal_cap_ball_project(const Vec& x, const Vec& z) const {
    Vec p = normal_project(x, z);
    double n = norm(p);
    if (n > 1.0) return scale(p, 1.0 / n);
    return p;
}

nlohmann::json ConvexSet::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case Kind::WholeSpace:
            j["variant"] = "whole_space";
            j["dim"] = dim_;
            break;
        case Kind::Point:
            j["variant"] = "point";
            j["point"] = a_;
            break;
        case Kind::Ball:
            j["variant"] = "ball";
            j["center"] = a_;
            j["radius"] = scalar_;
            break;
        case Kind::Box:
            j["variant"] = "box";
            j["lo"] = a_;
            j["hi"] = b_;
            break;
        case Kind::Halfspace:
            j["variant"] = "halfspace";
            j["normal"] = a_;
            j["offset"] = scalar_;
            break;
        case Kind::Polyhedron: {
            j["variant"] = "polyhedron";
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& h : halves_)
                arr.push_back({{"normal", h.normal}, {"offset", h.offset}});
            j["halfspaces"] = arr;
            break;
        }
        case Kind::NonnegativeOrthant:
            j["variant"] = "nonnegative_orthant";
            j["dim"] = dim_;
            break;
    }
    return j;
}

ConvexSet ConvexSet::from_json(const nlohmann::json& j) {
    const std::string v = j.at("variant").get<std::string>();
    if (v == "whole_space") return whole_space(j.at("dim").get<int>());
    if (v == "point") return point(j.at("point").get<Vec>());
    if (v == "ball") return ball(j.at("center").get<Vec>(), j.at("radius").get<double>());
    if (v == "box") return box(j.at("lo").get<Vec>(), j.at("hi").get<Vec>());
    if (v == "halfspace")
        return halfspace(j.at("normal").get<Vec>(), j.at("offset").get<double>());
    if (v == "polyhedron") {
        std::vector<Halfspace> hs;
        for (const auto& hj : j.at("halfspaces"))
            hs.push_back(Halfspace{hj.at("normal").get<Vec>(), hj.at("offset").get<double>()});
        return polyhedron(std::move(hs));
    }
    if (v == "nonnegative_orthant") return nonnegative_orthant(j.at("dim").get<int>());
    fail(Err::SchemaError, "unknown set variant: " + v);
}

MeanValueWitness mean_value_witness(const ConvexSet& S, const Vec& x, const Vec& y, double r,
                                    double eps, std::uint64_t seed) {
    if (eps <= 0.0) fail(Err::ArgumentError, "mean value witness requires eps > 0");
    if (!(r < S.distance(y) - S.distance(x)))
        fail(Err::ArgumentError, "mean value witness requires r < d(y;S) - d(x;S)");

    Vec step = sub(y, x);
    auto subgradient_at = [&](const Vec& z) -> Vec {
        if (S.distance(z) > tol::kSet) return S.prox_normal_direction(z);
        return zeros(z.size());  // 0 is always a proximal subgradient of d on S
    };

    const int segment_samples = tol::kWitnessSamples / 2;
    Rng rng = seeded_stream(seed, "mvi-witness");
    for (int i = 0; i < tol::kWitnessSamples; ++i) {
        Vec z;
        if (i < segment_samples) {
            double s = segment_samples == 1
                           ? 0.0
                           : static_cast<double>(i) / static_cast<double>(segment_samples - 1);
            z = x;
            axpy(z, s, step);
        } else {
            double s = rng.uniform();
            z = x;
            axpy(z, s, step);
            Vec jitter = rng.ball_point(x.size(), eps);
            z = add(z, jitter);
        }
        Vec zeta = subgradient_at(z);
        double inner = dot(zeta, step);
        if (r < inner) return MeanValueWitness{std::move(z), std::move(zeta), inner};
    }
    fail(Err::WitnessNotFound, "mean value witness search exhausted");
}

}  // namespace mflow
