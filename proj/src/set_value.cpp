#include "mflow/set_value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mflow {

namespace {

double block_norm(const Vec& z, int begin, int len) {
    double s = 0.0;
    for (int i = begin; i < begin + len; ++i) s += z[i] * z[i];
    return std::sqrt(s);
}

}  // namespace

Value Value::singleton(Vec p) {
    Value v;
    v.kind_ = Kind::Singleton;
    v.dim_ = static_cast<int>(p.size());
    v.center_ = std::move(p);
    return v;
}

Value Value::ball(Vec center, double radius) {
    if (radius < 0.0) fail(Err::ConstructionError, "ball value radius must be >= 0");
    Value v;
    v.kind_ = Kind::Ball;
    v.dim_ = static_cast<int>(center.size());
    v.center_ = std::move(center);
    v.radius_ = radius;
    v.block_begin_ = 0;
    v.block_len_ = v.dim_;
    return v;
}

Value Value::block_ball(Vec center, double radius, int block_begin, int block_len) {
    Value v = ball(std::move(center), radius);
    if (block_begin < 0 || block_len <= 0 || block_begin + block_len > v.dim_)
        fail(Err::ConstructionError, "invalid ball block restriction");
    v.block_begin_ = block_begin;
    v.block_len_ = block_len;
    return v;
}

Value Value::cone_cap_ball(ConvexSet S, Vec base) {
    if (!S.contains(base)) fail(Err::DomainError, "cone cap ball base point must lie in the set");
    Value v;
    v.kind_ = Kind::ConeCapBall;
    v.dim_ = static_cast<int>(base.size());
    v.cone_set_ = std::make_shared<const ConvexSet>(std::move(S));
    v.cone_base_ = std::move(base);
    return v;
}

Value Value::polytope(std::vector<Vec> vertices) {
    if (vertices.empty()) fail(Err::ConstructionError, "polytope value needs vertices");
    Value v;
    v.kind_ = Kind::Polytope;
    v.dim_ = static_cast<int>(vertices.front().size());
    v.vertices_ = std::move(vertices);
    return v;
}

Value Value::sum(std::vector<std::pair<double, Value>> terms) {
    if (terms.empty()) fail(Err::ConstructionError, "sum value needs terms");
    for (const auto& [c, t] : terms) {
        (void)t;
        if (c < 0.0) fail(Err::ConstructionError, "sum coefficients must be >= 0");
    }
    // Fold singletons and full balls into one shifted ball when possible.
    int dim = terms.front().second.dim();
    Vec shift = zeros(dim);
    double radius = 0.0;
    bool foldable = true;
    for (const auto& [c, t] : terms) {
        if (t.dim() != dim) fail(Err::DomainMismatch, "sum value dimension mismatch");
        if (t.kind() == Kind::Singleton) {
            axpy(shift, c, t.singleton_point());
        } else if (t.kind() == Kind::Ball && t.block_len() == t.dim()) {
            axpy(shift, c, t.ball_center());
            radius += c * t.ball_radius();
        } else {
            foldable = false;
        }
    }
    if (foldable) {
        if (radius == 0.0) return singleton(std::move(shift));
        return ball(std::move(shift), radius);
    }
    Value v;
    v.kind_ = Kind::Sum;
    v.dim_ = dim;
    v.terms_ = std::move(terms);
    return v;
}

double Value::support(const Vec& zeta) const {
    switch (kind_) {
        case Kind::Singleton:
            return dot(zeta, center_);
        case Kind::Ball:
            return dot(zeta, center_) + radius_ * block_norm(zeta, block_begin_, block_len_);
        case Kind::ConeCapBall:
            return cone_set_->cone_cap_ball_support(cone_base_, zeta);
        case Kind::Polytope: {
            double best = dot(zeta, vertices_.front());
            for (std::size_t i = 1; i < vertices_.size(); ++i)
                best = std::max(best, dot(zeta, vertices_[i]));
            return best;
        }
        case Kind::Sum: {
            double s = 0.0;
            for (const auto& [c, t] : terms_) s += c * t.support(zeta);
            return s;
        }
    }
    fail(Err::ArgumentError, "unreachable value kind");
}

Vec Value::support_point(const Vec& zeta) const {
    switch (kind_) {
        case Kind::Singleton:
            return center_;
        case Kind::Ball: {
            double n = block_norm(zeta, block_begin_, block_len_);
            Vec p = center_;
            if (n > 0.0)
                for (int i = block_begin_; i < block_begin_ + block_len_; ++i)
                    p[i] += radius_ * zeta[i] / n;
            return p;
        }
        case Kind::ConeCapBall: {
            Vec p = cone_set_->normal_project(cone_base_, zeta);
            double n = norm(p);
            if (n > 0.0) return scale(p, 1.0 / n);
            return zeros(dim_);
        }
        case Kind::Polytope: {
            std::size_t best = 0;
            double bestv = dot(zeta, vertices_.front());
            for (std::size_t i = 1; i < vertices_.size(); ++i) {
                double v = dot(zeta, vertices_[i]);
                if (v > bestv) {
                    bestv = v;
                    best = i;
                }
            }
            return vertices_[best];
        }
        case Kind::Sum: {
            Vec p = zeros(dim_);
            for (const auto& [c, t] : terms_) axpy(p, c, t.support_point(zeta));
            return p;
        }
    }
    fail(Err::ArgumentError, "unreachable value kind");
}

Vec Value::origin_projection() const { return nearest_point(zeros(dim_)); }

Vec Value::nearest_point(const Vec& z) const {
    switch (kind_) {
        case Kind::Singleton:
            return center_;
        case Kind::Ball: {
            Vec p = center_;
            Vec d = sub(z, center_);
            double n = block_norm(d, block_begin_, block_len_);
            double k = n <= radius_ ? 1.0 : radius_ / n;
            for (int i = block_begin_; i < block_begin_ + block_len_; ++i) p[i] += k * d[i];
            return p;
        }
        case Kind::ConeCapBall:
            return cone_set_->normal_cap_ball_project(cone_base_, z);
        case Kind::Polytope: {
            // Away-step Frank-Wolfe on 1/2 ||q - z||^2 over the vertex hull;
            // converges linearly on polytopes.
            const std::size_t m = vertices_.size();
            std::vector<double> w(m, 0.0);
            w[0] = 1.0;
            Vec q = vertices_[0];
            for (int it = 0; it < 100000; ++it) {
                Vec grad = sub(q, z);
                std::size_t fw = 0, away = 0;
                double fw_val = dot(grad, vertices_[0]);
                double away_val = -std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < m; ++j) {
                    double v = dot(grad, vertices_[j]);
                    if (v < fw_val) {
                        fw_val = v;
                        fw = j;
                    }
                    if (w[j] > 0.0 && v > away_val) {
                        away_val = v;
                        away = j;
                    }
                }
                double gap = dot(grad, q) - fw_val;
                if (gap <= 1e-14 * (1.0 + norm2(q))) return q;
                double gap_away = away_val - dot(grad, q);
                if (gap >= gap_away) {
                    Vec d = sub(vertices_[fw], q);
                    double nd = norm2(d);
                    if (nd == 0.0) return q;
                    double gamma = std::clamp(-dot(grad, d) / nd, 0.0, 1.0);
                    for (std::size_t j = 0; j < m; ++j) w[j] *= (1.0 - gamma);
                    w[fw] += gamma;
                    axpy(q, gamma, d);
                } else {
                    Vec d = sub(q, vertices_[away]);
                    double nd = norm2(d);
                    if (nd == 0.0) return q;
                    double gmax = w[away] >= 1.0 ? 1e18 : w[away] / (1.0 - w[away]);
                    double gamma = std::clamp(-dot(grad, d) / nd, 0.0, gmax);
                    for (std::size_t j = 0; j < m; ++j) w[j] *= (1.0 + gamma);
                    w[away] -= gamma;
                    axpy(q, gamma, d);
                }
            }
            return q;
        }
        case Kind::Sum: {
            // Plain Frank-Wolfe through the support-point oracle.
            Vec q = support_point(zeros(dim_));
            for (int it = 1; it <= 200000; ++it) {
                Vec grad = sub(q, z);
                Vec s = support_point(scale(grad, -1.0));
                Vec d = sub(s, q);
                double gap = -dot(grad, d);
                if (gap <= 1e-10) return q;
                double nd = norm2(d);
                double gamma = std::clamp(-dot(grad, d) / nd, 0.0, 1.0);
                axpy(q, gamma, d);
            }
            fail(Err::NotConverged, "nearest point on sum value did not converge");
        }
    }
    fail(Err::ArgumentError, "unreachable value kind");
}

double hausdorff(const Value& a, const Value& b, const std::vector<Vec>& dirs) {
    auto is_ballish = [](const Value& v) {
        return v.kind() == Value::Kind::Singleton ||
               (v.kind() == Value::Kind::Ball && v.block_len() == v.dim());
    };
    if (is_ballish(a) && is_ballish(b)) {
        const Vec& ca = a.kind() == Value::Kind::Singleton ? a.singleton_point() : a.ball_center();
        const Vec& cb = b.kind() == Value::Kind::Singleton ? b.singleton_point() : b.ball_center();
        double ra = a.kind() == Value::Kind::Singleton ? 0.0 : a.ball_radius();
        double rb = b.kind() == Value::Kind::Singleton ? 0.0 : b.ball_radius();
        return dist(ca, cb) + std::abs(ra - rb);
    }
    double worst = 0.0;
    for (const auto& d : dirs) worst = std::max(worst, std::abs(a.support(d) - b.support(d)));
    return worst;
}

double support_excess(const Value& a, const Value& b, const std::vector<Vec>& dirs) {
    double worst = 0.0;
    for (const auto& d : dirs) worst = std::max(worst, a.support(d) - b.support(d));
    return worst;
}

bool support_contains(const Value& v, const Vec& p, const std::vector<Vec>& dirs,
                      double tolerance) {
    for (const auto& d : dirs)
        if (dot(d, p) > v.support(d) + tolerance) return false;
    return true;
}

}  // namespace mflow
