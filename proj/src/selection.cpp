#include "mflow/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mflow/rng.hpp"
#include "mflow/tolerances.hpp"

namespace mflow {

namespace {

// Norm-family helpers in block coordinates: v has block length, delta > 0.
// Region by ||v|| against delta; the in-set branch is ||v|| <= tol::kSet.

Vec block_of(const Vec& x, int begin, int len) {
    return Vec(x.begin() + begin, x.begin() + begin + len);
}

Vec embed(const Vec& vb, int full_dim, int begin) {
    Vec r(static_cast<std::size_t>(full_dim), 0.0);
    for (std::size_t i = 0; i < vb.size(); ++i) r[begin + static_cast<int>(i)] = vb[i];
    return r;
}

}  // namespace

LipschitzFamily LipschitzFamily::distance(ConvexSet target) {
    LipschitzFamily f;
    f.kind_ = target.kind() == ConvexSet::Kind::Point ? Kind::Norm : Kind::Distance;
    f.dim_ = target.dim();
    f.bound_ = 1.0;
    f.target_ = std::make_shared<const ConvexSet>(std::move(target));
    return f;
}

LipschitzFamily LipschitzFamily::norm(int dim) {
    return distance(ConvexSet::point(zeros(static_cast<std::size_t>(dim))));
}

LipschitzFamily LipschitzFamily::smooth(OperatorDecomposition dec) {
    LipschitzFamily f;
    f.kind_ = Kind::Smooth;
    f.dim_ = dec.F.dim;
    f.bound_ = dec.b;
    f.smooth_dec_ = std::make_shared<const OperatorDecomposition>(std::move(dec));
    return f;
}

LipschitzFamily LipschitzFamily::block_scaled_norm(int full_dim, int block_begin, int block_len,
                                                   double scale) {
    if (scale <= 0.0) fail(Err::ConstructionError, "block scale must be > 0");
    if (block_begin < 0 || block_len <= 0 || block_begin + block_len > full_dim)
        fail(Err::ConstructionError, "invalid block for block_scaled_norm family");
    LipschitzFamily f;
    f.kind_ = Kind::BlockScaledNorm;
    f.dim_ = full_dim;
    f.bound_ = scale;
    f.block_begin_ = block_begin;
    f.block_len_ = block_len;
    f.scale_ = scale;
    return f;
}

LipschitzFamily LipschitzFamily::custom(int dim, double bound,
                                        std::function<Value(int, const Vec&)> eval_Fk,
                                        std::function<Value(const Vec&)> eval_F,
                                        std::uint64_t admission_seed) {
    LipschitzFamily f;
    f.kind_ = Kind::Custom;
    f.dim_ = dim;
    f.bound_ = bound;
    f.custom_Fk_ = std::move(eval_Fk);
    f.custom_F_ = std::move(eval_F);
    // Admission gate: the nesting/convergence contract is existential in the
    // underlying theorem, so user families are checked empirically before use.
    Rng rng = seeded_stream(admission_seed, "custom-family-admission");
    for (int i = 0; i < 16; ++i) {
        Vec x = rng.ball_point(static_cast<std::size_t>(dim), 2.0);
        NestingReport rep = nesting_check(f, x, 8, 32, admission_seed);
        if (!rep.ok)
            fail(Err::ConstructionError,
                 "custom family rejected: nesting check failed on seeded samples");
    }
    return f;
}

double LipschitzFamily::delta(int k) const {
    if (k < 1) fail(Err::ArgumentError, "family index k must be >= 1");
    return 1.0 / static_cast<double>(k);
}

LipschitzFamily::Region LipschitzFamily::region(int k, const Vec& x) const {
    switch (kind_) {
        case Kind::Smooth:
            return Region::SmoothRegion;
        case Kind::Custom:
            return Region::SmoothRegion;
        case Kind::Distance:
        case Kind::Norm: {
            double nv = target_->distance(x);
            if (nv <= tol::kSet) return Region::InSet;
            return nv >= delta(k) ? Region::Outer : Region::Blend;
        }
        case Kind::BlockScaledNorm: {
            double nv = mflow::norm(block_of(x, block_begin_, block_len_));
            if (nv <= tol::kSet) return Region::InSet;
            return nv >= delta(k) ? Region::Outer : Region::Blend;
        }
    }
    fail(Err::ArgumentError, "unreachable family kind");
}

std::string LipschitzFamily::region_name(Region r) {
    switch (r) {
        case Region::Outer: return "outer";
        case Region::Blend: return "blend";
        case Region::InSet: return "inset";
        case Region::SmoothRegion: return "smooth";
    }
    return "?";
}

Value LipschitzFamily::eval_F(const Vec& x) const {
    switch (kind_) {
        case Kind::Smooth:
            return smooth_dec_->F.eval(x);
        case Kind::Custom:
            return custom_F_(x);
        case Kind::Distance:
        case Kind::Norm: {
            double nv = target_->distance(x);
            if (nv > tol::kSet) return Value::singleton(target_->prox_normal_direction(x));
            if (target_->kind() == ConvexSet::Kind::Point)
                return Value::ball(zeros(static_cast<std::size_t>(dim_)), 1.0);
            return Value::cone_cap_ball(*target_, target_->project(x));
        }
        case Kind::BlockScaledNorm: {
            Vec vb = block_of(x, block_begin_, block_len_);
            double nv = mflow::norm(vb);
            if (nv > tol::kSet)
                return Value::singleton(embed(scale(vb, scale_ / nv), dim_, block_begin_));
            return Value::block_ball(zeros(static_cast<std::size_t>(dim_)), scale_, block_begin_,
                                     block_len_);
        }
    }
    fail(Err::ArgumentError, "unreachable family kind");
}

Value LipschitzFamily::eval_Fk(int k, const Vec& x) const {
    const double dk = delta(k);
    switch (kind_) {
        case Kind::Smooth:
            return smooth_dec_->F.eval(x);
        case Kind::Custom:
            return custom_Fk_(k, x);
        case Kind::Distance:
        case Kind::Norm: {
            double nv = target_->distance(x);
            if (nv >= dk) return Value::singleton(target_->prox_normal_direction(x));
            if (nv > tol::kSet) {
                double alpha = nv / dk;
                Vec u = target_->prox_normal_direction(x);
                return Value::ball(scale(u, alpha), 1.0 - alpha);
            }
            if (target_->kind() == ConvexSet::Kind::Point)
                return Value::ball(zeros(static_cast<std::size_t>(dim_)), 1.0);
            return Value::cone_cap_ball(*target_, target_->project(x));
        }
        case Kind::BlockScaledNorm: {
            Vec vb = block_of(x, block_begin_, block_len_);
            double nv = mflow::norm(vb);
            if (nv >= dk)
                return Value::singleton(embed(scale(vb, scale_ / nv), dim_, block_begin_));
            if (nv > tol::kSet) {
                double alpha = nv / dk;
                Vec center = embed(scale(vb, scale_ * alpha / nv), dim_, block_begin_);
                return Value::block_ball(std::move(center), scale_ * (1.0 - alpha), block_begin_,
                                         block_len_);
            }
            return Value::block_ball(zeros(static_cast<std::size_t>(dim_)), scale_, block_begin_,
                                     block_len_);
        }
    }
    fail(Err::ArgumentError, "unreachable family kind");
}

Vec LipschitzFamily::eval_psi(int k, const Vec& x) const {
    const double dk = delta(k);
    switch (kind_) {
        case Kind::Smooth:
            return smooth_dec_->F.eval(x).origin_projection();
        case Kind::Custom:
            return custom_Fk_(k, x).origin_projection();
        case Kind::Distance:
        case Kind::Norm: {
            double nv = target_->distance(x);
            if (nv <= tol::kSet) return zeros(static_cast<std::size_t>(dim_));
            Vec u = target_->prox_normal_direction(x);
            if (nv >= dk) return u;
            // Origin projection of the blended ball: zero while the origin is
            // interior (alpha <= 1/2), then (2 alpha - 1) u.
            double beta = 2.0 * (nv / dk) - 1.0;
            return scale(u, std::max(beta, 0.0));
        }
        case Kind::BlockScaledNorm: {
            Vec vb = block_of(x, block_begin_, block_len_);
            double nv = mflow::norm(vb);
            if (nv <= tol::kSet) return zeros(static_cast<std::size_t>(dim_));
            Vec ub = scale(vb, 1.0 / nv);
            double mag = nv >= dk ? 1.0 : std::max(2.0 * (nv / dk) - 1.0, 0.0);
            return embed(scale(ub, scale_ * mag), dim_, block_begin_);
        }
    }
    fail(Err::ArgumentError, "unreachable family kind");
}

RatioScanReport lipschitz_ratio_scan(const LipschitzFamily& fam, int k,
                                     const std::vector<std::pair<Vec, Vec>>& pairs) {
    if (pairs.empty()) fail(Err::ArgumentError, "ratio scan needs pairs");
    const double dk = fam.delta(k);
    RatioScanReport rep;
    for (const auto& [x, y] : pairs) {
        double dxy = dist(x, y);
        if (dxy == 0.0) {
            rep.skipped_coincident += 1;
            continue;
        }
        double ratio = dist(fam.eval_psi(k, x), fam.eval_psi(k, y)) / dxy;
        auto rx = LipschitzFamily::region_name(fam.region(k, x));
        auto ry = LipschitzFamily::region_name(fam.region(k, y));
        std::string key = rx <= ry ? rx + "-" + ry : ry + "-" + rx;
        auto& m = rep.region_max[key];
        m = std::max(m, ratio);
        if (ratio > rep.global_max) {
            rep.global_max = ratio;
            rep.worst_pair = {x, y};
        }
    }
    const double slack = 1e-9;
    rep.ok_global = rep.global_max <= 8.0 / dk + slack;
    if (auto it = rep.region_max.find("outer-outer"); it != rep.region_max.end())
        rep.ok_outer = it->second <= 4.0 / dk + slack;
    if (auto it = rep.region_max.find("inset-outer"); it != rep.region_max.end())
        rep.ok_boundary = it->second <= 1.0 / dk + slack;
    return rep;
}

NestingReport nesting_check(const LipschitzFamily& fam, const Vec& x, int k_max, int n_dirs,
                            std::uint64_t seed) {
    if (k_max < 2) fail(Err::ArgumentError, "nesting check needs k_max >= 2");
    auto dirs = unit_directions(static_cast<std::size_t>(fam.dim()),
                                static_cast<std::size_t>(n_dirs), seed);
    NestingReport rep;
    rep.worst_outer_gap = rep.worst_base_gap = rep.worst_bound_slack =
        std::numeric_limits<double>::infinity();
    Value base = fam.eval_F(x);
    Value prev = fam.eval_Fk(1, x);
    for (int k = 1; k < k_max; ++k) {
        Value next = fam.eval_Fk(k + 1, x);
        for (const auto& d : dirs) {
            double s_prev = prev.support(d), s_next = next.support(d), s_base = base.support(d);
            rep.worst_outer_gap = std::min(rep.worst_outer_gap, s_prev - s_next);
            rep.worst_base_gap = std::min(rep.worst_base_gap, s_next - s_base);
            rep.worst_bound_slack = std::min(rep.worst_bound_slack, fam.bound() - s_prev);
        }
        prev = std::move(next);
    }
    const double slack = 1e-9;
    rep.ok = rep.worst_outer_gap >= -slack && rep.worst_base_gap >= -slack &&
             rep.worst_bound_slack >= -slack;
    return rep;
}

ConvergenceProbe graphical_convergence_probe(const LipschitzFamily& fam, const Vec& x, double eps,
                                             int k_max, std::uint64_t seed) {
    if (eps <= 0.0) fail(Err::ArgumentError, "convergence probe needs eps > 0");
    auto dirs = unit_directions(static_cast<std::size_t>(fam.dim()), tol::kSupportDirs, seed);
    Value base = fam.eval_F(x);
    ConvergenceProbe probe;
    for (int k = 1; k <= k_max; ++k) {
        Value fk = fam.eval_Fk(k, x);
        double excess = 0.0;
        for (const auto& d : dirs)
            excess = std::max(excess, fk.support(d) - base.support(d) - eps);
        if (excess <= 0.0) {
            probe.converged = true;
            probe.k = k;
            return probe;
        }
        probe.max_excess = excess;
    }
    return probe;  // not converged within the tested range
}

}  // namespace mflow
