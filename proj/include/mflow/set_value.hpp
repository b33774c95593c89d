#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "mflow/convex_set.hpp"
#include "mflow/vec.hpp"

namespace mflow {

/// A single value of a set-valued map: nonempty, convex and compact, exposed
/// through its support function, support points, and nearest-point queries.
///
/// Ball values may be restricted to a contiguous coordinate block, which
/// represents values embedded in a sub-block of the state (a ball in the
/// velocity coordinates of a second-order system, say).
class Value {
public:
    enum class Kind { Singleton, Ball, ConeCapBall, Polytope, Sum };

    static Value singleton(Vec p);
    static Value ball(Vec center, double radius);
    static Value block_ball(Vec center, double radius, int block_begin, int block_len);
    /// N_S(base) ∩ B for base in S; support routes through the tangent cone.
    static Value cone_cap_ball(ConvexSet S, Vec base);
    static Value polytope(std::vector<Vec> vertices);
    /// Minkowski combination sum_i coef_i * term_i with coef_i >= 0.
    /// Singleton and full-ball terms fold into a single shifted ball.
    static Value sum(std::vector<std::pair<double, Value>> terms);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    /// sup { <zeta, g> : g in value }; positively homogeneous and subadditive.
    double support(const Vec& zeta) const;

    /// A maximizer of <zeta, .> over the value.
    Vec support_point(const Vec& zeta) const;

    /// The unique nearest point of the value to the origin.
    Vec origin_projection() const;

    /// Projection of z onto the value.
    Vec nearest_point(const Vec& z) const;

    const Vec& singleton_point() const { return center_; }
    const Vec& ball_center() const { return center_; }
    double ball_radius() const { return radius_; }
    int block_begin() const { return block_begin_; }
    int block_len() const { return block_len_; }
    const std::vector<Vec>& vertices() const { return vertices_; }

private:
    Value() = default;

    Kind kind_ = Kind::Singleton;
    int dim_ = 0;
    Vec center_;                       // singleton point / ball center
    double radius_ = 0.0;
    int block_begin_ = 0, block_len_ = 0;  // ball block restriction (len 0 = full)
    std::shared_ptr<const ConvexSet> cone_set_;
    Vec cone_base_;
    std::vector<Vec> vertices_;
    std::vector<std::pair<double, Value>> terms_;
};

/// Hausdorff distance between two values: exact for singleton/ball pairs,
/// support sampling over the direction set otherwise.
double hausdorff(const Value& a, const Value& b, const std::vector<Vec>& dirs);

/// One-sided excess max_dirs (support_a - support_b); nonnegative when b ⊆ a.
double support_excess(const Value& a, const Value& b, const std::vector<Vec>& dirs);

/// Support-based membership check: <zeta, p> <= support(zeta) + tol on dirs.
bool support_contains(const Value& v, const Vec& p, const std::vector<Vec>& dirs, double tolerance);

}  // namespace mflow
