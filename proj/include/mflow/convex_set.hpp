#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mflow/error.hpp"
#include "mflow/tolerances.hpp"
#include "mflow/vec.hpp"

namespace mflow {

/// One halfspace { x : <normal, x> <= offset }.
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

/// Closed convex subset of R^n with exact projections and distance, normal and
/// tangent cone queries at points of the set.
///
/// All variants except Polyhedron have closed-form projections. Polyhedron
/// projection runs Dykstra alternating projections over its halfspaces and
/// reports an infeasible-set error when the intersection is empty.
class ConvexSet {
public:
    enum class Kind { WholeSpace, Point, Ball, Box, Halfspace, Polyhedron, NonnegativeOrthant };

    ConvexSet() = default;  // whole space of dimension 0; placeholder

    static ConvexSet whole_space(int dim);
    static ConvexSet point(Vec p);
    static ConvexSet ball(Vec center, double radius);
    static ConvexSet box(Vec lo, Vec hi);
    static ConvexSet halfspace(Vec normal, double offset);
    static ConvexSet polyhedron(std::vector<Halfspace> halves);
    static ConvexSet nonnegative_orthant(int dim);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    /// Nearest point of the set; unique by convexity.
    Vec project(const Vec& x) const;

    /// d(x; S) = ||x - project(x)||.
    double distance(const Vec& x) const;

    bool contains(const Vec& x, double tolerance = tol::kSet) const {
        return distance(x) <= tolerance;
    }

    /// True when x is at depth > margin inside the set (normal cone = {0}).
    bool strictly_inside(const Vec& x, double margin) const;

    /// Unit proximal normal (x - project(x)) / d(x;S). Requires d(x;S) > tol.
    Vec prox_normal_direction(const Vec& x) const;

    /// Projection of z onto the tangent cone T_S(x). Requires x in S.
    Vec tangent_project(const Vec& x, const Vec& z) const;

    /// Moreau complement: z - tangent_project(x, z), lies in N_S(x).
    Vec normal_project(const Vec& x, const Vec& z) const;

    /// sup { <z, eta> : eta in N_S(x), ||eta|| <= 1 } = d(z; T_S(x)).
    double cone_cap_ball_support(const Vec& x, const Vec& z) const;

    /// Projection of z onto N_S(x) ∩ B (radial clamp of the cone projection).
    Vec normal_cap_ball_project(const Vec& x, const Vec& z) const;

    nlohmann::json to_json() const;
    static ConvexSet from_json(const nlohmann::json& j);

    // Variant payload access (used by tests and sampling code).
    const Vec& point_value() const { return a_; }
    const Vec& ball_center() const { return a_; }
    double ball_radius() const { return scalar_; }
    const Vec& box_lo() const { return a_; }
    const Vec& box_hi() const { return b_; }
    const Vec& halfspace_normal() const { return a_; }
    double halfspace_offset() const { return scalar_; }
    const std::vector<Halfspace>& halfspaces() const { return halves_; }

private:
    Kind kind_ = Kind::WholeSpace;
    int dim_ = 0;
    Vec a_, b_;        // point / center / lo,hi / normal
    double scalar_ = 0.0;  // radius / offset
    std::vector<Halfspace> halves_;

    Vec project_polyhedron(const Vec& x) const;
};

struct MeanValueWitness {
    Vec z;      // point within [x,y] + eps*B
    Vec zeta;   // proximal subgradient of d(.;S) at z
    double inner = 0.0;  // <zeta, y - x>
};

/// Exhibits a witness for the mean value inequality: for r < d(y;S) - d(x;S)
/// finds z near the segment [x,y] and zeta in the proximal subdifferential of
/// d(.;S) at z with r < <zeta, y - x>. Search failure signals numerical
/// failure, not falsity.
MeanValueWitness mean_value_witness(const ConvexSet& S, const Vec& x, const Vec& y, double r,
                                    double eps, std::uint64_t seed = 0);

}  // namespace mflow
