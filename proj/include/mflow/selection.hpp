#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mflow/operator_core.hpp"

namespace mflow {

/// Nested Lipschitz approximations F_k of clco A0, indexed by delta_k = 1/k,
/// together with the single-valued selection psi_k(x) = proj_{F_k(x)}(0).
///
/// The distance/norm constructions blend a singleton with the unit ball over
/// the band 0 < ||v(x)|| < delta_k, where v(x) = x - proj_C(x). The selection
/// is the exact origin projection of the blended ball: it vanishes while the
/// origin stays interior (||v|| <= delta_k/2) and then grows linearly as
/// (2||v||/delta_k - 1) u(x) up to the unit sphere.
class LipschitzFamily {
public:
    enum class Kind { Distance, Norm, Smooth, BlockScaledNorm, Custom };
    enum class Region { Outer, Blend, InSet, SmoothRegion };

    LipschitzFamily() = default;  // placeholder; build through the factories

    /// Appendix construction for F = Clarke subdifferential of d(.; target).
    static LipschitzFamily distance(ConvexSet target);

    /// The C = {0} case (F = Clarke subdifferential of the norm).
    static LipschitzFamily norm(int dim);

    /// Trivial family for single-valued continuous clco A0: F_k = F for all k.
    static LipschitzFamily smooth(OperatorDecomposition dec);

    /// Norm family acting on a coordinate block, scaled by scale > 0; values
    /// live in {0} x scale * F_k^norm(x_block).
    static LipschitzFamily block_scaled_norm(int full_dim, int block_begin, int block_len,
                                             double scale);

    /// User-supplied family; admitted only after a seeded nesting check over
    /// sample points (the nesting/convergence contract is enforced
    /// empirically).
    static LipschitzFamily custom(int dim, double bound,
                                  std::function<Value(int, const Vec&)> eval_Fk,
                                  std::function<Value(const Vec&)> eval_F,
                                  std::uint64_t admission_seed = 0);

    Kind family_kind() const { return kind_; }
    int dim() const { return dim_; }
    double bound() const { return bound_; }
    int block_begin() const { return block_begin_; }
    int block_len() const { return block_len_; }
    double block_scale() const { return scale_; }
    double delta(int k) const;

    Value eval_F(const Vec& x) const;          // base clco A0 value
    Value eval_Fk(int k, const Vec& x) const;  // k >= 1
    Vec eval_psi(int k, const Vec& x) const;   // = origin_projection(eval_Fk(k, x))
    Region region(int k, const Vec& x) const;

    static std::string region_name(Region r);

private:
    Kind kind_ = Kind::Norm;
    int dim_ = 0;
    double bound_ = 1.0;
    std::shared_ptr<const ConvexSet> target_;
    std::shared_ptr<const OperatorDecomposition> smooth_dec_;
    int block_begin_ = 0, block_len_ = 0;
    double scale_ = 1.0;
    std::function<Value(int, const Vec&)> custom_Fk_;
    std::function<Value(const Vec&)> custom_F_;
};

struct RatioScanReport {
    double global_max = 0.0;
    std::pair<Vec, Vec> worst_pair;
    std::map<std::string, double> region_max;  // keyed "outer-outer", "inset-outer", ...
    int skipped_coincident = 0;
    bool ok_global = true;    // global_max <= 8/delta_k
    bool ok_outer = true;     // both-outer max <= 4/delta_k
    bool ok_boundary = true;  // inset-vs-outer max <= 1/delta_k
};

/// Max of ||psi_k(x) - psi_k(y)|| / ||x - y|| over the pairs, partitioned by
/// region combination, checked against the construction's per-case constants.
RatioScanReport lipschitz_ratio_scan(const LipschitzFamily& fam, int k,
                                     const std::vector<std::pair<Vec, Vec>>& pairs);

struct NestingReport {
    bool ok = true;
    double worst_outer_gap = 0.0;    // min over (k, dir) of supp F_k - supp F_{k+1}
    double worst_base_gap = 0.0;     // min of supp F_{k+1} - supp F
    double worst_bound_slack = 0.0;  // min of b - supp F_k
};

/// Checks supp_F <= supp_F_{k+1} <= supp_F_k <= b on sampled unit directions
/// for k = 1..k_max-1 at the point x.
NestingReport nesting_check(const LipschitzFamily& fam, const Vec& x, int k_max, int n_dirs,
                            std::uint64_t seed = 0);

struct ConvergenceProbe {
    bool converged = false;
    int k = 0;             // least tested k with F_k(x) ⊆ F(x) + eps B
    double max_excess = 0.0;  // remaining excess at k_max when not converged
};

/// Least k in 1..k_max with support excess of F_k(x) over F(x) + eps B
/// nonpositive on sampled directions.
ConvergenceProbe graphical_convergence_probe(const LipschitzFamily& fam, const Vec& x, double eps,
                                             int k_max = 100, std::uint64_t seed = 0);

}  // namespace mflow
