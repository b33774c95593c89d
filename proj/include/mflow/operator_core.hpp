#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mflow/set_value.hpp"

namespace mflow {

/// Twice differentiable potential with value/gradient/Hessian oracles.
struct SmoothFn {
    int dim = 0;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
    std::function<Mat(const Vec&)> hess;  // may be empty when a caller never needs it

    static SmoothFn quadratic(int dim, double scale);  // 0.5 * scale * ||x||^2
    static SmoothFn poly1d(std::vector<double> coeffs);  // sum coeffs[i] x^i
};

/// x -> clco A0(x) with a declared uniform bound: value ⊆ bound * B on the
/// sampled domain.
struct SetValuedMap {
    int dim = 0;
    double bound = 0.0;
    std::function<Value(const Vec&)> eval;
};

/// The pair (F = clco A0, C = cl(dom A)) plus the uniform bound b.
struct OperatorDecomposition {
    SetValuedMap F;
    ConvexSet C;
    double b = 0.0;
};

/// Maximally monotone operator catalog. Arbitrary operators are rejected at
/// construction; the catalog covers every operator instantiated by the
/// shipped scenarios.
class OperatorSpec {
public:
    enum class Kind { GradientOfSmooth, SubdiffNorm, SubdiffDistance, NormalConeOp, ScaledSum };

    static OperatorSpec gradient_of_smooth(SmoothFn phi);
    static OperatorSpec subdiff_norm(int dim);
    static OperatorSpec subdiff_distance(ConvexSet target);
    static OperatorSpec normal_cone(ConvexSet set);
    static OperatorSpec scaled_sum(std::vector<std::pair<double, OperatorSpec>> parts);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const SmoothFn& smooth() const { return phi_; }
    const ConvexSet& set() const { return *set_; }
    const std::vector<std::pair<double, OperatorSpec>>& parts() const { return parts_; }

    static OperatorSpec from_json(const nlohmann::json& j);

private:
    OperatorSpec() = default;
    Kind kind_ = Kind::SubdiffNorm;
    int dim_ = 0;
    SmoothFn phi_;
    std::shared_ptr<const ConvexSet> set_;
    std::vector<std::pair<double, OperatorSpec>> parts_;
};

/// Region on which regional bounds of unbounded smooth operators are taken.
struct RegionHint {
    Vec center;
    double radius = 10.0;
};

/// Builds (F, C, b) with F(x) = clco A0(x) and C = cl(dom A). For the
/// subdifferential variants F equals the Clarke subdifferential. The bound b
/// defaults per variant; smooth unbounded operators estimate it by sampling
/// over the region hint.
OperatorDecomposition decompose(const OperatorSpec& spec,
                                std::optional<RegionHint> hint = std::nullopt,
                                std::optional<double> declared_b = std::nullopt,
                                std::uint64_t seed = 0);

/// clco A0(x); requires x in C (within the membership tolerance).
Value clco_A0(const OperatorDecomposition& dec, const Vec& x);

struct GraphProbeRing {
    double radius_hi = 0.0;
    double worst_excess = 0.0;  // max over ring samples of excess beyond tau_usc
    int samples = 0;
};

struct GraphProbeReport {
    double worst_bound_excess = 0.0;  // max support on unit dirs minus b
    std::vector<GraphProbeRing> rings;  // outermost first
    bool usc_trend_ok = true;
    nlohmann::json to_json() const;
};

/// Samples y in B(x, radius) and reports local boundedness and outer-limit
/// containment evidence for F. Report-only, never throws on violations.
GraphProbeReport graph_regularity_probe(const SetValuedMap& F, const Vec& x, double radius,
                                        int n_samples, std::uint64_t seed = 0,
                                        double tau_usc = 1e-9);

}  // namespace mflow
