#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "mflow/catalog.hpp"

namespace mflow {

struct Tolerances {
    double vel = tol::kVel;
    double mult = tol::kMult;
    double pen = tol::kPen;
    double lyap = tol::kLyap;
    double conv = tol::kConv;
    double eq = tol::kEq;
};

struct SweepSpec {
    std::string kind;  // "lambda" | "k"
    std::vector<double> grid;
};

/// Parsed run configuration. The schema is strict: unknown keys are rejected
/// with a pointer to the offending field.
struct RunConfig {
    std::string scenario_name;  // catalog name or "inline"
    std::vector<double> lambdas{1e-3};
    double T = 0.0;     // 0 = builder default
    double h_max = 1e-3;
    std::optional<int> k;
    std::optional<StepMode> mode;
    Tolerances tolerances;
    std::string out_dir;
    std::uint64_t seed = 42;
    bool plots = true;
    std::optional<SweepSpec> sweep;

    CatalogSystem system;
    bool has_pair = false;
};

/// Parses and validates a config document, building the scenario it names.
/// Schema violations raise Err::SchemaError with a path to the field.
RunConfig load_run_config(const nlohmann::json& j);

RunConfig load_run_config_file(const std::string& path);

}  // namespace mflow
