#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mflow/catalog.hpp"

namespace mflow {

struct InvariantResult {
    std::string name;
    long samples = 0;
    double worst_margin = 0.0;  // violation amount; <= 0 passes
    bool pass = true;
    nlohmann::json witness;
};

struct SuiteResult {
    std::string suite;
    std::vector<InvariantResult> invariants;
    bool all_pass() const;
    nlohmann::json to_json() const;
};

std::vector<std::string> suite_names();  // geometry, selection, hamiltonian, multipliers

/// Runs one named invariant suite with fixed seeds. Unknown names raise
/// Err::ArgumentError.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

// Shared scenario builders for suites, tests and the acceptance criteria.
Scenario make_norm_scenario(int dim, int k);      // f = -x, A = subdiff ||.||
Scenario make_distance_scenario(int k);           // f = -x, A = subdiff d(.; ball), n = 2
Scenario make_wall_scenario();                    // 1-D f = -1 against C = [0, inf)

/// Region-stratified sample pairs for the selection ratio scans: exact target
/// points, blend-band points and outer points all occur.
std::vector<std::pair<Vec, Vec>> sample_region_pairs(const LipschitzFamily& fam, int k, int n,
                                                     std::uint64_t seed);

struct ApproxGapSweep {
    long n = 0;
    double worst = 0.0;  // max of h - h_k - eps ||zeta|| over the sweep
    bool all_ok = true;
};

/// Runs the Hamiltonian approximation inequality over seeded (x, zeta) pairs.
ApproxGapSweep approx_gap_sweep(const Scenario& sc, int k, int n_pairs, std::uint64_t seed);

struct NestingSweep {
    double min_outer_gap = 0.0;   // min over points of supp F_k - supp F_{k+1}
    double min_base_gap = 0.0;    // min of supp F_{k+1} - supp F
    double min_bound_slack = 0.0; // min of b - supp F_k
    bool exact_once_past_delta = true;  // F_k(x) = clco A0(x) once delta_k <= ||v(x)||
};

NestingSweep nesting_sweep(const LipschitzFamily& fam, int n_points, int k_max, int n_dirs,
                           std::uint64_t seed);

}  // namespace mflow
