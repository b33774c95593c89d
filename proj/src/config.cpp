#include "mflow/config.hpp"

#include <fstream>
#include <set>

#include "mflow/rng.hpp"

namespace mflow {

namespace {

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            fail(Err::SchemaError, "unknown key '" + it.key() + "' at " + path);
}

double require_positive(const nlohmann::json& j, const std::string& key, const std::string& path,
                        double fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(Err::SchemaError, "missing key '" + key + "' at " + path);
        return fallback;
    }
    if (!j.at(key).is_number())
        fail(Err::SchemaError, "field '" + key + "' at " + path + " must be a number");
    double v = j.at(key).get<double>();
    if (!(v > 0.0)) fail(Err::SchemaError, "field '" + key + "' at " + path + " must be > 0");
    return v;
}

Vec vec_field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    if (v.is_number()) return Vec{v.get<double>()};
    if (v.is_array()) return v.get<Vec>();
    fail(Err::SchemaError, "field '" + key + "' at " + path + " must be a number or array");
}

CatalogSystem build_from_catalog(const std::string& name, const nlohmann::json& params,
                                 double T_override, std::optional<int> k_override) {
    if (name == "friction-1d") {
        check_keys(params, {"m", "alpha", "beta", "x0", "v0", "ybar", "T"}, "/params");
        FrictionParams p;
        p.m = require_positive(params, "m", "/params", p.m);
        p.alpha = require_positive(params, "alpha", "/params", p.alpha);
        p.beta = require_positive(params, "beta", "/params", p.beta);
        p.x0 = params.value("x0", p.x0);
        p.v0 = params.value("v0", p.v0);
        p.ybar = params.value("ybar", p.ybar);
        p.T = require_positive(params, "T", "/params", p.T);
        if (T_override > 0.0) p.T = T_override;
        if (k_override) p.k = *k_override;
        return build_friction(p);
    }
    if (name == "din-quadratic") {
        check_keys(params, {"alpha", "beta", "scale", "dim", "x0", "v0", "T"}, "/params");
        int dim = params.value("dim", 1);
        if (dim < 1) fail(Err::SchemaError, "field 'dim' at /params must be >= 1");
        DinParams p;
        p.phi = SmoothFn::quadratic(dim, params.value("scale", 1.0));
        p.alpha = require_positive(params, "alpha", "/params", p.alpha);
        p.beta = require_positive(params, "beta", "/params", p.beta);
        p.x0 = params.contains("x0") ? vec_field(params, "x0", "/params")
                                     : Vec(static_cast<std::size_t>(dim), 1.0);
        p.v0 = params.contains("v0") ? vec_field(params, "v0", "/params")
                                     : zeros(static_cast<std::size_t>(dim));
        p.T = require_positive(params, "T", "/params", p.T);
        if (T_override > 0.0) p.T = T_override;
        return build_din(p);
    }
    fail(Err::SchemaError, "unknown catalog scenario '" + name + "'");
}

VectorField field_from_json(const nlohmann::json& j, const std::string& path) {
    check_keys(j, {"field", "matrix", "offset", "value"}, path);
    const std::string kind = j.at("field").get<std::string>();
    if (kind == "constant") return VectorField::constant(j.at("value").get<Vec>());
    if (kind == "linear") {
        auto rows = j.at("matrix").get<std::vector<Vec>>();
        std::size_t n = rows.size();
        Mat A(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n)
                fail(Err::SchemaError, "field 'matrix' at " + path + " must be square");
            for (std::size_t c = 0; c < n; ++c) A(i, c) = rows[i][c];
        }
        Vec off = j.contains("offset") ? j.at("offset").get<Vec>() : zeros(n);
        return VectorField::linear(A, off);
    }
    fail(Err::SchemaError, "unknown field kind '" + kind + "' at " + path);
}

CatalogSystem build_inline(const nlohmann::json& j, double T_override, std::optional<int> k_ov,
                           std::uint64_t seed) {
    check_keys(j, {"dim", "f", "operator", "x0", "b", "M_f", "rho", "family", "T", "name"},
               "/scenario");
    Scenario sc;
    sc.name = j.value("name", std::string("inline"));
    sc.dim = j.at("dim").get<int>();
    if (sc.dim < 1) fail(Err::SchemaError, "field 'dim' at /scenario must be >= 1");
    sc.f = field_from_json(j.at("f"), "/scenario/f");
    if (sc.f.dim != sc.dim) fail(Err::SchemaError, "dynamics dimension mismatch at /scenario/f");
    sc.x0 = vec_field(j, "x0", "/scenario");
    if (static_cast<int>(sc.x0.size()) != sc.dim)
        fail(Err::SchemaError, "field 'x0' at /scenario has the wrong dimension");
    sc.rho = require_positive(j, "rho", "/scenario", 2.0 * (norm(sc.x0) + 1.0));

    OperatorSpec op = OperatorSpec::from_json(j.at("operator"));
    std::optional<double> b;
    if (j.contains("b")) b = require_positive(j, "b", "/scenario", 0.0, true);
    sc.dec = decompose(op, RegionHint{sc.x0, sc.rho}, b, seed);

    std::string family = j.value("family", std::string());
    if (family.empty()) {
        if (op.kind() == OperatorSpec::Kind::SubdiffNorm)
            family = "norm";
        else if (op.kind() == OperatorSpec::Kind::SubdiffDistance)
            family = "distance";
        else
            family = "smooth";
    }
    if (family == "norm")
        sc.family = LipschitzFamily::norm(sc.dim);
    else if (family == "distance") {
        if (op.kind() != OperatorSpec::Kind::SubdiffDistance)
            fail(Err::SchemaError, "family 'distance' needs a subdiff_distance operator");
        sc.family = LipschitzFamily::distance(op.set());
    } else if (family == "smooth")
        sc.family = LipschitzFamily::smooth(sc.dec);
    else if (family == "custom")
        fail(Err::SchemaError, "custom families are constructed through the library API");
    else
        fail(Err::SchemaError, "unknown family '" + family + "' at /scenario");

    sc.k = k_ov.value_or(1);
    sc.T = T_override > 0.0 ? T_override : require_positive(j, "T", "/scenario", 1.0);
    if (j.contains("M_f")) {
        sc.M_f = require_positive(j, "M_f", "/scenario", 0.0, true);
    } else {
        Rng rng = seeded_stream(seed, "inline-mf");
        double worst = norm(sc.f.eval(sc.x0));
        for (int i = 0; i < 512; ++i)
            worst = std::max(worst, norm(sc.f.eval(add(sc.x0, rng.ball_point(sc.x0.size(),
                                                                             sc.rho)))));
        sc.M_f = worst * 1.1 + 1e-12;
    }
    validate_scenario(sc, seed);

    CatalogSystem sys;
    sys.scenario = std::move(sc);
    sys.equilibria = EquilibriaDescriptor{};  // samplers run on demand
    return sys;
}

}  // namespace

RunConfig load_run_config(const nlohmann::json& j) {
    if (!j.is_object()) fail(Err::SchemaError, "config root must be an object");
    check_keys(j,
               {"scenario", "params", "k", "lambda", "T", "h_max", "mode", "tolerances", "out",
                "seed", "plots", "sweep"},
               "/");
    RunConfig cfg;
    if (!j.contains("scenario")) fail(Err::SchemaError, "missing key 'scenario' at /");

    if (j.contains("T")) cfg.T = require_positive(j, "T", "/", 0.0, true);
    cfg.h_max = require_positive(j, "h_max", "/", cfg.h_max);
    if (j.contains("k")) {
        int k = j.at("k").get<int>();
        if (k < 1) fail(Err::SchemaError, "field 'k' at / must be >= 1");
        cfg.k = k;
    }
    if (j.contains("lambda")) {
        const auto& l = j.at("lambda");
        if (l.is_number()) {
            cfg.lambdas = {l.get<double>()};
        } else if (l.is_array()) {
            cfg.lambdas = l.get<std::vector<double>>();
        } else {
            fail(Err::SchemaError, "field 'lambda' at / must be a number or array");
        }
        if (cfg.lambdas.empty()) fail(Err::SchemaError, "field 'lambda' at / must be nonempty");
        for (double v : cfg.lambdas)
            if (!(v > 0.0)) fail(Err::SchemaError, "field 'lambda' at / must be > 0");
    }
    if (j.contains("mode")) cfg.mode = step_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        check_keys(t, {"vel", "mult", "pen", "lyap", "conv", "eq"}, "/tolerances");
        cfg.tolerances.vel = require_positive(t, "vel", "/tolerances", cfg.tolerances.vel);
        cfg.tolerances.mult = require_positive(t, "mult", "/tolerances", cfg.tolerances.mult);
        cfg.tolerances.pen = require_positive(t, "pen", "/tolerances", cfg.tolerances.pen);
        cfg.tolerances.lyap = require_positive(t, "lyap", "/tolerances", cfg.tolerances.lyap);
        cfg.tolerances.conv = require_positive(t, "conv", "/tolerances", cfg.tolerances.conv);
        cfg.tolerances.eq = require_positive(t, "eq", "/tolerances", cfg.tolerances.eq);
    }
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("plots")) cfg.plots = j.at("plots").get<bool>();
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_keys(s, {"kind", "grid"}, "/sweep");
        SweepSpec spec;
        spec.kind = s.at("kind").get<std::string>();
        if (spec.kind != "lambda" && spec.kind != "k")
            fail(Err::SchemaError, "field 'kind' at /sweep must be 'lambda' or 'k'");
        spec.grid = s.at("grid").get<std::vector<double>>();
        cfg.sweep = std::move(spec);
    }

    const auto& sc = j.at("scenario");
    if (sc.is_string()) {
        cfg.scenario_name = sc.get<std::string>();
        nlohmann::json params = j.value("params", nlohmann::json::object());
        cfg.system = build_from_catalog(cfg.scenario_name, params, cfg.T, cfg.k);
        cfg.has_pair = true;
    } else if (sc.is_object()) {
        if (j.contains("params"))
            fail(Err::SchemaError, "key 'params' at / applies to catalog scenarios only");
        cfg.scenario_name = "inline";
        cfg.system = build_inline(sc, cfg.T, cfg.k, cfg.seed);
        cfg.has_pair = false;
    } else {
        fail(Err::SchemaError, "field 'scenario' at / must be a name or an object");
    }
    if (cfg.mode) cfg.system.scenario.default_mode = *cfg.mode;
    return cfg;
}

RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::SchemaError, "cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(Err::SchemaError, std::string("config parse error: ") + e.what());
    }
    return load_run_config(j);
}

}  // namespace mflow
