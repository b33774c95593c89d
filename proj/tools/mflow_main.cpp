#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mflow/config.hpp"
#include "mflow/parallel.hpp"
#include "mflow/rng.hpp"
#include "mflow/svg.hpp"
#include "mflow/verify_suites.hpp"

namespace {

using namespace mflow;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitIntegration = 3;

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Err::ArgumentError, "cannot write " + path.string());
    out << content;
}

struct CheckRow {
    std::string name;
    bool pass = true;
    double value = 0.0;
};

nlohmann::json checks_json(const std::vector<CheckRow>& rows) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& r : rows) j[r.name] = {{"pass", r.pass}, {"value", r.value}};
    return j;
}

void emit_plots(const std::filesystem::path& dir, const RunConfig& cfg, const Trajectory& traj) {
    const Scenario& sc = cfg.system.scenario;
    const std::size_t n = static_cast<std::size_t>(sc.dim);

    std::vector<PlotSeries> state(n);
    for (std::size_t c = 0; c < n; ++c) {
        state[c].label = "x_" + std::to_string(c + 1);
        state[c].x = traj.t;
        state[c].y.reserve(traj.size());
        for (const auto& xs : traj.x) state[c].y.push_back(xs[c]);
    }
    write_file(dir / "state.svg", render_line_plot("state components", state));

    if (cfg.has_pair) {
        PlotSeries v{"V", traj.t, {}};
        PlotSeries w{"W", traj.t, {}};
        for (const auto& xs : traj.x) {
            v.y.push_back(cfg.system.pair.V(xs));
            w.y.push_back(cfg.system.pair.W(xs));
        }
        write_file(dir / "lyapunov.svg", render_line_plot("V along the run", {v}));
        write_file(dir / "w.svg", render_line_plot("W along the run", {w}));
    }
    if (!cfg.system.equilibria.empty()) {
        PlotSeries d{"d(x;E)", traj.t, {}};
        for (const auto& xs : traj.x) d.y.push_back(cfg.system.equilibria.distance(xs));
        write_file(dir / "dist_e.svg", render_line_plot("distance to the equilibrium set", {d}));
    }
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            std::optional<std::uint64_t> seed_override) {
    RunConfig cfg;
    try {
        cfg = load_run_config_file(config_path);
    } catch (const Error& e) {
        if (e.code == Err::SchemaError) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitSchema;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegration;
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cfg.out_dir.empty()) cfg.out_dir = ".";
    if (seed_override) cfg.seed = *seed_override;
    std::filesystem::create_directories(cfg.out_dir);

    Scenario& sc = cfg.system.scenario;
    Trajectory traj;
    std::vector<double> gaps, orders;
    try {
        if (cfg.lambdas.size() >= 2) {
            RefineResult r = refine_lambda(sc, cfg.lambdas, cfg.h_max);
            traj = std::move(r.finest);
            gaps = std::move(r.gaps);
            orders = std::move(r.orders);
        } else {
            traj = integrate_regularized(sc, cfg.lambdas.front(), cfg.h_max);
        }
    } catch (const Error& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return kExitIntegration;
    }

    std::vector<CheckRow> checks;
    double beta = sc.beta_bound();
    checks.push_back({"velocity_bound",
                      traj.worst_velocity <= 2.0 * beta * (1.0 + cfg.tolerances.vel),
                      traj.worst_velocity});
    checks.push_back({"penalty_bound", true, 0.0});  // enforced during stepping

    bool mult_ok = true;
    std::string mult_note;
    try {
        extract_multipliers(traj, sc);
    } catch (const Error& e) {
        mult_ok = false;
        mult_note = e.what();
    }
    checks.push_back({"multiplier_bound", mult_ok, 0.0});

    if (cfg.has_pair) {
        DecreaseReport dec = lyapunov_decrease(traj, cfg.system.pair);
        checks.push_back({"decrease_pass", dec.max_violation <= cfg.tolerances.lyap,
                          dec.max_violation});
    }
    {
        double resid = equilibrium_residual(sc, traj.x.back());
        bool in_e = resid <= cfg.tolerances.eq;
        if (!cfg.system.equilibria.empty())
            in_e = in_e && cfg.system.equilibria.distance(traj.x.back()) <= cfg.tolerances.conv;
        checks.push_back({"final_in_E", in_e, resid});
    }

    nlohmann::json report;
    report["scenario"] = cfg.scenario_name;
    report["seed"] = cfg.seed;
    report["k"] = sc.k;
    report["lambda"] = cfg.lambdas;
    report["mode"] = step_mode_name(sc.default_mode);
    report["checks"] = checks_json(checks);
    report["final_state"] = traj.x.back();
    report["steps"] = traj.size();
    if (!gaps.empty()) {
        report["gaps"] = gaps;
        report["orders"] = orders;
    }
    report["exited_rho"] = traj.exited_rho;
    report["inconsistent_regime_steps"] = traj.inconsistent_regime;
    if (!mult_note.empty()) report["multiplier_note"] = mult_note;

    std::filesystem::path dir(cfg.out_dir);
    {
        std::ostringstream csv;
        if (traj.multipliers_filled) {
            write_trajectory_csv(traj, csv);
        } else {
            traj.g.assign(traj.size(), zeros(static_cast<std::size_t>(sc.dim)));
            traj.eta.assign(traj.size(), zeros(static_cast<std::size_t>(sc.dim)));
            traj.multipliers_filled = true;
            write_trajectory_csv(traj, csv);
        }
        write_file(dir / "trajectory.csv", csv.str());
    }
    write_file(dir / "report.json", report.dump(2) + "\n");
    if (cfg.plots) emit_plots(dir, cfg, traj);

    bool all_pass = true;
    for (const auto& c : checks) all_pass = all_pass && c.pass;
    std::cout << report["checks"].dump(2) << "\n";
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
    std::vector<std::string> names;
    if (suite == "all") {
        names = suite_names();
    } else {
        auto known = suite_names();
        if (std::find(known.begin(), known.end(), suite) == known.end()) {
            std::cerr << "unknown suite '" << suite << "'\n";
            return kExitSchema;
        }
        names = {suite};
    }
    nlohmann::json summary;
    summary["seed"] = seed;
    nlohmann::json arr = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& name : names) {
        SuiteResult res = run_suite(name, seed);
        all_pass = all_pass && res.all_pass();
        arr.push_back(res.to_json());
    }
    summary["suites"] = arr;
    summary["pass"] = all_pass;
    std::string text = summary.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) write_file(out_path, text);
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              std::optional<std::uint64_t> seed_override) {
    RunConfig cfg;
    try {
        cfg = load_run_config_file(config_path);
    } catch (const Error& e) {
        if (e.code == Err::SchemaError) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitSchema;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegration;
    }
    if (!cfg.sweep || cfg.sweep->grid.empty()) {
        std::cerr << "sweep config needs a nonempty grid\n";
        return kExitSchema;
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cfg.out_dir.empty()) cfg.out_dir = ".";
    if (seed_override) cfg.seed = *seed_override;
    std::filesystem::create_directories(cfg.out_dir);
    std::filesystem::path dir(cfg.out_dir);

    const Scenario& sc = cfg.system.scenario;
    nlohmann::json rows = nlohmann::json::array();
    bool any_failed = false;

    if (cfg.sweep->kind == "lambda") {
        const auto& grid = cfg.sweep->grid;
        std::vector<Trajectory> cells(grid.size());
        std::vector<std::string> errors(grid.size());
        parallel_for(static_cast<int>(grid.size()), [&](int i) {
            try {
                cells[static_cast<std::size_t>(i)] =
                    integrate_regularized(sc, grid[static_cast<std::size_t>(i)], cfg.h_max);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        });
        for (std::size_t i = 0; i < grid.size(); ++i) {
            nlohmann::json row;
            row["cell"] = i;
            row["lambda"] = grid[i];
            if (!errors[i].empty()) {
                row["error"] = errors[i];
                any_failed = true;
            } else {
                Trajectory cell = cells[i];
                try {
                    extract_multipliers(cell, sc);
                } catch (const Error&) {
                    cell.g.assign(cell.size(), zeros(static_cast<std::size_t>(sc.dim)));
                    cell.eta.assign(cell.size(), zeros(static_cast<std::size_t>(sc.dim)));
                    cell.multipliers_filled = true;
                    row["multiplier_bound"] = false;
                    any_failed = true;
                }
                std::ostringstream csv;
                write_trajectory_csv(cell, csv);
                write_file(dir / ("cell_" + std::to_string(i) + ".csv"), csv.str());
                if (i > 0 && errors[i - 1].empty()) {
                    const Trajectory& prev = cells[i - 1];
                    double gap = 0.0;
                    for (std::size_t j = 0; j < prev.size(); ++j)
                        gap = std::max(gap, dist(prev.x[j], cells[i].state_at(prev.t[j])));
                    row["gap"] = gap;
                }
            }
            rows.push_back(row);
        }
        // empirical orders on consecutive finite gaps
        for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
            if (rows[i].contains("gap") && rows[i + 1].contains("gap")) {
                double g1 = rows[i]["gap"].get<double>();
                double g2 = rows[i + 1]["gap"].get<double>();
                if (g1 > 1e-13 && g2 > 1e-13)
                    rows[i + 1]["order"] =
                        std::log(g1 / g2) / std::log(grid[i - 1] / grid[i]);
            }
        }
    } else {  // k sweep: nesting support gaps per grid index
        const auto& grid = cfg.sweep->grid;
        auto dirs = unit_directions(static_cast<std::size_t>(sc.dim), tol::kSupportDirs, cfg.seed);
        std::vector<double> gaps(grid.size());
        std::vector<std::string> errors(grid.size());
        parallel_for(static_cast<int>(grid.size()), [&](int i) {
            try {
                int k = static_cast<int>(grid[static_cast<std::size_t>(i)]);
                Rng rng = seeded_stream(cfg.seed, "k-sweep");
                double min_gap = std::numeric_limits<double>::infinity();
                for (int p = 0; p < 200; ++p) {
                    Vec x = p % 8 == 0 ? zeros(static_cast<std::size_t>(sc.dim))
                                       : rng.ball_point(static_cast<std::size_t>(sc.dim), 2.0);
                    Value a = sc.family.eval_Fk(k, x);
                    Value b = sc.family.eval_Fk(k + 1, x);
                    for (const auto& d : dirs)
                        min_gap = std::min(min_gap, a.support(d) - b.support(d));
                }
                gaps[static_cast<std::size_t>(i)] = min_gap;
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        });
        for (std::size_t i = 0; i < grid.size(); ++i) {
            nlohmann::json row;
            row["cell"] = i;
            row["k"] = static_cast<int>(grid[i]);
            if (!errors[i].empty()) {
                row["error"] = errors[i];
                any_failed = true;
            } else {
                row["min_support_gap"] = gaps[i];
                row["ok"] = gaps[i] >= -1e-9;
                if (gaps[i] < -1e-9) any_failed = true;
            }
            rows.push_back(row);
        }
    }

    nlohmann::json report;
    report["scenario"] = cfg.scenario_name;
    report["seed"] = cfg.seed;
    report["kind"] = cfg.sweep->kind;
    report["rows"] = rows;
    report["failed"] = any_failed;
    write_file(dir / "sweep_report.json", report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return any_failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"monotone-operator differential inclusion workbench"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite = "all";
    std::optional<std::uint64_t> seed;
    std::uint64_t verify_seed = 42;

    auto* run = app.add_subcommand("run", "integrate a scenario and emit reports");
    run->add_option("--config", config_path, "config JSON path")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "seed override");

    auto* verify = app.add_subcommand("verify", "run a named invariant suite");
    verify->add_option("--suite", suite, "geometry|selection|hamiltonian|multipliers|all");
    verify->add_option("--seed", verify_seed, "suite seed");
    std::string verify_out;
    verify->add_option("--out", verify_out, "also write the summary to this file");

    auto* sweep = app.add_subcommand("sweep", "run a lambda or k grid");
    sweep->add_option("--config", config_path, "config JSON path")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--seed", seed, "seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitSchema;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seed);
        if (verify->parsed()) return cmd_verify(suite, verify_seed, verify_out);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir, seed);
    } catch (const mflow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code == mflow::Err::SchemaError ? kExitSchema : kExitIntegration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegration;
    }
    return kExitSchema;
}
