// Command-line front end: single-point evaluation, EE optimization,
// parameter sweeps to CSV, and the Monte-Carlo validation run.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eenet/scenario.hpp"
#include "eenet/sweep.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;

struct CommonOptions {
    std::string scenario_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--scenario", opts.scenario_path, "scenario JSON file (built-in defaults if omitted)");
    cmd->add_option("--out", opts.out_path, "output CSV path");
    cmd->add_option("--seed", opts.seed, "override the Monte-Carlo master seed");
    cmd->add_option("--trials", opts.trials, "override the Monte-Carlo trial count");
    cmd->add_flag("--quiet", opts.quiet, "suppress the human-readable summary");
}

eenet::ScenarioFile load(const CommonOptions& opts) {
    auto s = opts.scenario_path.empty() ? eenet::default_scenario()
                                        : eenet::load_scenario(opts.scenario_path);
    if (opts.seed || opts.trials) {
        auto mc = s.mc_or_default();
        if (opts.seed) mc.master_seed = *opts.seed;
        if (opts.trials) mc.trials = *opts.trials;
        s.mc = mc;
    }
    return s;
}

void print_evaluate(const eenet::ScenarioFile& s, const eenet::EvaluateReport& r) {
    std::cout << "design: M = " << r.design.antennas << ", K = " << r.design.users
              << ", lambda = " << r.design.ap_density << " AP/m^2, gamma = " << s.gamma
              << " bit/symbol\n"
              << "  rho*                  " << r.design.tx_energy << " J/symbol per UE\n"
              << "  total radiated power  " << r.radiated_power_watt * 1e3 << " mW\n"
              << "  SE bound              " << r.result.se_bound << " bit/symbol\n"
              << "  ASE                   " << r.result.ase << " bit/symbol/m^2\n"
              << "  AEC                   " << r.result.aec << " J/symbol/m^2\n"
              << "  EE                    " << r.result.ee / 1e6 << " Mbit/Joule\n";
}

int run_evaluate_cmd(const CommonOptions& opts, int antennas, int users) {
    const auto s = load(opts);
    const auto r = eenet::run_evaluate(s, antennas, users);
    if (!opts.quiet) print_evaluate(s, r);
    if (!opts.out_path.empty()) {
        eenet::SweepRow row;
        row.swept_value = s.lambda;
        row.feasible = true;
        row.design = r.design;
        row.radiated_power_watt = r.radiated_power_watt;
        row.se_bound = r.result.se_bound;
        row.ee_analytic = r.result.ee;
        eenet::write_sweep_csv({row}, opts.out_path, s.csv_precision);
    }
    return 0;
}

int run_optimize_cmd(const CommonOptions& opts, const std::string& method_name) {
    const auto s = load(opts);
    const auto method = eenet::parse_optimize_method(method_name);
    const auto r = eenet::run_optimize(s, method);
    if (!opts.quiet) {
        if (r.alternating) {
            const auto& a = *r.alternating;
            std::cout << "alternating: (M, K) = (" << a.design.antennas << ", " << a.design.users
                      << "), EE = " << a.ee / 1e6 << " Mbit/Joule in " << a.iterations
                      << " iterations\n  trajectory:";
            for (const auto& t : a.trajectory)
                std::cout << " (" << t.antennas << "," << t.users << ")";
            std::cout << '\n';
        }
        if (r.grid) {
            std::cout << "grid: (M, K) = (" << r.grid->best.antennas << ", "
                      << r.grid->best.users << "), EE = " << r.grid->best_ee / 1e6
                      << " Mbit/Joule over M in [" << r.grid->antenna_range.first << ", "
                      << r.grid->antenna_range.second << "], K in ["
                      << r.grid->user_range.first << ", " << r.grid->user_range.second << "]\n";
        }
        if (r.relative_gap)
            std::cout << "relative gap (alternating vs grid): " << *r.relative_gap * 100.0
                      << " %\n";
    }
    if (!opts.out_path.empty()) {
        if (r.grid) eenet::write_surface_csv(*r.grid, opts.out_path, s.csv_precision);
        if (r.alternating)
            eenet::write_trajectory_csv(*r.alternating,
                                        eenet::sibling_csv_path(opts.out_path, "_trajectory"),
                                        s.csv_precision);
    }
    return 0;
}

int run_sweep_cmd(const CommonOptions& opts) {
    const auto s = load(opts);
    const auto report = eenet::run_sweep(s);
    const std::string out = opts.out_path.empty() ? "sweep.csv" : opts.out_path;
    eenet::write_sweep_csv(report.rows, out, s.csv_precision);
    if (!report.fixed_single_user.empty())
        eenet::write_sweep_csv(report.fixed_single_user,
                               eenet::sibling_csv_path(out, "_fixed_M10_K1"), s.csv_precision);
    if (!report.fixed_massive_mimo.empty())
        eenet::write_sweep_csv(report.fixed_massive_mimo,
                               eenet::sibling_csv_path(out, "_fixed_M195_K20"), s.csv_precision);
    if (!opts.quiet) {
        long feasible = 0;
        for (const auto& row : report.rows) feasible += row.feasible ? 1 : 0;
        std::cout << "sweep over " << s.sweep->variable << ": " << report.rows.size()
                  << " points (" << feasible << " feasible) written to " << out << '\n';
    }
    return 0;
}

int run_mc_validate_cmd(const CommonOptions& opts) {
    auto s = load(opts);
    if (!s.mc) s.mc = eenet::McSpec{};
    const auto report = eenet::run_mc_validate(s);
    if (!opts.out_path.empty())
        eenet::write_mc_validate_csv(report, opts.out_path, s.csv_precision);
    if (!opts.quiet) {
        for (const auto& row : report.rows)
            std::cout << "lambda = " << row.lambda << ": bound " << row.se_bound
                      << " vs MC " << row.mc_mean << " +- " << row.mc_half_width
                      << (row.bound_violated ? "  BOUND VIOLATED" : "") << '\n';
        for (const auto& check : report.moments.checks)
            std::cout << check.name << ": " << check.estimate << " vs " << check.target
                      << " +- " << check.half_width << (check.ok ? "" : "  MISMATCH") << '\n';
        std::cout << (report.any_violation || !report.moments.all_ok
                          ? "validation found mismatches\n"
                          : "validation clean\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy-efficiency design toolkit for wireless broadband networks"};
    app.require_subcommand(1);

    CommonOptions eval_opts;
    int antennas = 0, users = 0;
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate one (M, K) design point");
    add_common(eval_cmd, eval_opts);
    eval_cmd->add_option("-M,--antennas", antennas, "antennas per AP")->required();
    eval_cmd->add_option("-K,--users", users, "users per AP")->required();

    CommonOptions opt_opts;
    std::string method = "both";
    auto* opt_cmd = app.add_subcommand("optimize", "optimize (M, K, rho) for maximal EE");
    add_common(opt_cmd, opt_opts);
    opt_cmd->add_option("--method", method, "alternating | grid | both");

    CommonOptions sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep", "run the scenario's parameter sweep to CSV");
    add_common(sweep_cmd, sweep_opts);

    CommonOptions mc_opts;
    auto* mc_cmd = app.add_subcommand("mc-validate",
                                      "validate the SE bound against Monte-Carlo simulation");
    add_common(mc_cmd, mc_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitParse;
    }

    try {
        if (eval_cmd->parsed()) return run_evaluate_cmd(eval_opts, antennas, users);
        if (opt_cmd->parsed()) return run_optimize_cmd(opt_opts, method);
        if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_opts);
        if (mc_cmd->parsed()) return run_mc_validate_cmd(mc_opts);
    } catch (const eenet::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const eenet::scenario_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
