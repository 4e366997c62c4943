#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "eenet/analytic.hpp"
#include "eenet/mc.hpp"
#include "eenet/optimizer.hpp"
#include "eenet/scenario.hpp"
#include "eenet/types.hpp"

/// Scenario-level operations behind the CLI: single-point evaluation,
/// optimization, parameter sweeps and the Monte-Carlo validation run, all
/// returning plain reports plus CSV writers with a fixed schema.
namespace eenet {

inline std::string format_number(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateReport {
    DesignPoint design;
    EvaluationResult result;
    double radiated_power_watt = 0.0;
};

/// rho* and the full EE breakdown at a given (M, K) of the scenario.
inline EvaluateReport run_evaluate(const ScenarioFile& s, int antennas, int users) {
    const auto p = s.propagation();
    const auto h = s.hardware();
    const auto rho = rho_star(p, s.gamma, s.lambda, antennas, users);
    if (!rho)
        throw infeasible_error("evaluate: the SE target is unreachable at this (M, K); "
                               "the rho* denominator is nonpositive");
    EvaluateReport r;
    r.design = DesignPoint{*rho, s.lambda, antennas, users};
    r.result = evaluate(p, h, r.design);
    r.radiated_power_watt = radiated_power_watt(h, r.design);
    return r;
}

// ---------------------------------------------------------------------------
// optimize

enum class OptimizeMethod { alternating, grid, both };

struct OptimizeReport {
    std::optional<OptimizationOutcome> alternating;
    std::optional<GridSearchReport> grid;
    std::optional<double> relative_gap; // 1 - alternating EE / grid EE
};

inline OptimizeMethod parse_optimize_method(const std::string& name) {
    if (name == "alternating") return OptimizeMethod::alternating;
    if (name == "grid") return OptimizeMethod::grid;
    if (name == "both") return OptimizeMethod::both;
    throw scenario_error("optimize: method must be 'alternating', 'grid' or 'both'");
}

/// Alternating start point: (10, 1) when feasible, otherwise the closed-form
/// antenna optimum for a single user.
inline std::pair<int, int> default_start(const PropagationParams& p, const HardwareProfile& h,
                                         double gamma, double lambda) {
    if (rho_star(p, gamma, lambda, 10, 1)) return {10, 1};
    return {m_star_int(p, h, gamma, lambda, 1), 1};
}

inline OptimizeReport run_optimize(const ScenarioFile& s,
                                   OptimizeMethod method = OptimizeMethod::both,
                                   std::pair<int, int> grid_antennas = {2, 400},
                                   std::pair<int, int> grid_users = {1, 60}) {
    const auto p = s.propagation();
    const auto h = s.hardware();
    OptimizeReport r;
    if (method != OptimizeMethod::grid) {
        const auto start = default_start(p, h, s.gamma, s.lambda);
        r.alternating =
            alternating_optimize(p, h, s.gamma, s.lambda, start.first, start.second);
        if (r.alternating->status == OptStatus::infeasible_start)
            throw infeasible_error("optimize: no feasible starting point for this scenario");
    }
    if (method != OptimizeMethod::alternating)
        r.grid = grid_search(p, h, s.gamma, s.lambda, grid_antennas, grid_users);
    if (r.alternating && r.grid)
        r.relative_gap = 1.0 - r.alternating->ee / r.grid->best_ee;
    return r;
}

inline void write_surface_csv(const GridSearchReport& report, const std::string& path,
                              int precision) {
    std::ofstream out(path);
    if (!out) throw scenario_error("cannot write '" + path + "'");
    out << "M,K,ee\n";
    for (const auto& cell : report.surface)
        out << cell.antennas << ',' << cell.users << ',' << format_number(cell.ee, precision)
            << '\n';
}

inline void write_trajectory_csv(const OptimizationOutcome& outcome, const std::string& path,
                                 int precision) {
    std::ofstream out(path);
    if (!out) throw scenario_error("cannot write '" + path + "'");
    out << "iteration,M,K,rho,ee\n";
    for (std::size_t i = 0; i < outcome.trajectory.size(); ++i) {
        const auto& t = outcome.trajectory[i];
        out << i << ',' << t.antennas << ',' << t.users << ','
            << format_number(t.tx_energy, precision) << ',' << format_number(t.ee, precision)
            << '\n';
    }
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRow {
    double swept_value = 0.0;
    bool feasible = false;
    DesignPoint design;
    double radiated_power_watt = 0.0;
    double se_bound = 0.0;
    double ee_analytic = 0.0;
    std::optional<double> ee_mc_mean = {};
    std::optional<double> ee_mc_half_width = {};
};

inline std::vector<double> sweep_grid(const SweepSpec& spec) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(spec.points));
    if (spec.points == 1) {
        grid.push_back(spec.from);
        return grid;
    }
    for (int i = 0; i < spec.points; ++i) {
        const double t = static_cast<double>(i) / (spec.points - 1);
        if (spec.scale == "geometric")
            grid.push_back(spec.from * std::pow(spec.to / spec.from, t));
        else
            grid.push_back(spec.from + (spec.to - spec.from) * t);
    }
    return grid;
}

inline SimulationConfig make_simulation_config(const ScenarioFile& s, const DesignPoint& design) {
    const auto mc = s.mc_or_default();
    SimulationConfig config;
    config.propagation = s.propagation();
    config.design = design;
    config.window_radius = window_radius_for_tail(design.ap_density, s.alpha,
                                                  mc.window_tail_fraction);
    config.trials = mc.trials;
    config.fading_draws = mc.fading_draws;
    config.master_seed = mc.master_seed;
    config.mode = parse_precoder_mode(mc.precoder_mode);
    config.workers = mc.workers;
    return config;
}

namespace detail {

/// EE recomputed from a Monte-Carlo SE value instead of the analytic bound.
inline double ee_from_se(const HardwareProfile& h, const DesignPoint& d, double se) {
    return area_spectral_efficiency(d.ap_density, d.users, se) /
           area_energy_consumption(h, d, se);
}

inline void attach_mc_columns(const ScenarioFile& s, SweepRow& row) {
    const auto estimate = estimate_ergodic_se(make_simulation_config(s, row.design));
    const auto h = s.hardware();
    row.ee_mc_mean = ee_from_se(h, row.design, estimate.mean);
    row.ee_mc_half_width = (ee_from_se(h, row.design, estimate.mean + estimate.half_width) -
                            ee_from_se(h, row.design, estimate.mean - estimate.half_width)) /
                           2.0;
}

} // namespace detail

struct SweepReport {
    std::vector<SweepRow> rows;
    // filled for UE-density sweeps only: the two fixed reference designs
    std::vector<SweepRow> fixed_single_user; // (M, K) = (10, 1)
    std::vector<SweepRow> fixed_massive_mimo; // (M, K) = (195, 20)
};

/// Runs the sweep named in the scenario's sweep section. Per grid point the
/// design is re-optimized: lambda and gamma sweeps use the alternating
/// algorithm, UE-density sweeps use the closed-form scan with lambda = mu/K.
inline SweepReport run_sweep(const ScenarioFile& s) {
    if (!s.sweep) throw scenario_error("sweep: scenario has no sweep section");
    const auto& spec = *s.sweep;
    const auto p = s.propagation();
    const auto h = s.hardware();
    SweepReport report;
    const auto grid = sweep_grid(spec);

    auto fill_row = [&](const ScenarioFile& point_scenario, double swept,
                        const DesignPoint& design, double ee) {
        SweepRow row;
        row.swept_value = swept;
        row.feasible = true;
        row.design = design;
        row.radiated_power_watt = radiated_power_watt(h, design);
        row.se_bound = se_lower_bound(point_scenario.propagation(), design);
        row.ee_analytic = ee;
        if (spec.with_mc) detail::attach_mc_columns(point_scenario, row);
        return row;
    };

    for (double value : grid) {
        ScenarioFile point = s;
        try {
            if (spec.variable == "lambda") {
                point.lambda = value;
                point.lambda_max = std::max(point.lambda_max, value);
                const auto outcome = run_optimize(point, OptimizeMethod::alternating).alternating;
                report.rows.push_back(fill_row(point, value, outcome->design, outcome->ee));
            } else if (spec.variable == "gamma") {
                point.gamma = value;
                validate_scenario(point); // gamma may cross the impairment bound
                const auto outcome = run_optimize(point, OptimizeMethod::alternating).alternating;
                report.rows.push_back(fill_row(point, value, outcome->design, outcome->ee));
            } else { // mu
                const auto best = optimize_with_ue_density(p, h, s.gamma, value, s.lambda_max);
                report.rows.push_back(fill_row(s, value, best.design, best.ee));
                for (auto [m, k, rows] :
                     {std::tuple{10, 1, &report.fixed_single_user},
                      std::tuple{195, 20, &report.fixed_massive_mimo}}) {
                    const auto fixed = evaluate_with_ue_density(p, h, s.gamma, value,
                                                                s.lambda_max, m, k);
                    if (fixed) {
                        rows->push_back(fill_row(s, value, fixed->design, fixed->ee));
                    } else {
                        SweepRow row;
                        row.swept_value = value;
                        rows->push_back(row);
                    }
                }
            }
        } catch (const infeasible_error&) {
            SweepRow row;
            row.swept_value = value;
            report.rows.push_back(row);
        }
    }
    return report;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                            int precision) {
    std::ofstream out(path);
    if (!out) throw scenario_error("cannot write '" + path + "'");
    out << "swept_value,M,K,lambda,rho,total_radiated_power_watt,se_bound,ee_analytic,"
           "ee_mc_mean,ee_mc_halfwidth\n";
    for (const auto& row : rows) {
        out << format_number(row.swept_value, precision) << ',';
        if (row.feasible) {
            out << row.design.antennas << ',' << row.design.users << ','
                << format_number(row.design.ap_density, precision) << ','
                << format_number(row.design.tx_energy, precision) << ','
                << format_number(row.radiated_power_watt, precision) << ','
                << format_number(row.se_bound, precision) << ','
                << format_number(row.ee_analytic, precision) << ',';
            out << (row.ee_mc_mean ? format_number(*row.ee_mc_mean, precision) : "") << ','
                << (row.ee_mc_half_width ? format_number(*row.ee_mc_half_width, precision) : "");
        } else {
            out << ",,,,,,,,";
        }
        out << '\n';
    }
}

/// Output stem for the companion CSVs of a UE-density sweep.
inline std::string sibling_csv_path(const std::string& path, const std::string& suffix) {
    const std::string ext = ".csv";
    if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
        return path.substr(0, path.size() - ext.size()) + suffix + ext;
    return path + suffix + ext;
}

// ---------------------------------------------------------------------------
// mc-validate

struct McValidateRow {
    double lambda = 0.0;
    DesignPoint design;
    double se_bound = 0.0;
    double mc_mean = 0.0;
    double mc_half_width = 0.0;
    bool bound_violated = false; // analytic bound above MC mean + CI
};

struct McValidateReport {
    std::vector<McValidateRow> rows;
    MomentReport moments;
    bool any_violation = false;
};

/// Estimates the ergodic SE across a lambda grid with per-point optimized
/// designs and flags any point where the analytic bound is not a lower bound
/// within the confidence interval; also validates the moment identities once
/// at the scenario's own design point.
inline McValidateReport run_mc_validate(const ScenarioFile& s) {
    if (!s.mc) throw scenario_error("mc-validate: scenario has no mc section");
    std::vector<double> grid;
    if (s.sweep) {
        if (s.sweep->variable != "lambda")
            throw scenario_error("mc-validate: only lambda sweeps are supported");
        grid = sweep_grid(*s.sweep);
    } else {
        grid = sweep_grid(SweepSpec{"lambda", "geometric", 1e-6, 1e-2, 8, false});
    }
    McValidateReport report;
    for (double lambda : grid) {
        ScenarioFile point = s;
        point.lambda = lambda;
        point.lambda_max = std::max(point.lambda_max, lambda);
        const auto outcome = run_optimize(point, OptimizeMethod::alternating).alternating;
        McValidateRow row;
        row.lambda = lambda;
        row.design = outcome->design;
        row.se_bound = se_lower_bound(point.propagation(), row.design);
        const auto estimate = estimate_ergodic_se(make_simulation_config(point, row.design));
        row.mc_mean = estimate.mean;
        row.mc_half_width = estimate.half_width;
        row.bound_violated = row.se_bound > row.mc_mean + row.mc_half_width;
        report.any_violation = report.any_violation || row.bound_violated;
        report.rows.push_back(row);
    }
    {
        const auto base = run_optimize(s, OptimizeMethod::alternating).alternating;
        auto config = make_simulation_config(s, base->design);
        config.mode = PrecoderMode::explicit_zf;
        const auto mc = s.mc_or_default();
        report.moments = validate_moment_identities(config, mc.moment_draws,
                                                    std::min<long>(mc.trials, 20000));
    }
    return report;
}

inline void write_mc_validate_csv(const McValidateReport& report, const std::string& path,
                                  int precision) {
    std::ofstream out(path);
    if (!out) throw scenario_error("cannot write '" + path + "'");
    out << "lambda,M,K,rho,se_bound,se_mc_mean,se_mc_halfwidth,bound_violated\n";
    for (const auto& row : report.rows) {
        out << format_number(row.lambda, precision) << ',' << row.design.antennas << ','
            << row.design.users << ',' << format_number(row.design.tx_energy, precision) << ','
            << format_number(row.se_bound, precision) << ','
            << format_number(row.mc_mean, precision) << ','
            << format_number(row.mc_half_width, precision) << ','
            << (row.bound_violated ? 1 : 0) << '\n';
    }
}

} // namespace eenet
