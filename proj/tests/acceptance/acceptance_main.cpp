// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eenet/analytic.hpp"
#include "eenet/mc.hpp"
#include "eenet/optimizer.hpp"
#include "eenet/scenario.hpp"
#include "eenet/sweep.hpp"

using namespace eenet;

namespace {

struct Instance {
    double gamma;
    double lambda;
    int antennas;
    int users;
};

std::vector<Instance> random_feasible_instances(int count, std::uint64_t seed,
                                                const PropagationParams& p,
                                                double gamma_max = 6.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Instance> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        Instance inst;
        inst.gamma = 0.2 + unit(rng) * (gamma_max - 0.2);
        inst.lambda = std::pow(10.0, -6.0 + 4.0 * unit(rng));
        inst.users = 1 + static_cast<int>(unit(rng) * 49);
        const double c = required_sinr(inst.gamma, p.impairment_level);
        const double boundary = inst.users * (1.0 + c * 2.0 / (p.pathloss_exponent - 2.0));
        inst.antennas = static_cast<int>(std::ceil(boundary * (1.05 + unit(rng) * 1.95))) + 1;
        if (inst.antennas < inst.users + 1) inst.antennas = inst.users + 1;
        out.push_back(inst);
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

template <typename Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = fn();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("criterion %2d (%s): %s  [%s, %.2fs]\n", id, name.c_str(),
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds);
    std::fflush(stdout);
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    const auto scenario = default_scenario();
    const auto p = scenario.propagation();
    const auto h = scenario.hardware();

    GridSearchReport golden_grid;
    OptimizationOutcome golden_alternating;

    criterion(1, "golden optimum via grid search", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        golden_grid = grid_search(p, h, 3.0, 1e-4, {2, 400}, {1, 60});
        const double seconds = elapsed_since(t0);
        const double power_watt = radiated_power_watt(h, golden_grid.best);
        Outcome o;
        std::ostringstream d;
        d << "best (M,K) = (" << golden_grid.best.antennas << "," << golden_grid.best.users
          << "), radiated power " << power_watt * 1e3 << " mW";
        o.detail = d.str();
        o.pass = golden_grid.best.antennas == 193 && golden_grid.best.users == 21 &&
                 std::abs(power_watt - 0.424) <= 0.02 * 0.424 && seconds < 10.0;
        return o;
    });

    criterion(2, "alternating algorithm from (10,1)", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        golden_alternating = alternating_optimize(p, h, 3.0, 1e-4, 10, 1);
        const double seconds = elapsed_since(t0);
        Outcome o;
        std::ostringstream d;
        d << golden_alternating.iterations << " iterations to ("
          << golden_alternating.design.antennas << "," << golden_alternating.design.users
          << "), gap " << (1.0 - golden_alternating.ee / golden_grid.best_ee) * 100.0 << "%";
        o.detail = d.str();
        o.pass = golden_alternating.status == OptStatus::converged &&
                 golden_alternating.iterations <= 5 &&
                 golden_alternating.ee >= golden_grid.best_ee * (1.0 - 0.005) && seconds < 1.0;
        return o;
    });

    criterion(3, "grid-optimal EE value", [&] {
        Outcome o;
        std::ostringstream d;
        d << "EE = " << golden_grid.best_ee / 1e6 << " Mbit/Joule";
        o.detail = d.str();
        o.pass = golden_grid.best_ee >= 5.71e6 * 0.98 && golden_grid.best_ee <= 5.73e6 * 1.02;
        return o;
    });

    criterion(4, "rho* inversion on 1000 random feasible draws", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (const auto& inst : random_feasible_instances(1000, 1001, p)) {
            const auto rho = rho_star(p, inst.gamma, inst.lambda, inst.antennas, inst.users);
            if (!rho) return Outcome{false, "unexpected infeasible draw"};
            const double se =
                se_lower_bound(p, {*rho, inst.lambda, inst.antennas, inst.users});
            worst = std::max(worst, std::abs(se - inst.gamma) / inst.gamma);
        }
        Outcome o;
        std::ostringstream d;
        d << "worst relative error " << worst;
        o.detail = d.str();
        o.pass = worst <= 1e-9 && elapsed_since(t0) < 1.0;
        return o;
    });

    criterion(5, "EE(lambda) monotone and approaching the density limit", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst_gap = 0.0;
        for (const auto& inst : random_feasible_instances(20, 2002, p)) {
            double previous = 0.0;
            double ee = 0.0;
            for (int i = 0; i < 50; ++i) {
                const double lambda = 1e-7 * std::pow(1e6, i / 49.0);
                const auto rho = rho_star(p, inst.gamma, lambda, inst.antennas, inst.users);
                if (!rho) return Outcome{false, "unexpected infeasible draw"};
                ee = energy_efficiency(p, h, {*rho, lambda, inst.antennas, inst.users});
                if (ee < previous) return Outcome{false, "EE decreased along the lambda grid"};
                previous = ee;
            }
            const double limit = ee_density_limit(h, inst.antennas, inst.users, inst.gamma);
            if (ee > limit) return Outcome{false, "EE exceeded the density limit"};
            worst_gap = std::max(worst_gap, (limit - ee) / limit);
        }
        Outcome o;
        std::ostringstream d;
        d << "worst limit gap at lambda = 0.1: " << worst_gap * 100.0 << "%";
        o.detail = d.str();
        o.pass = worst_gap < 0.01 && elapsed_since(t0) < 1.0;
        return o;
    });

    criterion(6, "integer rounding beats the +-10 windows", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        auto ee_at = [&](double gamma, double lambda, int m, int k) {
            if (k < 1 || m < k + 1) return -1.0;
            const auto rho = rho_star(p, gamma, lambda, m, k);
            if (!rho) return -1.0;
            return energy_efficiency(p, h, {*rho, lambda, m, k});
        };
        for (const auto& inst : random_feasible_instances(200, 3003, p)) {
            const double real = m_star(p, h, inst.gamma, inst.lambda, inst.users);
            const int chosen = m_star_int(p, h, inst.gamma, inst.lambda, inst.users);
            const double best = ee_at(inst.gamma, inst.lambda, chosen, inst.users);
            for (int m = static_cast<int>(std::floor(real)) - 10;
                 m <= static_cast<int>(std::ceil(real)) + 10; ++m)
                if (ee_at(inst.gamma, inst.lambda, m, inst.users) > best * (1.0 + 1e-12))
                    return Outcome{false, "antenna window scan beat the returned integer"};
        }
        std::mt19937_64 rng(4004);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int tested = 0;
        while (tested < 200) {
            const double gamma = 0.3 + unit(rng) * 5.7;
            const double lambda = std::pow(10.0, -6.0 + 4.0 * unit(rng));
            const double c = required_sinr(gamma, p.impairment_level);
            const double boundary = 1.0 + 2.0 * c / (p.pathloss_exponent - 2.0);
            const double beta = boundary * (1.0 + std::pow(10.0, -2.5 + 3.0 * unit(rng)));
            const auto real = k_star(p, h, gamma, lambda, beta);
            if (!real || *real < 1.0) continue;
            const auto chosen = k_star_int(p, h, gamma, lambda, beta);
            if (!chosen) continue;
            auto along_ray = [&](int k) {
                return ee_at(gamma, lambda, static_cast<int>(std::llround(beta * k)), k);
            };
            const double best = along_ray(*chosen);
            const int center = static_cast<int>(std::floor(*real));
            for (int k = std::max(1, center - 10); k <= center + 11; ++k)
                if (along_ray(k) > best * (1.0 + 1e-12))
                    return Outcome{false, "user window scan beat the returned integer"};
            ++tested;
        }
        Outcome o;
        o.detail = "200 antenna instances, 200 user instances";
        o.pass = elapsed_since(t0) < 5.0;
        return o;
    });

    criterion(7, "reciprocal EE Hessians PSD on the operating region", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto points = sample_operating_points(p, h, 3.0, 1e-4, 200, 5005);
        const auto report = relaxed_convexity_check(p, h, 3.0, 1e-4, points);
        Outcome o;
        std::ostringstream d;
        d << report.samples.size() << " samples, worst min-eig/trace = " << report.worst_ratio;
        o.detail = d.str();
        o.pass = report.samples.size() == 200 && report.violations == 0 &&
                 report.worst_ratio >= -1e-6 && elapsed_since(t0) < 5.0;
        return o;
    });

    criterion(8, "Monte-Carlo SE stays above the bound across the lambda grid", [&] {
        auto s = scenario;
        s.sweep = SweepSpec{"lambda", "geometric", 1e-6, 1e-2, 8, false};
        s.mc = McSpec{10000, 1, 1e-3, 2025, "distributional", 0, 2000};
        const auto report = run_mc_validate(s);
        double min_margin = std::numeric_limits<double>::infinity();
        for (const auto& row : report.rows)
            min_margin = std::min(min_margin, row.mc_mean - row.se_bound);
        Outcome o;
        std::ostringstream d;
        d << report.rows.size() << " points, min (MC mean - bound) = " << min_margin
          << " bit/symbol";
        o.detail = d.str();
        o.pass = report.rows.size() == 8 && !report.any_violation && min_margin > 0.0;
        return o;
    });

    criterion(9, "moment identities and the serving-distance law", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        for (auto [m, k] : {std::pair{8, 3}, std::pair{32, 8}}) {
            SimulationConfig config;
            config.propagation = p;
            const auto rho = rho_star(p, 1.0, 1e-4, m, k);
            if (!rho) return Outcome{false, "reference design infeasible"};
            config.design = DesignPoint{*rho, 1e-4, m, k};
            config.window_radius = window_radius_for_tail(1e-4, p.pathloss_exponent, 1e-3);
            config.master_seed = 6006;
            config.mode = PrecoderMode::explicit_zf;
            const auto report = validate_moment_identities(config, 1000000, 10000);
            for (const auto& check : report.checks)
                if (!check.ok) {
                    std::ostringstream d;
                    d << "(" << m << "," << k << ") " << check.name << ": " << check.estimate
                      << " vs " << check.target << " +- " << check.half_width;
                    return Outcome{false, d.str()};
                }
        }
        Outcome o;
        o.detail = "1e6 channel draws and 1e4 geometries at (8,3) and (32,8)";
        o.pass = elapsed_since(t0) < 60.0;
        return o;
    });

    criterion(10, "UE-density study", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> density_ratio, optimized_ee, mimo_ratio, single_factor;
        for (int i = 0; i < 13; ++i) {
            const double mu = 1e-4 * std::pow(1e3, i / 12.0);
            const auto best = optimize_with_ue_density(p, h, 3.0, mu, 0.1);
            const auto mimo = evaluate_with_ue_density(p, h, 3.0, mu, 0.1, 195, 20);
            const auto single = evaluate_with_ue_density(p, h, 3.0, mu, 0.1, 10, 1);
            if (!mimo || !single) return Outcome{false, "reference design infeasible"};
            density_ratio.push_back(best.design.ap_density / mu);
            optimized_ee.push_back(best.ee);
            mimo_ratio.push_back(mimo->ee / best.ee);
            single_factor.push_back(best.ee / single->ee);
        }
        const auto [rmin, rmax] = std::minmax_element(density_ratio.begin(), density_ratio.end());
        const auto [emin, emax] = std::minmax_element(optimized_ee.begin(), optimized_ee.end());
        const double worst_mimo = *std::min_element(mimo_ratio.begin(), mimo_ratio.end());
        const double worst_single =
            *std::min_element(single_factor.begin(), single_factor.end());
        const bool linear_scaling = *rmax / *rmin <= 1.5 * 1.5;
        const bool flat_ee = (*emax - *emin) / *emax < 0.20;
        const bool mimo_close = worst_mimo >= 0.90;
        const bool single_low = worst_single >= 2.0;
        Outcome o;
        std::ostringstream d;
        d << "lambda/mu spread " << *rmax / *rmin << " (<=2.25: " << (linear_scaling ? "yes" : "no")
          << "), EE variation " << (*emax - *emin) / *emax * 100.0 << "% (<20%: "
          << (flat_ee ? "yes" : "no") << "), min (195,20)/optimized = " << worst_mimo
          << " (>=0.9: " << (mimo_close ? "yes" : "no")
          << "), optimized/(10,1) min " << worst_single << " max "
          << *std::max_element(single_factor.begin(), single_factor.end()) << " (>=2: "
          << (single_low ? "yes" : "no") << ")";
        o.detail = d.str();
        o.pass = linear_scaling && flat_ee && mimo_close && single_low &&
                 elapsed_since(t0) < 10.0;
        return o;
    });

    criterion(11, "mc-validate output is byte-identical across worker counts", [&] {
        namespace fs = std::filesystem;
        auto s = scenario;
        s.sweep = SweepSpec{"lambda", "geometric", 1e-5, 1e-3, 4, false};
        s.mc = McSpec{500, 1, 1e-3, 31337, "distributional", 1, 4000};
        const auto path_a = (fs::temp_directory_path() / "eenet_acceptance_a.csv").string();
        const auto path_b = (fs::temp_directory_path() / "eenet_acceptance_b.csv").string();
        write_mc_validate_csv(run_mc_validate(s), path_a, s.csv_precision);
        s.mc->workers = 4;
        write_mc_validate_csv(run_mc_validate(s), path_b, s.csv_precision);
        const bool identical = slurp(path_a) == slurp(path_b) && !slurp(path_a).empty();
        fs::remove(path_a);
        fs::remove(path_b);
        Outcome o;
        o.detail = identical ? "identical CSV bytes with 1 and 4 workers"
                             : "CSV output differed between worker counts";
        o.pass = identical;
        return o;
    });

    std::printf("%s: %d of 11 criteria passed\n", failures == 0 ? "SUCCESS" : "FAILURE",
                11 - failures);
    return failures == 0 ? 0 : 1;
}
