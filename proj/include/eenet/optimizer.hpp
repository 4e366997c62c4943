#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "eenet/analytic.hpp"
#include "eenet/types.hpp"

/// Energy-efficiency optimization: the closed-form optima for transmit
/// energy, antenna count and user count, the alternating algorithm combining
/// them, an exhaustive grid-search oracle, a numeric convexity probe for the
/// relaxed problem, and the fixed-UE-density design variant.
namespace eenet {

/// Transmit energy per UE that meets the SE target exactly:
/// rho* = c G / (M - K - 2cK/(alpha-2)) with c = required_sinr(gamma, eps)
/// and G = mean_noise_pathloss. Returns nullopt when the denominator is
/// nonpositive (target unreachable at this antenna/user combination).
inline std::optional<double> rho_star(const PropagationParams& p, double gamma, double lambda,
                                      int antennas, int users) {
    validate(p);
    if (users < 1 || antennas < users + 1)
        throw std::invalid_argument("rho*: requires antennas >= users + 1, users >= 1");
    const double c = required_sinr(gamma, p.impairment_level);
    const double slack =
        antennas - users - c * 2.0 * users / (p.pathloss_exponent - 2.0);
    if (!(slack > 0.0)) return std::nullopt;
    return c * mean_noise_pathloss(p, lambda) / slack;
}

namespace detail {

/// Reciprocal EE of the reduced problem with real-valued antenna and user
/// counts and rho eliminated via rho*. Infinity outside the feasible region.
inline double relaxed_reciprocal_ee(const PropagationParams& p, const HardwareProfile& h,
                                    double gamma, double lambda, double users, double antennas) {
    if (!(users > 0.0)) return std::numeric_limits<double>::infinity();
    const double c = required_sinr(gamma, p.impairment_level);
    const double slack = antennas - users - c * 2.0 * users / (p.pathloss_exponent - 2.0);
    if (!(slack > 0.0)) return std::numeric_limits<double>::infinity();
    const double radiated =
        users * c * mean_noise_pathloss(p, lambda) / slack / h.amplifier_efficiency;
    const double denom = radiated + h.static_energy + h.ue_circuit_energy * users +
                         h.antenna_circuit_energy * antennas +
                         h.processing_energy * antennas * users +
                         h.coding_energy_per_bit * users * gamma;
    return denom / (users * gamma);
}

/// EE at integer (M, K) with rho = rho*; -infinity when infeasible.
/// Shared candidate objective for all integer searches.
inline double ee_at(const PropagationParams& p, const HardwareProfile& h, double gamma,
                    double lambda, int antennas, int users) {
    if (users < 1 || antennas < users + 1) return -std::numeric_limits<double>::infinity();
    const auto rho = rho_star(p, gamma, lambda, antennas, users);
    if (!rho) return -std::numeric_limits<double>::infinity();
    // gamma == 0 carries zero traffic; define EE as 0 rather than evaluating the bound.
    if (gamma == 0.0) return 0.0;
    return 1.0 / relaxed_reciprocal_ee(p, h, gamma, lambda, users, antennas);
}

} // namespace detail

/// Real-valued EE-optimal antenna count for a given user count:
/// M* = K + 2cK/(alpha-2) + sqrt(c K G / (eta (D0 + D1 K))).
inline double m_star(const PropagationParams& p, const HardwareProfile& h, double gamma,
                     double lambda, int users) {
    validate(p);
    validate(h);
    if (users < 1) throw std::invalid_argument("M*: user count must be >= 1");
    const double c = required_sinr(gamma, p.impairment_level);
    const double per_antenna = h.antenna_circuit_energy + h.processing_energy * users;
    if (!(per_antenna > 0.0))
        throw std::invalid_argument("M*: antenna energy coefficients are all zero");
    const double surplus = std::sqrt(c * users * mean_noise_pathloss(p, lambda) /
                                     (h.amplifier_efficiency * per_antenna));
    return users + c * 2.0 * users / (p.pathloss_exponent - 2.0) + surplus;
}

/// Integer antenna count: the better of floor/ceil of M* (ties to the
/// smaller). The EE denominator is convex in M, so this beats every other
/// integer.
inline int m_star_int(const PropagationParams& p, const HardwareProfile& h, double gamma,
                      double lambda, int users) {
    const double real = m_star(p, h, gamma, lambda, users);
    const int lo = std::max(users + 1, static_cast<int>(std::floor(real)));
    const int hi = lo + 1;
    const double ee_lo = detail::ee_at(p, h, gamma, lambda, lo, users);
    const double ee_hi = detail::ee_at(p, h, gamma, lambda, hi, users);
    if (ee_lo < 0.0 && ee_hi < 0.0)
        throw infeasible_error("M*: no feasible integer antenna count near the optimum");
    return ee_lo >= ee_hi ? lo : hi;
}

/// Real-valued EE-optimal user count for a fixed antenna-to-user ratio
/// beta = M/K > 1:
/// K* = sqrt( cG / (eta beta D1 (beta - 1 - 2c/(alpha-2))) + C0 / (beta D1) ).
/// Returns nullopt when beta is too small to leave positive slack.
inline std::optional<double> k_star(const PropagationParams& p, const HardwareProfile& h,
                                    double gamma, double lambda, double beta) {
    validate(p);
    validate(h);
    if (!(beta > 1.0)) throw std::invalid_argument("K*: antenna ratio must exceed 1");
    if (!(h.processing_energy > 0.0))
        throw std::invalid_argument("K*: processing energy coefficient must be > 0");
    const double c = required_sinr(gamma, p.impairment_level);
    const double slack = beta - 1.0 - c * 2.0 / (p.pathloss_exponent - 2.0);
    if (!(slack > 0.0)) return std::nullopt;
    const double radiated_term = c * mean_noise_pathloss(p, lambda) /
                                 (h.amplifier_efficiency * beta * h.processing_energy * slack);
    return std::sqrt(radiated_term + h.static_energy / (beta * h.processing_energy));
}

/// Integer user count along the ray M = beta K. Candidates within +-10 of K*
/// are compared at M = round(beta k) with rho refreshed per candidate; the
/// antenna rounding perturbs the feasibility slack enough that plain
/// floor/ceil can miss the best integer. Ties go to the smaller K.
inline std::optional<int> k_star_int(const PropagationParams& p, const HardwareProfile& h,
                                     double gamma, double lambda, double beta) {
    const auto real = k_star(p, h, gamma, lambda, beta);
    if (!real) return std::nullopt;
    const int center = static_cast<int>(std::floor(*real));
    int best = -1;
    double best_ee = -std::numeric_limits<double>::infinity();
    for (int k = std::max(1, center - 10); k <= center + 11; ++k) {
        const int m = static_cast<int>(std::llround(beta * k));
        const double v = detail::ee_at(p, h, gamma, lambda, m, k);
        if (v > best_ee) {
            best_ee = v;
            best = k;
        }
    }
    if (best < 0 || !(best_ee > -std::numeric_limits<double>::infinity())) return std::nullopt;
    return best;
}

enum class OptStatus { converged, infeasible_start, iteration_cap };

struct TrajectoryPoint {
    int antennas = 0;
    int users = 0;
    double tx_energy = 0.0;
    double ee = 0.0;
};

struct OptimizationOutcome {
    DesignPoint design;
    double ee = 0.0;
    int iterations = 0;
    std::vector<TrajectoryPoint> trajectory;
    OptStatus status = OptStatus::infeasible_start;
};

/// Alternating optimization: update K along the current ray beta = M/K, then
/// update M at the new K, refreshing rho* with every candidate, until neither
/// changes or the relative EE improvement drops below tol. The current
/// iterate always stays in the candidate set, so the trajectory EE is
/// nondecreasing by construction.
inline OptimizationOutcome alternating_optimize(const PropagationParams& p,
                                                const HardwareProfile& h, double gamma,
                                                double lambda, int initial_antennas,
                                                int initial_users, double tol = 1e-8,
                                                int max_iters = 100) {
    OptimizationOutcome out;
    int m = initial_antennas;
    int k = initial_users;
    double ee = detail::ee_at(p, h, gamma, lambda, m, k);
    if (!(ee > -std::numeric_limits<double>::infinity())) {
        out.status = OptStatus::infeasible_start;
        return out;
    }
    const auto rho0 = rho_star(p, gamma, lambda, m, k);
    out.trajectory.push_back({m, k, *rho0, ee});
    out.status = OptStatus::iteration_cap;
    for (int it = 1; it <= max_iters; ++it) {
        const double beta = static_cast<double>(m) / k;
        int k_next = k;
        if (const auto cand = k_star_int(p, h, gamma, lambda, beta)) {
            const double cand_m = std::llround(beta * *cand);
            if (detail::ee_at(p, h, gamma, lambda, static_cast<int>(cand_m), *cand) >
                detail::ee_at(p, h, gamma, lambda, static_cast<int>(std::llround(beta * k)), k))
                k_next = *cand;
        }
        int m_mid = static_cast<int>(std::llround(beta * k_next));
        if (detail::ee_at(p, h, gamma, lambda, m_mid, k_next) <
            -std::numeric_limits<double>::max())
            m_mid = m; // keep a feasible reference antenna count
        const double real_m = m_star(p, h, gamma, lambda, k_next);
        int m_next = m_mid;
        double best = detail::ee_at(p, h, gamma, lambda, m_mid, k_next);
        for (int cand : {static_cast<int>(std::floor(real_m)),
                         static_cast<int>(std::floor(real_m)) + 1}) {
            const double v = detail::ee_at(p, h, gamma, lambda, cand, k_next);
            if (v > best || (v == best && cand < m_next)) {
                best = v;
                m_next = cand;
            }
        }
        const double ee_next = detail::ee_at(p, h, gamma, lambda, m_next, k_next);
        const auto rho_next = rho_star(p, gamma, lambda, m_next, k_next);
        out.trajectory.push_back({m_next, k_next, rho_next ? *rho_next : 0.0, ee_next});
        out.iterations = it;
        const bool unchanged = (m_next == m && k_next == k);
        const bool small_gain = ee_next - ee <= tol * std::max(ee, 1e-300);
        m = m_next;
        k = k_next;
        ee = ee_next;
        if (unchanged || small_gain) {
            out.status = OptStatus::converged;
            break;
        }
    }
    const auto rho = rho_star(p, gamma, lambda, m, k);
    out.design = DesignPoint{rho ? *rho : 0.0, lambda, m, k};
    out.ee = ee;
    return out;
}

struct GridCell {
    int antennas = 0;
    int users = 0;
    double ee = 0.0;
};

struct GridSearchReport {
    DesignPoint best;
    double best_ee = 0.0;
    std::vector<GridCell> surface; // feasible cells only
    std::pair<int, int> antenna_range;
    std::pair<int, int> user_range;
};

/// Exhaustive EE evaluation over an integer (M, K) rectangle with rho = rho*
/// per cell. Infeasible cells are absent from the surface. Throws
/// infeasible_error when no cell is feasible.
inline GridSearchReport grid_search(const PropagationParams& p, const HardwareProfile& h,
                                    double gamma, double lambda, std::pair<int, int> antenna_range,
                                    std::pair<int, int> user_range) {
    if (antenna_range.first > antenna_range.second || user_range.first > user_range.second)
        throw std::invalid_argument("grid search: empty range");
    GridSearchReport report;
    report.antenna_range = antenna_range;
    report.user_range = user_range;
    report.surface.reserve(static_cast<std::size_t>(antenna_range.second - antenna_range.first + 1) *
                           (user_range.second - user_range.first + 1) / 4);
    int best_m = -1, best_k = -1;
    double best_ee = -std::numeric_limits<double>::infinity();
    for (int m = antenna_range.first; m <= antenna_range.second; ++m) {
        for (int k = user_range.first; k <= user_range.second; ++k) {
            if (k < 1 || m < k + 1) continue;
            const double v = detail::ee_at(p, h, gamma, lambda, m, k);
            if (!(v > -std::numeric_limits<double>::infinity())) continue;
            report.surface.push_back({m, k, v});
            if (v > best_ee) {
                best_ee = v;
                best_m = m;
                best_k = k;
            }
        }
    }
    if (best_m < 0) throw infeasible_error("grid search: no feasible (M, K) cell in the ranges");
    const auto rho = rho_star(p, gamma, lambda, best_m, best_k);
    report.best = DesignPoint{*rho, lambda, best_m, best_k};
    report.best_ee = best_ee;
    return report;
}

struct ConvexitySample {
    double users = 0.0;
    double antenna_ratio = 0.0;
    double min_eigenvalue = 0.0;
    double trace = 0.0;
};

struct ConvexityReport {
    std::vector<ConvexitySample> samples;
    int violations = 0;             // samples with min eig < -tolerance * trace
    double worst_ratio = 0.0;       // min over samples of min_eig / trace
    ConvexitySample worst;
    double tolerance = 1e-6;
};

/// Finite-difference Hessian probe of the reciprocal EE in real (K, beta).
/// Violations are reported, never thrown. Central differences with step
/// max(1e-4, 1e-5 |x|), shrunk near the feasibility boundary.
inline ConvexityReport relaxed_convexity_check(const PropagationParams& p,
                                               const HardwareProfile& h, double gamma,
                                               double lambda,
                                               const std::vector<std::pair<double, double>>& points,
                                               double tolerance = 1e-6) {
    const double c = required_sinr(gamma, p.impairment_level);
    const double boundary = 1.0 + c * 2.0 / (p.pathloss_exponent - 2.0);
    auto f = [&](double k, double beta) {
        return detail::relaxed_reciprocal_ee(p, h, gamma, lambda, k, beta * k);
    };
    ConvexityReport report;
    report.tolerance = tolerance;
    report.worst_ratio = std::numeric_limits<double>::infinity();
    for (const auto& [k, beta] : points) {
        if (!(k > 0.0) || !(beta > boundary)) continue;
        double hk = std::max(1e-4, 1e-5 * std::abs(k));
        double hb = std::max(1e-4, 1e-5 * std::abs(beta));
        hk = std::min(hk, k / 4.0);
        hb = std::min(hb, (beta - boundary) / 4.0);
        const double f0 = f(k, beta);
        const double fkk = (f(k + hk, beta) - 2.0 * f0 + f(k - hk, beta)) / (hk * hk);
        const double fbb = (f(k, beta + hb) - 2.0 * f0 + f(k, beta - hb)) / (hb * hb);
        const double fkb = (f(k + hk, beta + hb) - f(k + hk, beta - hb) - f(k - hk, beta + hb) +
                            f(k - hk, beta - hb)) /
                           (4.0 * hk * hb);
        const double trace = fkk + fbb;
        const double det = fkk * fbb - fkb * fkb;
        const double disc = std::sqrt(std::max(trace * trace - 4.0 * det, 0.0));
        ConvexitySample s{k, beta, (trace - disc) / 2.0, trace};
        report.samples.push_back(s);
        const double ratio = s.min_eigenvalue / std::max(s.trace, 1e-300);
        if (ratio < report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst = s;
        }
        if (s.min_eigenvalue < -tolerance * s.trace) ++report.violations;
    }
    return report;
}

/// Samples feasible (K, beta) points on the optimizer's operating region:
/// K log-uniform in [k_lo, k_hi], antenna surplus a uniform multiple
/// (surplus in [surplus_lo, surplus_hi]) of the per-K optimal surplus from
/// the antenna-count optimum (multiple 1 is exactly that optimum).
inline std::vector<std::pair<double, double>> sample_operating_points(
    const PropagationParams& p, const HardwareProfile& h, double gamma, double lambda, int count,
    std::uint64_t seed, double k_lo = 1.0, double k_hi = 60.0, double surplus_lo = 0.25,
    double surplus_hi = 4.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double c = required_sinr(gamma, p.impairment_level);
    const double boundary_ratio = 1.0 + c * 2.0 / (p.pathloss_exponent - 2.0);
    std::vector<std::pair<double, double>> points;
    points.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double k = k_lo * std::exp(unit(rng) * std::log(k_hi / k_lo));
        const double per_antenna = h.antenna_circuit_energy + h.processing_energy * k;
        const double optimal_surplus = std::sqrt(c * k * mean_noise_pathloss(p, lambda) /
                                                 (h.amplifier_efficiency * per_antenna));
        const double u = surplus_lo + unit(rng) * (surplus_hi - surplus_lo);
        points.emplace_back(k, boundary_ratio + u * optimal_surplus / k);
    }
    return points;
}

/// Best design under the fixed-UE-density constraint mu = K lambda: scans
/// integer K, sets lambda = mu / K (skipping K with lambda above the cap),
/// antennas from the closed-form optimum and rho from rho*. The trajectory
/// records the per-K winners in scan order.
inline OptimizationOutcome optimize_with_ue_density(const PropagationParams& p,
                                                    const HardwareProfile& h, double gamma,
                                                    double mu, double lambda_max,
                                                    std::pair<int, int> user_range = {1, 60}) {
    if (!(mu > 0.0)) throw std::invalid_argument("UE density must be > 0");
    OptimizationOutcome out;
    double best_ee = -std::numeric_limits<double>::infinity();
    for (int k = user_range.first; k <= user_range.second; ++k) {
        if (k < 1) continue;
        const double lambda = mu / k;
        if (lambda > lambda_max) continue;
        int m = 0;
        try {
            m = m_star_int(p, h, gamma, lambda, k);
        } catch (const infeasible_error&) {
            continue;
        }
        const double v = detail::ee_at(p, h, gamma, lambda, m, k);
        if (!(v > -std::numeric_limits<double>::infinity())) continue;
        const auto rho = rho_star(p, gamma, lambda, m, k);
        out.trajectory.push_back({m, k, *rho, v});
        if (v > best_ee) {
            best_ee = v;
            out.design = DesignPoint{*rho, lambda, m, k};
        }
    }
    if (out.trajectory.empty())
        throw infeasible_error("UE-density design: no user count admits a feasible deployment");
    out.ee = best_ee;
    out.iterations = static_cast<int>(out.trajectory.size());
    out.status = OptStatus::converged;
    return out;
}

/// Evaluation variant of the UE-density design for a fixed (M, K) reference:
/// lambda = mu / K, rho = rho*. Nullopt when the cap or the SE target rules
/// the reference out.
inline std::optional<OptimizationOutcome> evaluate_with_ue_density(
    const PropagationParams& p, const HardwareProfile& h, double gamma, double mu,
    double lambda_max, int antennas, int users) {
    if (!(mu > 0.0)) throw std::invalid_argument("UE density must be > 0");
    const double lambda = mu / users;
    if (lambda > lambda_max) return std::nullopt;
    const double v = detail::ee_at(p, h, gamma, lambda, antennas, users);
    if (!(v > -std::numeric_limits<double>::infinity())) return std::nullopt;
    const auto rho = rho_star(p, gamma, lambda, antennas, users);
    OptimizationOutcome out;
    out.design = DesignPoint{*rho, lambda, antennas, users};
    out.ee = v;
    out.iterations = 0;
    out.trajectory.push_back({antennas, users, *rho, v});
    out.status = OptStatus::converged;
    return out;
}

} // namespace eenet
