#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "eenet/analytic.hpp"
#include "eenet/rng.hpp"
#include "eenet/stats.hpp"
#include "eenet/types.hpp"

/// Stochastic-geometry Monte-Carlo simulation of the zero-forcing downlink:
/// Poisson-deployed access points, Rayleigh fading, hardware distortion.
/// Estimates the true ergodic SE that the closed-form bound understates, and
/// validates the moment identities the bound is built from.
namespace eenet {

enum class PrecoderMode {
    explicit_zf,    // build every AP's precoder from drawn channels
    distributional, // draw the known power distributions directly
};

struct SimulationConfig {
    PropagationParams propagation;
    DesignPoint design;
    double window_radius = 0.0; // meters, interferers beyond it are truncated
    long trials = 1;            // independent geometry realizations
    int fading_draws = 1;       // channel realizations per geometry
    std::uint64_t master_seed = 0;
    PrecoderMode mode = PrecoderMode::distributional;
    int workers = 0; // 0 = hardware concurrency
};

/// Window radius such that the expected truncated interference tail
/// 2 pi lambda R^(2-alpha)/(alpha-2) is the given fraction of the conditional
/// interference mean at the mean serving distance 1/(2 sqrt(lambda)).
inline double window_radius_for_tail(double lambda, double alpha, double tail_fraction) {
    if (!(lambda > 0.0) || !(alpha > 2.0) || !(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw std::invalid_argument("window sizing: need lambda > 0, alpha > 2, fraction in (0,1)");
    const double mean_serving = 0.5 / std::sqrt(lambda);
    return mean_serving * std::pow(tail_fraction, -1.0 / (alpha - 2.0));
}

struct GeometryRealization {
    double serving_distance = 0.0;
    std::vector<double> interferer_distances; // all > serving_distance
    int resample_attempts = 0;                // zero-AP draws before this one
};

struct SimEventCounters {
    std::atomic<long> degenerate_geometries{0};
    std::atomic<long> singular_precoders{0};
};

/// Draws one Poisson deployment in the disc of radius window_radius around
/// the typical user; the nearest AP serves. Deterministic in (master_seed,
/// trial_index); zero-AP draws are resampled with an incremented sub-seed.
inline GeometryRealization sample_geometry(const SimulationConfig& config,
                                           std::uint64_t trial_index) {
    validate(config.propagation);
    if (!(config.window_radius > 0.0))
        throw std::invalid_argument("geometry: window radius must be > 0");
    const double r = config.window_radius;
    const double mean_count = config.design.ap_density * std::numbers::pi * r * r;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto rng = make_engine(config.master_seed, stream::geometry, trial_index,
                               static_cast<std::uint64_t>(attempt));
        std::poisson_distribution<long> count(mean_count);
        const long n = count(rng);
        if (n == 0) continue;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        GeometryRealization geom;
        geom.resample_attempts = attempt;
        geom.interferer_distances.reserve(static_cast<std::size_t>(n) - 1);
        double nearest = std::numeric_limits<double>::infinity();
        std::vector<double> radii(static_cast<std::size_t>(n));
        for (auto& d : radii) {
            d = r * std::sqrt(unit(rng)); // uniform in the disc
            nearest = std::min(nearest, d);
        }
        bool serving_taken = false;
        for (double d : radii) {
            if (!serving_taken && d == nearest) {
                serving_taken = true;
                continue;
            }
            geom.interferer_distances.push_back(d);
        }
        geom.serving_distance = nearest;
        return geom;
    }
    throw std::runtime_error("geometry: zero-AP window resampled 1000 times; enlarge the window");
}

namespace detail {

/// Scratch space for zero-forcing precoder construction.
struct ZfWorkspace {
    Eigen::MatrixXcd channels;  // M x K, unit-variance columns
    Eigen::MatrixXcd precoder;  // M x K, unit-norm columns
    Eigen::MatrixXcd gram;      // K x K
    Eigen::VectorXcd probe;     // M
    Eigen::RowVectorXcd mixed;  // K

    void resize(int antennas, int users) {
        channels.resize(antennas, users);
        precoder.resize(antennas, users);
        gram.resize(users, users);
        probe.resize(antennas);
        mixed.resize(users);
    }
};

inline void draw_unit_gaussian(std::mt19937_64& rng, Eigen::MatrixXcd& m) {
    std::normal_distribution<double> n(0.0, std::numbers::sqrt2 / 2.0); // CN(0,1) components
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            m(r, c) = std::complex<double>(n(rng), n(rng));
}

inline void draw_unit_gaussian(std::mt19937_64& rng, Eigen::VectorXcd& v) {
    std::normal_distribution<double> n(0.0, std::numbers::sqrt2 / 2.0);
    for (Eigen::Index r = 0; r < v.size(); ++r)
        v(r) = std::complex<double>(n(rng), n(rng));
}

/// Zero-forcing precoder with unit-norm columns from freshly drawn
/// unit-variance channels. Column scalings of the channel matrix do not
/// change the result, so per-user pathloss never enters here. Returns false
/// on a numerically singular draw.
inline bool build_zf_precoder(std::mt19937_64& rng, ZfWorkspace& ws) {
    draw_unit_gaussian(rng, ws.channels);
    ws.gram.noalias() = ws.channels.adjoint() * ws.channels;
    Eigen::LLT<Eigen::MatrixXcd> llt(ws.gram);
    if (llt.info() != Eigen::Success) return false;
    ws.precoder.noalias() = llt.solve(ws.channels.adjoint()).adjoint();
    for (Eigen::Index c = 0; c < ws.precoder.cols(); ++c) {
        const double norm = ws.precoder.col(c).norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) return false;
        ws.precoder.col(c) /= norm;
    }
    return true;
}

} // namespace detail

/// One SINR sample for a fixed geometry, assembled exactly as the argument of
/// the SE logarithm: desired and per-interferer leakage powers from the drawn
/// (or equivalent-distribution) channels, distortion noise entering through
/// its conditional variance, thermal noise as sigma^2/rho.
inline double simulate_sinr(const SimulationConfig& config, const GeometryRealization& geometry,
                            std::uint64_t fading_seed, SimEventCounters* counters = nullptr) {
    const auto& p = config.propagation;
    const auto& d = config.design;
    validate(p);
    validate(d);
    if (!(d.tx_energy > 0.0)) throw std::invalid_argument("SINR: transmit energy must be > 0");
    std::mt19937_64 rng(fading_seed);
    const double alpha = p.pathloss_exponent;
    const double serving_gain =
        std::pow(geometry.serving_distance, -alpha) / p.propagation_loss;

    double desired = 0.0;
    double interference = 0.0;
    if (config.mode == PrecoderMode::distributional) {
        std::gamma_distribution<double> desired_power(d.antennas - d.users + 1, 1.0);
        desired = serving_gain * desired_power(rng);
        std::gamma_distribution<double> leakage_power(d.users, 1.0);
        for (double dist : geometry.interferer_distances)
            interference += std::pow(dist, -alpha) / p.propagation_loss * leakage_power(rng);
    } else {
        detail::ZfWorkspace ws;
        ws.resize(d.antennas, d.users);
        while (!detail::build_zf_precoder(rng, ws)) {
            if (counters) counters->singular_precoders.fetch_add(1, std::memory_order_relaxed);
        }
        // the typical user is column 0 of its serving AP's channel matrix
        desired = serving_gain * std::norm(ws.channels.col(0).dot(ws.precoder.col(0)));
        for (double dist : geometry.interferer_distances) {
            while (!detail::build_zf_precoder(rng, ws)) {
                if (counters) counters->singular_precoders.fetch_add(1, std::memory_order_relaxed);
            }
            detail::draw_unit_gaussian(rng, ws.probe);
            ws.mixed.noalias() = ws.probe.adjoint() * ws.precoder;
            interference += std::pow(dist, -alpha) / p.propagation_loss * ws.mixed.squaredNorm();
        }
    }
    const double eps2 = p.impairment_level * p.impairment_level;
    return (1.0 - eps2) * desired /
           (interference + eps2 * desired + p.noise_energy / d.tx_energy);
}

/// Ergodic SE estimate: mean of log2(1 + SINR) over geometries and fading
/// draws. Trials run on any number of workers; each trial writes its own slot
/// and the reduction order is fixed, so the estimate is bit-identical for a
/// given master seed regardless of worker count.
inline McEstimate estimate_ergodic_se(const SimulationConfig& config,
                                      SimEventCounters* counters = nullptr) {
    if (config.trials < 1) throw std::invalid_argument("estimate: trials must be >= 1");
    if (config.fading_draws < 1) throw std::invalid_argument("estimate: fading draws must be >= 1");
    std::vector<double> per_trial(static_cast<std::size_t>(config.trials));
    const unsigned workers =
        config.workers > 0 ? static_cast<unsigned>(config.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<long> next{0};
    std::atomic<long> degenerate{0};
    auto body = [&]() {
        for (;;) {
            const long t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= config.trials) return;
            const auto geom = sample_geometry(config, static_cast<std::uint64_t>(t));
            degenerate.fetch_add(geom.resample_attempts, std::memory_order_relaxed);
            double sum = 0.0;
            for (int f = 0; f < config.fading_draws; ++f) {
                const auto seed = substream_seed(config.master_seed, stream::fading,
                                                 static_cast<std::uint64_t>(t),
                                                 static_cast<std::uint64_t>(f));
                sum += std::log2(1.0 + simulate_sinr(config, geom, seed, counters));
            }
            per_trial[static_cast<std::size_t>(t)] = sum / config.fading_draws;
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (counters)
        counters->degenerate_geometries.fetch_add(degenerate.load(), std::memory_order_relaxed);
    return mc_estimate(per_trial);
}

struct MomentCheck {
    std::string name;
    double estimate = 0.0;
    double target = 0.0;
    double half_width = 0.0;
    bool ok = false;
};

struct MomentReport {
    std::vector<MomentCheck> checks;
    bool all_ok = true;
};

/// Validates the conditional channel-power identities behind the SE bound
/// against explicit zero-forcing draws, plus the serving-distance moments and
/// the conditional interference mean against sampled geometry. Mismatches are
/// reported, not thrown.
///
/// channel_draws / geometry_trials default to config.trials when zero.
inline MomentReport validate_moment_identities(const SimulationConfig& config,
                                               long channel_draws = 0, long geometry_trials = 0) {
    if (config.mode != PrecoderMode::explicit_zf)
        throw std::invalid_argument("moment validation requires the explicit zero-forcing mode");
    const auto& p = config.propagation;
    const auto& d = config.design;
    validate(p);
    validate(d);
    if (channel_draws <= 0) channel_draws = config.trials;
    if (geometry_trials <= 0) geometry_trials = config.trials;

    MomentReport report;
    auto push = [&report](MomentCheck c) {
        c.ok = std::abs(c.estimate - c.target) <= c.half_width;
        report.all_ok = report.all_ok && c.ok;
        report.checks.push_back(c);
    };

    const double alpha = p.pathloss_exponent;
    const double fixed_distance = 0.5 / std::sqrt(d.ap_density); // mean serving distance
    const double pathloss = std::pow(fixed_distance, alpha) * p.propagation_loss;

    {
        auto rng = make_engine(config.master_seed, stream::moments, 1);
        detail::ZfWorkspace ws;
        ws.resize(d.antennas, d.users);
        std::vector<double> inv_power(static_cast<std::size_t>(channel_draws));
        std::vector<double> leakage(static_cast<std::size_t>(channel_draws));
        for (long i = 0; i < channel_draws; ++i) {
            while (!detail::build_zf_precoder(rng, ws)) {}
            inv_power[static_cast<std::size_t>(i)] =
                pathloss / std::norm(ws.channels.col(0).dot(ws.precoder.col(0)));
            detail::draw_unit_gaussian(rng, ws.probe);
            ws.mixed.noalias() = ws.probe.adjoint() * ws.precoder;
            leakage[static_cast<std::size_t>(i)] = ws.mixed.squaredNorm() / pathloss;
        }
        auto inv = mc_estimate(inv_power);
        push({"inverse_desired_power", inv.mean,
              pathloss / static_cast<double>(d.antennas - d.users), inv.half_width, false});
        auto leak = mc_estimate(leakage);
        push({"interferer_leakage", leak.mean, d.users / pathloss, leak.half_width, false});
    }

    {
        std::vector<double> dist_sq(static_cast<std::size_t>(geometry_trials));
        std::vector<double> serving(static_cast<std::size_t>(geometry_trials));
        const double lambda = d.ap_density;
        for (long t = 0; t < geometry_trials; ++t) {
            const auto geom = sample_geometry(config, static_cast<std::uint64_t>(t));
            serving[static_cast<std::size_t>(t)] = geom.serving_distance;
            dist_sq[static_cast<std::size_t>(t)] = geom.serving_distance * geom.serving_distance;
        }
        auto second_moment = mc_estimate(dist_sq);
        push({"serving_distance_second_moment", second_moment.mean,
              mean_distance_moment(lambda, 2.0), second_moment.half_width, false});

        const double sigma = 1.0 / std::sqrt(2.0 * std::numbers::pi * lambda);
        const auto ks = ks_test(serving, [sigma](double x) { return rayleigh_cdf(x, sigma); });
        MomentCheck c{"serving_distance_ks_p_value", ks.p_value, 1.0, 1.0 - 0.01, false};
        c.ok = ks.p_value > 0.01;
        report.all_ok = report.all_ok && c.ok;
        report.checks.push_back(c);
    }

    {
        // interference sum over points beyond a fixed exclusion radius,
        // sampled directly as a Poisson pattern on the annulus
        const double lambda = d.ap_density;
        const double r = config.window_radius;
        const double d0 = fixed_distance;
        auto rng = make_engine(config.master_seed, stream::moments, 2);
        std::poisson_distribution<long> count(lambda * std::numbers::pi * (r * r - d0 * d0));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> sums(static_cast<std::size_t>(geometry_trials));
        for (long t = 0; t < geometry_trials; ++t) {
            const long n = count(rng);
            double sum = 0.0;
            for (long i = 0; i < n; ++i) {
                const double x = std::sqrt(d0 * d0 + unit(rng) * (r * r - d0 * d0));
                sum += std::pow(x, -alpha);
            }
            sums[static_cast<std::size_t>(t)] = sum;
        }
        auto est = mc_estimate(sums);
        const double truncated_mean = conditional_interference_mean(lambda, alpha, d0) -
                                      conditional_interference_mean(lambda, alpha, r);
        push({"conditional_interference_sum", est.mean, truncated_mean, est.half_width, false});
    }
    return report;
}

} // namespace eenet
