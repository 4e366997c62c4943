#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "eenet/types.hpp"

/// Closed-form performance expressions: spectral-efficiency lower bound,
/// area spectral efficiency, area energy consumption, energy efficiency,
/// feasibility bounds, and the point-process moment identities they rest on.
///
/// Everything here is a pure function of its inputs.
namespace eenet {

/// Highest average SE (bit/symbol) supportable at impairment level eps;
/// +infinity when eps == 0.
inline double feasibility_gamma_bound(double impairment_level) {
    if (impairment_level < 0.0 || impairment_level >= 1.0)
        throw std::invalid_argument("impairment level must be in [0, 1)");
    if (impairment_level == 0.0) return std::numeric_limits<double>::infinity();
    return -2.0 * std::log2(impairment_level);
}

/// SINR required to sustain an average SE of gamma under impairment level eps:
/// (2^gamma - 1) / (1 - 2^gamma eps^2). Defined for 0 <= gamma below the
/// feasibility bound.
inline double required_sinr(double gamma, double impairment_level) {
    if (gamma < 0.0) throw std::invalid_argument("SE target must be >= 0");
    const double pow_gamma = std::exp2(gamma);
    const double den = 1.0 - pow_gamma * impairment_level * impairment_level;
    if (!(den > 0.0))
        throw std::invalid_argument("SE target exceeds the impairment feasibility bound");
    return (pow_gamma - 1.0) / den;
}

/// nu-th moment of the distance to the nearest point of a planar Poisson
/// process of intensity lambda: Gamma(nu/2 + 1) / (pi lambda)^(nu/2).
/// Valid for nu > -2.
inline double mean_distance_moment(double lambda, double nu) {
    if (!(lambda > 0.0)) throw std::invalid_argument("intensity must be > 0");
    if (!(nu > -2.0)) throw std::invalid_argument("distance moment requires nu > -2");
    return std::exp(std::lgamma(nu / 2.0 + 1.0) - (nu / 2.0) * std::log(std::numbers::pi * lambda));
}

/// Expected sum of d^-alpha over the points of a Poisson process of intensity
/// lambda lying beyond radius d0: 2 pi lambda d0^(2-alpha) / (alpha - 2).
inline double conditional_interference_mean(double lambda, double alpha, double d0) {
    if (!(alpha > 2.0)) throw std::invalid_argument("pathloss exponent must be > 2");
    if (!(d0 > 0.0)) throw std::invalid_argument("exclusion radius must be > 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("intensity must be >= 0");
    return 2.0 * std::numbers::pi * lambda * std::pow(d0, 2.0 - alpha) / (alpha - 2.0);
}

/// Average noise-times-pathloss factor seen by a typical user:
/// omega sigma^2 E{d0^alpha}. This is the rho-independent part of the noise
/// term in the SE bound.
inline double mean_noise_pathloss(const PropagationParams& p, double lambda) {
    return p.propagation_loss * p.noise_energy * mean_distance_moment(lambda, p.pathloss_exponent);
}

/// Achievable lower bound on the average per-user SE (bit/symbol) under
/// zero-forcing with M antennas and K users per AP.
///
/// Strictly increasing in tx energy, AP density and antenna count; saturates
/// at log2(1 + (1-eps^2)(M-K) / (2K/(alpha-2) + eps^2 (M-K))) as tx energy
/// grows.
inline double se_lower_bound(const PropagationParams& p, const DesignPoint& d) {
    validate(p);
    validate(d);
    if (!(d.tx_energy > 0.0))
        throw std::invalid_argument("SE bound requires positive transmit energy");
    const double eps2 = p.impairment_level * p.impairment_level;
    const double excess = static_cast<double>(d.antennas - d.users);
    const double interference = 2.0 * d.users / (p.pathloss_exponent - 2.0);
    const double noise = mean_noise_pathloss(p, d.ap_density) / d.tx_energy;
    return std::log2(1.0 + (1.0 - eps2) * excess / (interference + eps2 * excess + noise));
}

/// ASE = lambda K SE, bit/symbol/m^2.
inline double area_spectral_efficiency(double lambda, int users, double se) {
    if (!(lambda > 0.0)) throw std::invalid_argument("AP density must be > 0");
    if (users < 1) throw std::invalid_argument("user count must be >= 1");
    if (!(se >= 0.0)) throw std::invalid_argument("SE must be >= 0");
    return lambda * users * se;
}

/// Area energy consumption (Joule/symbol/m^2): radiated, circuit, processing
/// and coding/backhaul energy of the deployment, for a given per-user SE.
inline double area_energy_consumption(const HardwareProfile& h, const DesignPoint& d, double se) {
    validate(h);
    const double per_ap = d.users * d.tx_energy / h.amplifier_efficiency + h.static_energy +
                          h.ue_circuit_energy * d.users + h.antenna_circuit_energy * d.antennas +
                          h.processing_energy * d.antennas * d.users;
    return d.ap_density * per_ap +
           h.coding_energy_per_bit * area_spectral_efficiency(d.ap_density, d.users, se);
}

/// Energy efficiency (bit/Joule) of a design point, using the SE lower bound.
/// The AP density cancels between ASE and AEC; it enters only through the SE.
inline double energy_efficiency(const PropagationParams& p, const HardwareProfile& h,
                                const DesignPoint& d) {
    const double se = se_lower_bound(p, d);
    return area_spectral_efficiency(d.ap_density, d.users, se) / area_energy_consumption(h, d, se);
}

/// Finite EE ceiling reached as the AP density grows without bound (the
/// radiated term vanishes, circuit energy remains):
/// K gamma / (C0 + C1 K + D0 M + D1 M K + A K gamma).
inline double ee_density_limit(const HardwareProfile& h, int antennas, int users, double gamma) {
    validate(h);
    if (users < 1 || antennas < users + 1)
        throw std::invalid_argument("density limit requires antennas >= users + 1, users >= 1");
    if (!(gamma >= 0.0)) throw std::invalid_argument("SE target must be >= 0");
    const double circuit = h.static_energy + h.ue_circuit_energy * users +
                           h.antenna_circuit_energy * antennas +
                           h.processing_energy * antennas * users +
                           h.coding_energy_per_bit * users * gamma;
    return users * gamma / circuit;
}

/// Full evaluation of a design point.
inline EvaluationResult evaluate(const PropagationParams& p, const HardwareProfile& h,
                                 const DesignPoint& d) {
    EvaluationResult r;
    r.se_bound = se_lower_bound(p, d);
    r.ase = area_spectral_efficiency(d.ap_density, d.users, r.se_bound);
    r.aec = area_energy_consumption(h, d, r.se_bound);
    r.ee = r.ase / r.aec;
    r.feasible = true;
    return r;
}

/// Total radiated power of one AP in Watt: K rho / S.
inline double radiated_power_watt(const HardwareProfile& h, const DesignPoint& d) {
    return d.users * d.tx_energy / h.symbol_time;
}

} // namespace eenet
