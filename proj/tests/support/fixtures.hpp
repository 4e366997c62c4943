#pragma once

// Shared test fixtures: the default scenario's parameter sets and a sampler
// for random feasible problem instances.

#include <random>
#include <vector>

#include "eenet/analytic.hpp"
#include "eenet/scenario.hpp"
#include "eenet/types.hpp"

#include "support/mpfr_oracle.hpp"

namespace fixtures {

inline eenet::PropagationParams propagation() { return eenet::default_scenario().propagation(); }
inline eenet::HardwareProfile hardware() { return eenet::default_scenario().hardware(); }

inline oracle::Params oracle_params() {
    const auto s = eenet::default_scenario();
    const auto h = s.hardware();
    return {s.alpha,
            eenet::db_to_linear(s.omega_db),
            s.sigma2,
            s.epsilon,
            h.amplifier_efficiency,
            h.coding_energy_per_bit,
            h.static_energy,
            h.ue_circuit_energy,
            h.antenna_circuit_energy,
            h.processing_energy,
            h.symbol_time};
}

struct Instance {
    double gamma = 0.0;
    double lambda = 0.0;
    int antennas = 0;
    int users = 0;
};

/// Random instances satisfying the SE-target feasibility condition with a
/// slack factor in [1.05, 3].
inline std::vector<Instance> random_feasible_instances(int count, std::uint64_t seed,
                                                       double gamma_max = 6.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto p = propagation();
    std::vector<Instance> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        Instance inst;
        inst.gamma = 0.2 + unit(rng) * (gamma_max - 0.2);
        inst.lambda = std::pow(10.0, -6.0 + 4.0 * unit(rng));
        inst.users = 1 + static_cast<int>(unit(rng) * 49);
        const double c = eenet::required_sinr(inst.gamma, p.impairment_level);
        const double boundary =
            inst.users + c * 2.0 * inst.users / (p.pathloss_exponent - 2.0);
        const double slack_factor = 1.05 + unit(rng) * 1.95;
        inst.antennas = static_cast<int>(std::ceil(boundary * slack_factor)) + 1;
        if (inst.antennas < inst.users + 1) inst.antennas = inst.users + 1;
        out.push_back(inst);
    }
    return out;
}

} // namespace fixtures
