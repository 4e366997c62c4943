#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

/// Core domain types for the energy-efficiency network design toolkit.
///
/// Unit conventions:
///  - all energies are carried per symbol (Joule/symbol); Watts appear only
///    at I/O boundaries via division by the symbol time
///  - the coding/backhaul coefficient is stored in Joule/bit (file format
///    uses J/Gbit, converted with an exact 1e-9 factor at load time)
///  - propagation loss omega is stored linear (file format uses dB)
namespace eenet {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

/// Pathloss, noise and transceiver-impairment environment.
struct PropagationParams {
    double pathloss_exponent = 0.0;   // > 2
    double propagation_loss = 1.0;    // linear scale, > 0
    double noise_energy = 0.0;        // Joule/symbol, >= 0
    double impairment_level = 0.0;    // EVM proxy, in [0, 1)
};

/// Circuit and amplifier energy model of an access point.
struct HardwareProfile {
    double amplifier_efficiency = 1.0;   // in (0, 1]
    double coding_energy_per_bit = 0.0;  // Joule/bit
    double static_energy = 0.0;          // Joule/symbol, per AP
    double ue_circuit_energy = 0.0;      // Joule/symbol, per served UE
    double antenna_circuit_energy = 0.0; // Joule/symbol, per antenna
    double processing_energy = 0.0;      // Joule/symbol, per antenna-UE pair
    double symbol_time = 1.0;            // seconds/symbol
};

/// The four design variables of the network.
struct DesignPoint {
    double tx_energy = 0.0;   // Joule/symbol per UE, >= 0
    double ap_density = 0.0;  // AP per m^2, > 0
    int antennas = 0;         // M >= users + 1 (zero-forcing requirement)
    int users = 0;            // K >= 1
};

/// Service constraint: SE target plus deployment limits.
struct ServiceConstraint {
    double target_se = 0.0;                // bit/symbol, >= 0
    double max_ap_density = 0.0;           // AP per m^2
    std::optional<double> ue_density = {}; // UE per m^2, for the fixed-UE-density variant
};

/// Full evaluation of one design point.
struct EvaluationResult {
    double se_bound = 0.0; // bit/symbol per user
    double ase = 0.0;      // bit/symbol/m^2
    double aec = 0.0;      // Joule/symbol/m^2
    double ee = 0.0;       // bit/Joule
    bool feasible = false;
};

inline void validate(const PropagationParams& p) {
    if (!(p.pathloss_exponent > 2.0))
        throw std::invalid_argument("propagation: pathloss exponent must be > 2");
    if (!(p.propagation_loss > 0.0))
        throw std::invalid_argument("propagation: loss factor must be > 0");
    if (!(p.noise_energy >= 0.0))
        throw std::invalid_argument("propagation: noise energy must be >= 0");
    if (!(p.impairment_level >= 0.0 && p.impairment_level < 1.0))
        throw std::invalid_argument("propagation: impairment level must be in [0, 1)");
}

inline void validate(const HardwareProfile& h) {
    if (!(h.amplifier_efficiency > 0.0 && h.amplifier_efficiency <= 1.0))
        throw std::invalid_argument("hardware: amplifier efficiency must be in (0, 1]");
    if (h.coding_energy_per_bit < 0.0 || h.static_energy < 0.0 || h.ue_circuit_energy < 0.0 ||
        h.antenna_circuit_energy < 0.0 || h.processing_energy < 0.0)
        throw std::invalid_argument("hardware: energy coefficients must be >= 0");
    if (!(h.symbol_time > 0.0))
        throw std::invalid_argument("hardware: symbol time must be > 0");
}

inline void validate(const DesignPoint& d) {
    if (!(d.tx_energy >= 0.0))
        throw std::invalid_argument("design: transmit energy must be >= 0");
    if (!(d.ap_density > 0.0))
        throw std::invalid_argument("design: AP density must be > 0");
    if (d.users < 1)
        throw std::invalid_argument("design: user count must be >= 1");
    if (d.antennas < d.users + 1)
        throw std::invalid_argument("design: zero-forcing requires antennas >= users + 1");
}

/// Thrown when a requested design or optimization problem has no feasible point.
class infeasible_error : public std::runtime_error {
  public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace eenet
