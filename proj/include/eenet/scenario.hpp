#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "eenet/analytic.hpp"
#include "eenet/mc.hpp"
#include "eenet/types.hpp"

/// Scenario files: a JSON tree with four sections (propagation, hardware,
/// constraint, and optional sweep / mc). Values are stored in the file's
/// units (dB, Watt, J/Gbit) and converted to internal per-symbol units on
/// access, so a saved scenario reloads bit-identically.
namespace eenet {

/// Configuration-file problem: missing/ill-typed fields, bad grids, units.
class scenario_error : public std::runtime_error {
  public:
    explicit scenario_error(const std::string& what) : std::runtime_error(what) {}
};

struct SweepSpec {
    std::string variable;       // "lambda" | "mu" | "gamma"
    std::string scale;          // "geometric" | "linear"
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool with_mc = false;       // attach Monte-Carlo EE columns
};

struct McSpec {
    long trials = 10000;
    int fading_draws = 1;
    double window_tail_fraction = 1e-3;
    std::uint64_t master_seed = 12345;
    std::string precoder_mode = "distributional"; // or "explicit-zf"
    int workers = 0;
    long moment_draws = 20000;
};

struct ScenarioFile {
    // propagation section, file units
    double alpha = 0.0;
    double omega_db = 0.0;
    double sigma2 = 0.0; // Joule/symbol
    double epsilon = 0.0;

    // hardware section, file units
    double eta = 0.0;
    double coding_joule_per_gbit = 0.0;
    double static_power_watt = 0.0;
    double ue_power_watt = 0.0;
    double antenna_power_watt = 0.0;
    double processing_joule_per_symbol = 0.0;
    double symbol_time = 0.0; // seconds

    // constraint section
    double gamma = 0.0;      // bit/symbol
    double lambda = 0.0;     // design AP density, AP/m^2
    double lambda_max = 0.0; // AP/m^2
    std::optional<double> mu = {}; // UE/m^2

    std::optional<SweepSpec> sweep = {};
    std::optional<McSpec> mc = {};
    int csv_precision = 9;

    PropagationParams propagation() const {
        return {alpha, db_to_linear(omega_db), sigma2, epsilon};
    }
    HardwareProfile hardware() const {
        return {eta,
                coding_joule_per_gbit * 1e-9,
                static_power_watt * symbol_time,
                ue_power_watt * symbol_time,
                antenna_power_watt * symbol_time,
                processing_joule_per_symbol,
                symbol_time};
    }
    McSpec mc_or_default() const { return mc.value_or(McSpec{}); }
};

inline PrecoderMode parse_precoder_mode(const std::string& name) {
    if (name == "explicit-zf") return PrecoderMode::explicit_zf;
    if (name == "distributional") return PrecoderMode::distributional;
    throw scenario_error("scenario: mc.precoder_mode must be 'explicit-zf' or 'distributional'");
}

/// Reference scenario with the default simulation parameters.
inline ScenarioFile default_scenario() {
    ScenarioFile s;
    s.alpha = 3.76;
    s.omega_db = 35.0;
    s.sigma2 = 1e-20;
    s.epsilon = 0.05;
    s.eta = 0.39;
    s.coding_joule_per_gbit = 1.15;
    s.static_power_watt = 10.0;
    s.ue_power_watt = 0.1;
    s.antenna_power_watt = 1.0;
    s.processing_joule_per_symbol = 1.56e-10;
    s.symbol_time = 5e-8;
    s.gamma = 3.0;
    s.lambda = 1e-4;
    s.lambda_max = 0.1;
    return s;
}

namespace detail {

inline const nlohmann::json& require_section(const nlohmann::json& j, const char* name) {
    if (!j.contains(name))
        throw scenario_error(std::string("scenario: missing section '") + name + "'");
    if (!j.at(name).is_object())
        throw scenario_error(std::string("scenario: section '") + name + "' must be an object");
    return j.at(name);
}

template <typename T>
T require_field(const nlohmann::json& section, const char* section_name, const char* key) {
    if (!section.contains(key))
        throw scenario_error(std::string("scenario: missing field '") + section_name + "." + key +
                             "'");
    try {
        return section.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw scenario_error(std::string("scenario: field '") + section_name + "." + key +
                             "' has the wrong type");
    }
}

template <typename T>
T optional_field(const nlohmann::json& section, const char* section_name, const char* key,
                 T fallback) {
    if (!section.contains(key)) return fallback;
    try {
        return section.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw scenario_error(std::string("scenario: field '") + section_name + "." + key +
                             "' has the wrong type");
    }
}

} // namespace detail

inline void validate_scenario(const ScenarioFile& s) {
    try {
        validate(s.propagation());
        validate(s.hardware());
    } catch (const std::invalid_argument& e) {
        throw scenario_error(std::string("scenario: ") + e.what());
    }
    if (!(s.lambda > 0.0)) throw scenario_error("scenario: constraint.lambda must be > 0");
    if (!(s.lambda_max >= s.lambda))
        throw scenario_error("scenario: constraint.lambda_max must be >= constraint.lambda");
    if (s.mu && !(*s.mu > 0.0)) throw scenario_error("scenario: constraint.mu must be > 0");
    if (!(s.gamma >= 0.0)) throw scenario_error("scenario: constraint.gamma must be >= 0");
    const double bound = feasibility_gamma_bound(s.epsilon);
    if (!(s.gamma < bound)) {
        std::ostringstream msg;
        msg << "scenario: SE target " << s.gamma
            << " is infeasible at impairment level " << s.epsilon
            << "; any target must stay below -2 log2(epsilon) = " << bound << " bit/symbol";
        throw infeasible_error(msg.str());
    }
    if (s.sweep) {
        const auto& sw = *s.sweep;
        if (sw.variable != "lambda" && sw.variable != "mu" && sw.variable != "gamma")
            throw scenario_error("scenario: unknown sweep variable '" + sw.variable +
                                 "' (expected lambda, mu or gamma)");
        if (sw.scale != "geometric" && sw.scale != "linear")
            throw scenario_error("scenario: sweep.scale must be 'geometric' or 'linear'");
        if (sw.points < 1) throw scenario_error("scenario: sweep.points must be >= 1");
        if (sw.scale == "geometric" && !(sw.from > 0.0 && sw.to > 0.0))
            throw scenario_error("scenario: geometric sweep endpoints must be > 0");
    }
    if (s.mc) {
        parse_precoder_mode(s.mc->precoder_mode);
        if (s.mc->trials < 1) throw scenario_error("scenario: mc.trials must be >= 1");
        if (s.mc->fading_draws < 1) throw scenario_error("scenario: mc.fading_draws must be >= 1");
        if (!(s.mc->window_tail_fraction > 0.0 && s.mc->window_tail_fraction < 1.0))
            throw scenario_error("scenario: mc.window_tail_fraction must be in (0, 1)");
    }
}

inline ScenarioFile scenario_from_json(const nlohmann::json& j) {
    using detail::optional_field;
    using detail::require_field;
    using detail::require_section;
    ScenarioFile s;
    const auto& prop = require_section(j, "propagation");
    s.alpha = require_field<double>(prop, "propagation", "alpha");
    s.omega_db = require_field<double>(prop, "propagation", "omega_db");
    s.sigma2 = require_field<double>(prop, "propagation", "sigma2");
    s.epsilon = require_field<double>(prop, "propagation", "epsilon");
    const auto& hw = require_section(j, "hardware");
    s.eta = require_field<double>(hw, "hardware", "eta");
    s.coding_joule_per_gbit = require_field<double>(hw, "hardware", "A_joule_per_gbit");
    s.static_power_watt = require_field<double>(hw, "hardware", "C0_watt");
    s.ue_power_watt = require_field<double>(hw, "hardware", "C1_watt");
    s.antenna_power_watt = require_field<double>(hw, "hardware", "D0_watt");
    s.processing_joule_per_symbol = require_field<double>(hw, "hardware", "D1_joule_per_symbol");
    s.symbol_time = require_field<double>(hw, "hardware", "symbol_time");
    const auto& con = require_section(j, "constraint");
    s.gamma = require_field<double>(con, "constraint", "gamma");
    s.lambda = require_field<double>(con, "constraint", "lambda");
    s.lambda_max = require_field<double>(con, "constraint", "lambda_max");
    if (con.contains("mu")) s.mu = require_field<double>(con, "constraint", "mu");
    if (j.contains("sweep")) {
        const auto& sw = require_section(j, "sweep");
        SweepSpec spec;
        spec.variable = require_field<std::string>(sw, "sweep", "variable");
        spec.scale = optional_field<std::string>(sw, "sweep", "scale", "geometric");
        spec.from = require_field<double>(sw, "sweep", "from");
        spec.to = require_field<double>(sw, "sweep", "to");
        spec.points = require_field<int>(sw, "sweep", "points");
        spec.with_mc = optional_field<bool>(sw, "sweep", "with_mc", false);
        s.sweep = spec;
    }
    if (j.contains("mc")) {
        const auto& mc = require_section(j, "mc");
        McSpec spec;
        spec.trials = optional_field<long>(mc, "mc", "trials", spec.trials);
        spec.fading_draws = optional_field<int>(mc, "mc", "fading_draws", spec.fading_draws);
        spec.window_tail_fraction =
            optional_field<double>(mc, "mc", "window_tail_fraction", spec.window_tail_fraction);
        spec.master_seed =
            optional_field<std::uint64_t>(mc, "mc", "master_seed", spec.master_seed);
        spec.precoder_mode =
            optional_field<std::string>(mc, "mc", "precoder_mode", spec.precoder_mode);
        spec.workers = optional_field<int>(mc, "mc", "workers", spec.workers);
        spec.moment_draws = optional_field<long>(mc, "mc", "moment_draws", spec.moment_draws);
        s.mc = spec;
    }
    s.csv_precision = optional_field<int>(j, "scenario", "csv_precision", 9);
    validate_scenario(s);
    return s;
}

inline nlohmann::json scenario_to_json(const ScenarioFile& s) {
    nlohmann::json j;
    j["propagation"] = {{"alpha", s.alpha},
                        {"omega_db", s.omega_db},
                        {"sigma2", s.sigma2},
                        {"epsilon", s.epsilon}};
    j["hardware"] = {{"eta", s.eta},
                     {"A_joule_per_gbit", s.coding_joule_per_gbit},
                     {"C0_watt", s.static_power_watt},
                     {"C1_watt", s.ue_power_watt},
                     {"D0_watt", s.antenna_power_watt},
                     {"D1_joule_per_symbol", s.processing_joule_per_symbol},
                     {"symbol_time", s.symbol_time}};
    j["constraint"] = {{"gamma", s.gamma}, {"lambda", s.lambda}, {"lambda_max", s.lambda_max}};
    if (s.mu) j["constraint"]["mu"] = *s.mu;
    if (s.sweep) {
        j["sweep"] = {{"variable", s.sweep->variable}, {"scale", s.sweep->scale},
                      {"from", s.sweep->from},         {"to", s.sweep->to},
                      {"points", s.sweep->points},     {"with_mc", s.sweep->with_mc}};
    }
    if (s.mc) {
        j["mc"] = {{"trials", s.mc->trials},
                   {"fading_draws", s.mc->fading_draws},
                   {"window_tail_fraction", s.mc->window_tail_fraction},
                   {"master_seed", s.mc->master_seed},
                   {"precoder_mode", s.mc->precoder_mode},
                   {"workers", s.mc->workers},
                   {"moment_draws", s.mc->moment_draws}};
    }
    j["csv_precision"] = s.csv_precision;
    return j;
}

inline ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scenario_error("scenario: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw scenario_error(std::string("scenario: JSON parse error in '") + path +
                             "': " + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const ScenarioFile& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw scenario_error("scenario: cannot write '" + path + "'");
    out << scenario_to_json(s).dump(2) << '\n';
}

} // namespace eenet
