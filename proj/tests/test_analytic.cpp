#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "eenet/analytic.hpp"
#include "eenet/optimizer.hpp"

#include "support/fixtures.hpp"
#include "support/mpfr_oracle.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace eenet;

TEST_CASE("feasibility bound on the SE target") {
    // frozen from a 50-digit evaluation of -2 log2(0.05)
    CHECK_THAT(feasibility_gamma_bound(0.05), WithinRel(8.6438561897747247, 1e-12));
    CHECK_THAT(feasibility_gamma_bound(0.5), WithinRel(2.0, 1e-14));
    CHECK(std::isinf(feasibility_gamma_bound(0.0)));
    CHECK(feasibility_gamma_bound(0.9999) > 0.0);
    CHECK(feasibility_gamma_bound(0.9999) < 3e-4);
    CHECK_THROWS_AS(feasibility_gamma_bound(1.0), std::invalid_argument);

    CHECK(required_sinr(0.0, 0.3) == 0.0);
    CHECK_THROWS_AS(required_sinr(9.0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(required_sinr(-1.0, 0.05), std::invalid_argument);
}

TEST_CASE("nearest-point distance moments") {
    CHECK_THAT(mean_distance_moment(1.0 / std::numbers::pi, 2.0), WithinRel(1.0, 1e-14));
    CHECK_THAT(mean_distance_moment(1e-4, 2.0), WithinRel(3183.0988618379067, 1e-12));
    // frozen from a 50-digit evaluation at nu = alpha = 3.76
    CHECK_THAT(mean_distance_moment(1e-4, 3.76), WithinRel(6911171.6577329662, 1e-12));
    CHECK_THAT(oracle::distance_moment(1e-4, 3.76).value(),
               WithinRel(mean_distance_moment(1e-4, 3.76), 1e-13));
    CHECK_THROWS_AS(mean_distance_moment(1e-4, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(mean_distance_moment(0.0, 2.0), std::invalid_argument);
}

TEST_CASE("conditional interference mean beyond the serving distance") {
    CHECK_THAT(conditional_interference_mean(1.0 / (2.0 * std::numbers::pi), 4.0, 1.0),
               WithinRel(0.5, 1e-14));
    CHECK(conditional_interference_mean(1e-4, 3.76, 1e9) < 1e-12);
    CHECK_THROWS_AS(conditional_interference_mean(1e-4, 2.0, 50.0), std::invalid_argument);
}

TEST_CASE("SE lower bound against the high-precision oracle") {
    const auto p = fixtures::propagation();
    const auto q = fixtures::oracle_params();

    DesignPoint d{1e-12, 1e-4, 100, 10};
    // frozen from a 50-digit evaluation of the bound at these inputs
    CHECK_THAT(se_lower_bound(p, d), WithinRel(0.47517851154358752, 1e-12));
    CHECK_THAT(se_lower_bound(p, d), WithinRel(oracle::se_bound(q, 1e-4, 100, 10, 1e-12).value(), 1e-13));

    SECTION("reproduces the SE target at rho*") {
        const auto rho = rho_star(p, 3.0, 1e-4, 193, 21);
        REQUIRE(rho.has_value());
        CHECK_THAT(se_lower_bound(p, {*rho, 1e-4, 193, 21}), WithinRel(3.0, 1e-12));
    }

    SECTION("noise-free high-power limit") {
        PropagationParams clean = p;
        clean.impairment_level = 0.0;
        DesignPoint high{1e30, 1e-4, 64, 8};
        const double limit = std::log2(1.0 + (64.0 - 8.0) * (clean.pathloss_exponent - 2.0) /
                                                 (2.0 * 8.0));
        CHECK_THAT(se_lower_bound(clean, high), WithinRel(limit, 1e-6));
    }

    SECTION("invalid parameters") {
        CHECK_THROWS_AS(se_lower_bound(p, {1e-9, 1e-4, 10, 10}), std::invalid_argument);
        CHECK_THROWS_AS(se_lower_bound(p, {0.0, 1e-4, 10, 5}), std::invalid_argument);
    }
}

TEST_CASE("SE lower bound monotonicity in rho, lambda and antennas") {
    const auto p = fixtures::propagation();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double rho = std::pow(10.0, -14.0 + 6.0 * unit(rng));
        const double lambda = std::pow(10.0, -6.0 + 3.0 * unit(rng));
        const int k = 1 + static_cast<int>(unit(rng) * 20);
        const int m = k + 1 + static_cast<int>(unit(rng) * 200);
        const DesignPoint base{rho, lambda, m, k};
        CHECK(se_lower_bound(p, {rho * 1.7, lambda, m, k}) > se_lower_bound(p, base));
        CHECK(se_lower_bound(p, {rho, lambda * 2.3, m, k}) > se_lower_bound(p, base));
        CHECK(se_lower_bound(p, {rho, lambda, m + 7, k}) > se_lower_bound(p, base));
    }
}

TEST_CASE("area spectral efficiency") {
    CHECK_THAT(area_spectral_efficiency(1e-4, 20, 3.0), WithinRel(6e-3, 1e-14));
    CHECK_THAT(area_spectral_efficiency(1e-4, 21, 3.0), WithinRel(6.3e-3, 1e-14));
    CHECK(area_spectral_efficiency(1e-30, 5, 2.0) < 1e-28);
    CHECK_THROWS_AS(area_spectral_efficiency(0.0, 5, 2.0), std::invalid_argument);
}

TEST_CASE("area energy consumption") {
    const auto h = fixtures::hardware();

    SECTION("circuit-only design") {
        HardwareProfile no_coding = h;
        no_coding.coding_energy_per_bit = 0.0;
        const DesignPoint d{0.0, 1e-4, 2, 1};
        const double expected =
            1e-4 * (no_coding.static_energy + no_coding.ue_circuit_energy +
                    2.0 * no_coding.antenna_circuit_energy + 2.0 * no_coding.processing_energy);
        CHECK_THAT(area_energy_consumption(no_coding, d, 1.5), WithinRel(expected, 1e-14));
    }

    SECTION("rho sweep against the high-precision oracle") {
        const auto q = fixtures::oracle_params();
        for (double rho = 1e-12; rho < 1e-6; rho *= 10.0) {
            const DesignPoint d{rho, 1e-4, 10, 1};
            const oracle::Real expected =
                oracle::area_energy_consumption(q, 1e-4, 10, 1, rho, 2.5);
            CHECK_THAT(area_energy_consumption(h, d, 2.5), WithinRel(expected.value(), 1e-13));
        }
    }
}

TEST_CASE("energy efficiency") {
    const auto p = fixtures::propagation();
    const auto h = fixtures::hardware();

    SECTION("AP density cancels for a fixed SE value") {
        const double se = 2.7;
        const DesignPoint base{3e-10, 1e-4, 50, 5};
        const double ref = area_spectral_efficiency(base.ap_density, base.users, se) /
                           area_energy_consumption(h, base, se);
        for (double lambda : {1e-6, 1e-5, 1e-3, 1e-2}) {
            DesignPoint d = base;
            d.ap_density = lambda;
            const double ee = area_spectral_efficiency(d.ap_density, d.users, se) /
                              area_energy_consumption(h, d, se);
            CHECK_THAT(ee, WithinRel(ref, 1e-12));
        }
    }

    SECTION("reference design point") {
        const auto rho = rho_star(p, 3.0, 1e-4, 193, 21);
        REQUIRE(rho.has_value());
        const DesignPoint d{*rho, 1e-4, 193, 21};
        // frozen from a 50-digit evaluation
        CHECK_THAT(energy_efficiency(p, h, d), WithinRel(5719936.4509997336, 1e-9));
        CHECK_THAT(energy_efficiency(p, h, d),
                   WithinRel(oracle::energy_efficiency_at_target(fixtures::oracle_params(), 3.0,
                                                                 1e-4, 193, 21)
                                 .value(),
                             1e-12));
        // dimension audit: bit/Joule at the megabit scale for these inputs
        CHECK(energy_efficiency(p, h, d) > 1e6);
        CHECK(energy_efficiency(p, h, d) < 1e7);
    }

    SECTION("diverging circuit energy sends EE to zero") {
        HardwareProfile expensive = h;
        expensive.antenna_circuit_energy = 1e6;
        const DesignPoint d{1e-9, 1e-4, 193, 21};
        CHECK(energy_efficiency(p, expensive, d) < 1e-3);
    }
}

TEST_CASE("EE density limit") {
    const auto p = fixtures::propagation();
    const auto h = fixtures::hardware();
    // frozen from a 50-digit evaluation at (M, K, gamma) = (193, 21, 3)
    CHECK_THAT(ee_density_limit(h, 193, 21, 3.0), WithinRel(5748323.0864151797, 1e-12));
    CHECK(ee_density_limit(h, 193, 21, 0.0) == 0.0);

    SECTION("collapses to the coding cost when circuits are free") {
        HardwareProfile coding_only{};
        coding_only.amplifier_efficiency = 1.0;
        coding_only.symbol_time = 1.0;
        coding_only.coding_energy_per_bit = 1.15e-9;
        CHECK_THAT(ee_density_limit(coding_only, 2, 1, 4.0), WithinRel(1.0 / 1.15e-9, 1e-12));
    }

    SECTION("EE approaches the limit from below as the density grows") {
        const double limit = ee_density_limit(h, 193, 21, 3.0);
        double previous = 0.0;
        for (double lambda = 1e-7; lambda < 0.2; lambda *= 10.0) {
            const auto rho = rho_star(p, 3.0, lambda, 193, 21);
            REQUIRE(rho.has_value());
            const double ee = energy_efficiency(p, h, {*rho, lambda, 193, 21});
            CHECK(ee < limit);
            CHECK(ee > previous);
            previous = ee;
        }
        CHECK(previous > 0.99 * limit);
    }
}

TEST_CASE("rho* inversion reproduces the target SE on random feasible instances") {
    const auto p = fixtures::propagation();
    for (const auto& inst : fixtures::random_feasible_instances(100, 7)) {
        const auto rho = rho_star(p, inst.gamma, inst.lambda, inst.antennas, inst.users);
        REQUIRE(rho.has_value());
        const double se = se_lower_bound(p, {*rho, inst.lambda, inst.antennas, inst.users});
        CHECK_THAT(se, WithinRel(inst.gamma, 1e-9));
    }
}
