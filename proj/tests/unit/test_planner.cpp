#include "dce/planner.hpp"

#include <doctest.h>

#include <cmath>

using namespace dce;

namespace {

PlanInput scaling_input(double energy_uJ, double r_omega = 0.1) {
    PlanInput in;
    in.target_n_gamma = 1e6;
    in.n_pulses = 300;
    in.laser_energy_uJ = energy_uJ;
    in.r_omega = r_omega;
    in.atoms = AtomFieldParams::make(3e3, 1000, kDefaultOmega0SI, kDefaultOmega0SI, 1.0 / 3e3,
                                     CavityLoss::from_quality(kDefaultOmega0SI, 5e3));
    return in;
}

// Conductive slab at the antinode of the lowest mode with peak delta_m / L = p.
SlabCavityConfig antinode_slab() {
    SlabCavityConfig c;
    c.cavity_length = 1.0;
    c.slab_position = 0.5;
    c.slab_thickness = 0.01;
    c.wavenumber = kPi;
    return c;
}

}  // namespace

TEST_SUITE("planner") {

TEST_CASE("required squeezing rate") {
    const double chi = required_squeezing_rate(1e6, 300);
    CHECK(chi == doctest::Approx(0.0081).epsilon(0.0001 / 0.0081));
    CHECK(chi == doctest::Approx(std::log(4e6) / (600.0 * kPi)).epsilon(1e-14));
    CHECK(required_squeezing_rate(0.25 * std::exp(2.0 * kPi), 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(required_squeezing_rate(1e6, 600) == doctest::Approx(0.5 * chi).epsilon(1e-14));
    CHECK_THROWS_AS(required_squeezing_rate(0.25, 10), std::domain_error);
    CHECK_THROWS_AS(required_squeezing_rate(0.1, 10), std::domain_error);
    CHECK_THROWS_AS(required_squeezing_rate(1e6, 0), std::invalid_argument);
}

TEST_CASE("required rate and predicted photon number are inverses") {
    for (double n : {1.0, 30.0, 1e4, 1e6, 1e9}) {
        for (int pulses : {10, 300, 2000}) {
            const double chi = required_squeezing_rate(n, pulses);
            CHECK(predicted_photon_number(chi, pulses) == doctest::Approx(n).epsilon(1e-10));
        }
    }
}

TEST_CASE("rate decreases with the pulse budget and grows with the target") {
    double previous = INFINITY;
    for (int pulses = 50; pulses <= 1000; pulses += 50) {
        const double chi = required_squeezing_rate(1e6, pulses);
        CHECK(chi < previous);
        previous = chi;
    }
    CHECK(required_squeezing_rate(1e7, 300) > required_squeezing_rate(1e6, 300));
}

TEST_CASE("laser scaling law") {
    auto p = power_to_chi(scaling_input(0.01));
    REQUIRE(p.scaling_law.has_value());
    CHECK(p.scaling_law->delta_omega == doctest::Approx(0.1));
    CHECK(p.scaling_law->chi == doctest::Approx(0.01));
    CHECK(p.scaling_law->mean_delta_omega == doctest::Approx(0.05));
    CHECK(p.warnings.empty());

    p = power_to_chi(scaling_input(0.0));
    CHECK(p.selected().delta_omega == 0.0);
    CHECK(p.selected().chi == 0.0);

    p = power_to_chi(scaling_input(0.02, 0.05));
    CHECK(p.selected().delta_omega == doctest::Approx(0.2));
    CHECK(p.selected().chi == doctest::Approx(0.01));
    CHECK_FALSE(p.warnings.empty());
}

TEST_CASE("scaling law is linear in the pulse energy") {
    const double base = power_to_chi(scaling_input(0.003)).selected().chi;
    for (double c : {0.5, 2.0, 3.7}) {
        CHECK(power_to_chi(scaling_input(0.003 * c)).selected().chi == doctest::Approx(c * base).epsilon(1e-14));
    }
}

TEST_CASE("first-principles chain for a conductive slab") {
    auto in = scaling_input(0.01);
    const double peak = 0.04;  // peak delta_m / L
    in.slab_cavity = antinode_slab();
    in.slab_peak_surface_density = peak * kPi * kPi;
    in.slab_reference_energy_uJ = 0.01;
    const auto p = power_to_chi(in);
    REQUIRE(p.first_principles.has_value());
    const auto& fp = *p.first_principles;
    CHECK(fp.delta_m_over_L == doctest::Approx(peak).epsilon(1e-12));
    CHECK(fp.delta_omega == doctest::Approx(peak).epsilon(1e-12));
    CHECK(fp.mean_delta_omega == doctest::Approx(peak / 2).epsilon(1e-12));
    // g = -(i/2) omega0 delta_m / L with (1 - cos) / 2 pulses: |2 <g>| = peak / 4
    CHECK(fp.chi == doctest::Approx(peak / 4).epsilon(1e-12));
    REQUIRE(p.chi_ratio.has_value());
    CHECK(*p.chi_ratio == doctest::Approx((peak / 4) / 0.01).epsilon(1e-12));
    CHECK(p.selected().path == ChiPath::FirstPrinciples);

    // pulse energy scales the density linearly
    in.laser_energy_uJ = 0.005;
    CHECK(power_to_chi(in).first_principles->chi == doctest::Approx(peak / 8).epsilon(1e-12));
}

TEST_CASE("without energy or slab there is nothing to plan") {
    auto in = scaling_input(0.01);
    in.laser_energy_uJ.reset();
    CHECK_THROWS_AS(power_to_chi(in), std::invalid_argument);
    CHECK_THROWS_AS(plan(in), std::invalid_argument);
}

TEST_CASE("nominal plan") {
    const auto r = plan(scaling_input(0.01));
    CHECK(r.required_chi_over_omega0 == doctest::Approx(0.0081).epsilon(0.0001 / 0.0081));
    CHECK(r.achieved_chi == doctest::Approx(0.01));
    CHECK(r.duration == doctest::Approx(300 * kPi));
    CHECK(r.predicted_n_gamma > 1e6);
    CHECK(r.predicted_n_gamma < 1e8);
    CHECK(r.threshold_ok);
    CHECK(r.resonance_Omega == doctest::Approx(2.1));
    CHECK(r.detected_n_gamma == 1e6);
    CHECK(r.detection.n_e_at_transit == doctest::Approx(500.0));
    CHECK_FALSE(r.notes.empty());
}

TEST_CASE("plan round trip hits the target") {
    auto in = scaling_input(0.0);
    const double chi = required_squeezing_rate(1e6, 300);
    in.laser_energy_uJ = chi / in.r_omega / in.scaling.shift_at_reference * in.scaling.reference_energy_uJ;
    const auto r = plan(in);
    CHECK(r.achieved_chi == doctest::Approx(chi).epsilon(1e-12));
    CHECK(std::abs(r.predicted_n_gamma / 1e6 - 1.0) < 0.01);
}

TEST_CASE("predicted photon number grows with energy and pulses") {
    double previous = 0.0;
    for (double w = 0.001; w < 0.012; w += 0.001) {
        const double n = plan(scaling_input(w)).predicted_n_gamma;
        CHECK(n > previous);
        previous = n;
    }
    auto in = scaling_input(0.005);
    in.n_pulses = 100;
    const double few = plan(in).predicted_n_gamma;
    in.n_pulses = 200;
    CHECK(plan(in).predicted_n_gamma > few);
}

TEST_CASE("weak drive in a lossy cavity misses the threshold") {
    auto in = scaling_input(0.001);  // chi = 0.001
    in.atoms.loss = CavityLoss::from_quality(in.atoms.omega0, 100.0);
    const auto r = plan(in);
    CHECK_FALSE(r.threshold_ok);
    CHECK(r.predicted_n_gamma > 0.25);
}

TEST_CASE("a target below the photon requirement fails detection") {
    auto in = scaling_input(0.01);
    in.target_n_gamma = 1e5;  // (kappa / Gamma_tr)^2 N^2 = 1e6
    const auto r = plan(in);
    CHECK(r.detected_n_gamma == 1e5);
    bool seen = false;
    for (const auto& c : r.detection.conditions) {
        if (c.name == "photon_requirement") {
            seen = true;
            CHECK_FALSE(c.pass);
        }
    }
    CHECK(seen);
}

TEST_CASE("detection uses no more photons than are created") {
    auto in = scaling_input(0.005);
    in.target_n_gamma = 1e9;
    const auto r = plan(in);
    CHECK(r.detected_n_gamma == r.predicted_n_gamma);
    CHECK(r.detected_n_gamma < 1e9);
}

TEST_CASE("optional simulation of the achieved drive") {
    auto in = scaling_input(0.01);
    in.n_pulses = 50;
    in.simulate = true;
    const auto r = plan(in);
    REQUIRE(r.simulated_n_gamma.has_value());
    CHECK(*r.simulated_n_gamma > 1.0);
}

TEST_CASE("input validation") {
    auto in = scaling_input(0.01);
    in.r_omega = 0.0;
    CHECK_THROWS_AS(plan(in), std::invalid_argument);
    in = scaling_input(-0.01);
    CHECK_THROWS_AS(plan(in), std::invalid_argument);
    in = scaling_input(0.01);
    in.target_n_gamma = 0.0;
    CHECK_THROWS_AS(plan(in), std::invalid_argument);
}

}  // TEST_SUITE
