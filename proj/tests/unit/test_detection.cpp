#include "dce/detection.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

using namespace dce;

namespace {

// omega0 = 1 units with kbar given directly.
AtomFieldParams relative_params(double kbar, double delta_e, int n_ryd = 1000, double quality = INFINITY) {
    return AtomFieldParams::make(kbar / std::sqrt(double(n_ryd)), n_ryd, 1.0, 1.0 + delta_e, 1e6,
                                 CavityLoss::from_quality(1.0, quality));
}

AtomFieldParams nominal_params(double quality = 5e3) {
    return AtomFieldParams::make(3e3, 1000, kDefaultOmega0SI, kDefaultOmega0SI, 1.0 / 3e3,
                                 CavityLoss::from_quality(kDefaultOmega0SI, quality));
}

// Linearized field-atom exchange in the frame rotating at omega0:
// d/dt (a, D) = -i [[0, kbar], [kbar, Delta_e]] (a, D), a(0) = sqrt(n), D(0) = 0.
// Returns |D|^2 sampled every `dt_out`.
std::vector<double> linearized_excitation(double kbar, double delta_e, double n, double t_end, double dt_out) {
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    auto f = [&](const std::array<C, 2>& y) {
        return std::array<C, 2>{-i * kbar * y[1], -i * (kbar * y[0] + delta_e * y[1])};
    };
    std::array<C, 2> y{std::sqrt(n), 0.0};
    const int sub = 20;
    const double h = dt_out / sub;
    std::vector<double> out{0.0};
    for (double t = 0.0; t < t_end - 1e-9; t += dt_out) {
        for (int s = 0; s < sub; ++s) {
            const auto k1 = f(y);
            const auto k2 = f({y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
            const auto k3 = f({y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
            const auto k4 = f({y[0] + h * k3[0], y[1] + h * k3[1]});
            for (int j = 0; j < 2; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        out.push_back(std::norm(y[1]));
    }
    return out;
}

}  // namespace

TEST_SUITE("detection") {

TEST_CASE("perturbative excitation reference values") {
    const auto p = relative_params(1e-5, 1e-3);
    CHECK(excitation_linear(p, 1e6, 0.0).n_excited == 0.0);
    // Delta_e t = pi: n (2 kbar / Delta_e)^2
    const auto e = excitation_linear(p, 1e6, kPi / 1e-3);
    CHECK(e.n_excited == doctest::Approx(400.0).epsilon(1e-12));
    CHECK_FALSE(e.linear_regime);

    // resonant atoms reach N_Ryd at kbar t = sqrt(N_Ryd / n)
    const auto r = relative_params(1e-5, 0.0);
    const double t = std::sqrt(1000.0 / 1e6) / 1e-5;
    CHECK(excitation_linear(r, 1e6, t).n_excited == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("excitation is even in the atomic detuning") {
    for (double d : {1e-4, 1e-3, 3e-3}) {
        for (double t : {10.0, 700.0, 2500.0}) {
            CHECK(excitation_linear(relative_params(1e-5, d), 1e6, t).n_excited ==
                  doctest::Approx(excitation_linear(relative_params(1e-5, -d), 1e6, t).n_excited).epsilon(1e-12));
        }
    }
}

TEST_CASE("series and closed form meet at the switch point") {
    const double d = 1e-3;
    const auto p = relative_params(1e-5, d);
    const double t = 1e-4 / d;
    const double below = excitation_linear(p, 1e6, t * (1 - 1e-9)).n_excited;
    const double above = excitation_linear(p, 1e6, t * (1 + 1e-9)).n_excited;
    CHECK(below == doctest::Approx(above).epsilon(1e-6));
}

TEST_CASE("perturbative excitation tracks the linearized dynamics") {
    const double kbar = 1e-5, n = 1e6;
    for (double d : {0.0, 1e-3}) {
        const auto p = relative_params(kbar, d);
        const double dt = 5.0;
        const auto oracle = linearized_excitation(kbar, d, n, 1500.0, dt);
        int compared = 0;
        for (std::size_t j = 1; j < oracle.size(); ++j) {
            const auto e = excitation_linear(p, n, j * dt);
            if (!e.linear_regime) break;
            CHECK(e.n_excited == doctest::Approx(oracle[j]).epsilon(0.05));
            ++compared;
        }
        CHECK(compared > 50);
    }
}

TEST_CASE("Rabi rate regimes") {
    const auto p = nominal_params();
    auto r = rabi_rate(p, 1e6);
    CHECK(r.regime == PhotonRegime::ManyPhotons);
    CHECK(r.rate == doctest::Approx(3e6));
    r = rabi_rate(p, 10.0);
    CHECK(r.regime == PhotonRegime::FewPhotons);
    CHECK(r.rate == doctest::Approx(3e3 * std::sqrt(1000.0)));
    // the two expressions coincide at n = N_Ryd
    CHECK(rabi_rate(p, 1000.0).rate == doctest::Approx(p.collective_coupling()).epsilon(1e-15));
    CHECK_THROWS_AS(rabi_rate(p, -1.0), std::invalid_argument);
    CHECK(feasibility(p, 0.0).rabi_rate == 0.0);
}

TEST_CASE("cavity-induced relaxation branches") {
    const double gamma = 1e-3;
    auto p = relative_params(1e-3, 0.0, 1000, 1.0 / gamma);
    auto r = relaxation_rate(p);
    CHECK(r.branch == RelaxationBranch::Saturated);
    CHECK(r.rate == doctest::Approx(5e-4));

    p = relative_params(gamma / 8.0, 0.0, 1000, 1.0 / gamma);
    r = relaxation_rate(p);
    CHECK(r.branch == RelaxationBranch::Quadratic);
    CHECK(r.rate == doctest::Approx(gamma / 16.0));

    // at kbar = Gamma / 4 the rate jumps from Gamma / 4 (quadratic limit) to Gamma / 2
    p = relative_params(gamma / 4.0 * (1 - 1e-9), 0.0, 1000, 1.0 / gamma);
    CHECK(relaxation_rate(p).rate == doctest::Approx(gamma / 4.0).epsilon(1e-6));
    p = relative_params(gamma / 4.0, 0.0, 1000, 1.0 / gamma);
    CHECK(relaxation_rate(p).rate == doctest::Approx(gamma / 2.0));

    CHECK(relaxation_rate(relative_params(1e-3, 0.0)).branch == RelaxationBranch::Lossless);
    CHECK(relaxation_rate(relative_params(1e-3, 0.0)).rate == 0.0);
}

TEST_CASE("relaxation rate never decreases with the collective coupling") {
    double previous = 0.0;
    for (int i = 1; i <= 400; ++i) {
        const double kbar = 1e-3 * i / 200.0;
        const double rate = relaxation_rate(relative_params(kbar, 0.0, 1000, 1e3)).rate;
        CHECK(rate >= previous);
        previous = rate;
    }
}

TEST_CASE("quality-factor window at the reference point") {
    const auto rep = feasibility(nominal_params(), 1e6);
    REQUIRE(rep.low_q_window.has_value());
    CHECK(rep.low_q_window->q_min == doctest::Approx(5e3).epsilon(0.1));
    CHECK(rep.low_q_window->q_max == doctest::Approx(5e3).epsilon(0.1));
    CHECK(rep.high_q_window.q_min == doctest::Approx(5e6).epsilon(0.1));
    CHECK(rep.relax_branch == RelaxationBranch::Quadratic);
    CHECK(rep.branch_consistent);
    CHECK(rep.low_window_consistent);
    CHECK(rep.high_window_consistent);
    CHECK(rep.n_e_at_transit == doctest::Approx(500.0));
}

TEST_CASE("no photons: nothing to detect") {
    const auto rep = feasibility(nominal_params(), 0.0);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.n_e_at_transit == 0.0);
    for (const auto& c : rep.conditions) {
        if (c.name == "rabi_over_loss" || c.name == "rabi_over_transit" || c.name == "photon_requirement" ||
            c.name == "q_lower_bound")
            CHECK_FALSE(c.pass);
    }
}

TEST_CASE("photon requirement") {
    const auto p = nominal_params();
    auto find = [](const DetectionReport& r, const std::string& name) {
        for (const auto& c : r.conditions)
            if (c.name == name) return c;
        FAIL("missing condition " << name);
        return Condition{};
    };
    CHECK(find(feasibility(p, 1e6), "photon_requirement").pass);
    CHECK_FALSE(find(feasibility(p, 1e5), "photon_requirement").pass);
    CHECK(find(feasibility(p, 1e5, 10.0), "photon_requirement").pass);
}

TEST_CASE("report invariants over random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double kappa = std::pow(10.0, 2.0 + 3.0 * u(rng));
        const int n_ryd = 1 + static_cast<int>(5000 * u(rng));
        const double q = std::pow(10.0, 2.0 + 6.0 * u(rng));
        const double transit = std::pow(10.0, -5.0 + 3.0 * u(rng));
        const auto p = AtomFieldParams::make(kappa, n_ryd, kDefaultOmega0SI, kDefaultOmega0SI, transit,
                                             CavityLoss::from_quality(kDefaultOmega0SI, q));
        const double n = std::pow(10.0, 8.0 * u(rng));
        const double slack = 0.5 + 5.0 * u(rng);
        const auto rep = feasibility(p, n, slack);
        CHECK(rep.branch_consistent);
        for (const auto& c : rep.conditions) CHECK(c.pass == (c.slack * c.lhs >= c.rhs));
        if (rep.low_q_window) CHECK(rep.low_q_window->q_min <= rep.low_q_window->q_max);
        CHECK(rep.n_e_at_transit >= 0.0);
        CHECK(rep.n_e_at_transit <= n_ryd);
    }
}

TEST_CASE("excitation while photons are created") {
    const auto p = relative_params(1e-5, 0.0);
    const auto e = excitation_during_dce(p, {0.0, 1e10, 1e20, -5.0});
    CHECK(e[0] == 0.0);
    CHECK(e[1] == doctest::Approx(1.0));
    CHECK(e[2] == 1000.0);
    CHECK(e[3] == 0.0);
}

TEST_CASE("coupling from the atomic dipole") {
    CHECK(coupling_from_dipole(2.0, 8.0, 1.0, 1.0, 0.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(coupling_from_dipole(1.0, 1.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(AtomFieldParams::make(0.0, 10, 1.0, 1.0, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(AtomFieldParams::make(1.0, 0, 1.0, 1.0, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(AtomFieldParams::make(1.0, 10, 1.0, 1.0, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(feasibility(nominal_params(), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(feasibility(nominal_params(), 1.0, 0.0), std::invalid_argument);
    CHECK(AtomFieldParams::make(1.0, 10, 1.0, 1.25, 1.0, {}).delta_e == doctest::Approx(0.25));
}

}  // TEST_SUITE
