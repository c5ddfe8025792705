#pragma once

// Plasma-mirror cavity: from slab/material parameters to the time-dependent
// frequency shift and squeezing coupling of one cavity mode.
//
// Natural units (hbar = c = 1). The cavity length fixes the frequency scale.
// All function handles must be side-effect free; every type here is
// immutable after construction and safe to share across threads.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace dce {

using Complex = std::complex<double>;
using RealFunction = std::function<double(double)>;
using ComplexFunction = std::function<Complex(double)>;

inline constexpr double kPi = 3.14159265358979323846;

// Beyond this |delta_omega| / omega0 the fixed-basis couplings stop being
// trustworthy; evaluations past it are flagged, not rejected.
inline constexpr double kPerturbativeShiftLimit = 0.1;

enum class Formulation { Canonical, InstantaneousMode };

std::string_view to_string(Formulation f);
Formulation formulation_from_string(std::string_view name);

RealFunction constant_function(double value);

// Laser-pulse density profile n_s(t) = peak (1 - cos Omega t) / 2.
RealFunction pulsed_surface_density(double peak, double drive_frequency);

// Semiconductor slab occupying [l, l + delta] inside a cavity [0, L] with
// Dirichlet walls. The slab permittivity and the conduction-electron surface
// density n_s = n_e * delta are driven by the laser.
struct SlabCavityConfig {
    double cavity_length = 1.0;
    double slab_position = 0.5;
    double slab_thickness = 0.01;
    double epsilon0 = 1.0;
    RealFunction epsilon1 = constant_function(1.0);
    RealFunction surface_density = constant_function(0.0);
    // e^2 / m_*, so that m_p^2(t) = n_e(t) * charge_sq_over_mass.
    double charge_sq_over_mass = 1.0;
    double wavenumber = kPi;
    double transverse_wavenumber = 0.0;

    // Throws std::invalid_argument on a geometry/material violation.
    void validate() const;

    // omega^0_k from (k^2 + k_perp^2) / epsilon0.
    double mode_frequency() const;
    double electron_density(double t) const;
    double plasma_mass_sq(double t) const;
};

// Weight of the mode function over the slab, per unit thickness.
// ThinSlab uses sin^2(k l) (or (k delta)^2 / 3 for a slab on the wall);
// Quadrature integrates sin^2(k x) over the slab numerically.
enum class SlabIntegral { ThinSlab, Quadrature };

double slab_mode_weight(const SlabCavityConfig& cfg, SlabIntegral method = SlabIntegral::ThinSlab);

struct PlasmaDisplacements {
    double dielectric = 0.0;  // delta_epsilon
    double conductive = 0.0;  // delta_m
};

// Effective wall displacements produced by the slab at time t.
// Throws std::domain_error for epsilon1(t) == 0 or a negative electron density.
PlasmaDisplacements plasma_displacements(const SlabCavityConfig& cfg, double t,
                                         SlabIntegral method = SlabIntegral::ThinSlab);

// Diagonal Hamiltonian coefficients of one mode: omega(t) = omega0 + delta_omega(t)
// and the squeezing coupling g(t).
struct CouplingSchedule {
    double omega0 = 1.0;
    RealFunction delta_omega = constant_function(0.0);
    ComplexFunction coupling = [](double) { return Complex{}; };
    Formulation formulation = Formulation::Canonical;
    // Drive (laser pulse) angular frequency; 0 when the schedule is not periodic.
    double drive_frequency = 0.0;

    double frequency(double t) const { return omega0 + delta_omega(t); }
};

// Canonical-formulation schedule of the slab's mode:
//   delta_omega(t) = omega0 (delta_eps + delta_m) / L
//   g(t)           = -(i/2) omega0 (-delta_eps + delta_m) / L
CouplingSchedule coupling_schedule(const SlabCavityConfig& cfg, double drive_frequency = 0.0,
                                   SlabIntegral method = SlabIntegral::ThinSlab);

// Instantaneous-mode counterpart: delta_omega unchanged and
// g_bar(t) = [i / (2 omega_bar(t))] dg/dt, with dg/dt from a centered
// difference of step 1e-4 * (2 pi / Omega). Requires a Canonical schedule
// with a positive drive frequency (std::invalid_argument otherwise).
CouplingSchedule to_instantaneous(const CouplingSchedule& schedule);

struct DispersionCheck {
    double omega_bar_sq = 0.0;
    double kprime_sq = 0.0;  // negative in the evanescent regime
};

DispersionCheck dispersion_check(const SlabCavityConfig& cfg, double t);

// Largest |delta_omega(t)| / omega0 over `samples` uniform points of [t0, t1].
double max_relative_shift(const CouplingSchedule& schedule, double t0, double t1, int samples = 512);

// Human-readable warning when the schedule leaves the perturbative regime.
std::optional<std::string> validity_warning(const CouplingSchedule& schedule, double t0, double t1);

}  // namespace dce
