#include "dce/cavity_modes.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dce {

std::string_view to_string(Formulation f) {
    switch (f) {
        case Formulation::Canonical: return "canonical";
        case Formulation::InstantaneousMode: return "instantaneous";
    }
    return "unknown";
}

Formulation formulation_from_string(std::string_view name) {
    if (name == "canonical") return Formulation::Canonical;
    if (name == "instantaneous") return Formulation::InstantaneousMode;
    throw std::invalid_argument("unknown formulation '" + std::string(name) + "'");
}

RealFunction constant_function(double value) {
    return [value](double) { return value; };
}

RealFunction pulsed_surface_density(double peak, double drive_frequency) {
    return [peak, drive_frequency](double t) { return 0.5 * peak * (1.0 - std::cos(drive_frequency * t)); };
}

void SlabCavityConfig::validate() const {
    if (!(cavity_length > 0.0)) throw std::invalid_argument("cavity length must be positive");
    if (!(slab_thickness > 0.0 && slab_thickness < cavity_length))
        throw std::invalid_argument("slab thickness must satisfy 0 < delta < L");
    if (!(slab_position >= 0.0 && slab_position <= cavity_length - slab_thickness))
        throw std::invalid_argument("slab position must satisfy 0 <= l <= L - delta");
    if (!(epsilon0 > 0.0)) throw std::invalid_argument("epsilon0 must be positive");
    if (!epsilon1 || !surface_density)
        throw std::invalid_argument("epsilon1(t) and n_s(t) must be provided");
    if (!(epsilon1(0.0) > 0.0)) throw std::invalid_argument("epsilon1(0) must be positive");
    if (surface_density(0.0) != 0.0)
        throw std::invalid_argument("surface density must vanish at t = 0 (laser off)");
    if (!(wavenumber > 0.0)) throw std::invalid_argument("mode wavenumber must be positive");
    if (!(transverse_wavenumber >= 0.0))
        throw std::invalid_argument("transverse wavenumber must be non-negative");
}

double SlabCavityConfig::mode_frequency() const {
    return std::sqrt((wavenumber * wavenumber + transverse_wavenumber * transverse_wavenumber) / epsilon0);
}

double SlabCavityConfig::electron_density(double t) const {
    return surface_density(t) / slab_thickness;
}

double SlabCavityConfig::plasma_mass_sq(double t) const {
    return electron_density(t) * charge_sq_over_mass;
}

double slab_mode_weight(const SlabCavityConfig& cfg, SlabIntegral method) {
    const double k = cfg.wavenumber;
    const double l = cfg.slab_position;
    const double delta = cfg.slab_thickness;
    if (method == SlabIntegral::Quadrature) {
        auto f = [k](double x) {
            const double s = std::sin(k * x);
            return s * s;
        };
        const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, l, l + delta);
        return integral / delta;
    }
    if (l == 0.0) return (k * delta) * (k * delta) / 3.0;
    const double s = std::sin(k * l);
    return s * s;
}

PlasmaDisplacements plasma_displacements(const SlabCavityConfig& cfg, double t, SlabIntegral method) {
    if (t < 0.0) throw std::invalid_argument("time must be non-negative");
    const double eps_initial = cfg.epsilon1(0.0);
    const double eps_now = cfg.epsilon1(t);
    if (eps_now == 0.0) throw std::domain_error("singular slab permittivity epsilon1(t) = 0");
    const double n_e = cfg.electron_density(t);
    if (n_e < 0.0) throw std::domain_error("negative conduction-electron density");

    const double weight = slab_mode_weight(cfg, method);
    const double omega0 = cfg.mode_frequency();
    PlasmaDisplacements d;
    d.dielectric = -cfg.slab_thickness * (eps_initial / cfg.epsilon0) * (1.0 - eps_initial / eps_now) * weight;
    d.conductive =
        cfg.slab_thickness * (n_e * cfg.charge_sq_over_mass / (cfg.epsilon0 * omega0 * omega0)) * weight;
    return d;
}

CouplingSchedule coupling_schedule(const SlabCavityConfig& cfg, double drive_frequency, SlabIntegral method) {
    cfg.validate();
    const double omega0 = cfg.mode_frequency();
    const double length = cfg.cavity_length;

    CouplingSchedule s;
    s.omega0 = omega0;
    s.formulation = Formulation::Canonical;
    s.drive_frequency = drive_frequency;
    s.delta_omega = [cfg, omega0, length, method](double t) {
        const auto d = plasma_displacements(cfg, t, method);
        return omega0 * (d.dielectric + d.conductive) / length;
    };
    s.coupling = [cfg, omega0, length, method](double t) {
        const auto d = plasma_displacements(cfg, t, method);
        return Complex(0.0, -0.5) * omega0 * (-d.dielectric + d.conductive) / length;
    };
    return s;
}

CouplingSchedule to_instantaneous(const CouplingSchedule& schedule) {
    if (schedule.formulation != Formulation::Canonical)
        throw std::invalid_argument("to_instantaneous expects a canonical-formulation schedule");
    if (!(schedule.drive_frequency > 0.0))
        throw std::invalid_argument("to_instantaneous needs the drive frequency to fix the difference step");

    const double h = 1e-4 * (2.0 * kPi / schedule.drive_frequency);
    CouplingSchedule out = schedule;
    out.formulation = Formulation::InstantaneousMode;
    out.coupling = [g = schedule.coupling, dw = schedule.delta_omega, w0 = schedule.omega0, h](double t) {
        Complex derivative;
        if (t >= h) {
            derivative = (g(t + h) - g(t - h)) / (2.0 * h);
        } else {
            // one-sided second-order stencil; schedules need not exist before t = 0
            derivative = (-3.0 * g(t) + 4.0 * g(t + h) - g(t + 2.0 * h)) / (2.0 * h);
        }
        const double omega_bar = w0 + dw(t);
        return Complex(0.0, 1.0) / (2.0 * omega_bar) * derivative;
    };
    return out;
}

DispersionCheck dispersion_check(const SlabCavityConfig& cfg, double t) {
    cfg.validate();
    const double k = cfg.wavenumber;
    const double kp = cfg.transverse_wavenumber;
    DispersionCheck r;
    r.omega_bar_sq = (k * k + kp * kp) / cfg.epsilon0;
    r.kprime_sq = cfg.epsilon1(t) * r.omega_bar_sq - kp * kp - cfg.plasma_mass_sq(t);
    return r;
}

double max_relative_shift(const CouplingSchedule& schedule, double t0, double t1, int samples) {
    double worst = 0.0;
    const int n = std::max(samples, 2);
    for (int i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * i / (n - 1);
        worst = std::max(worst, std::abs(schedule.delta_omega(t)) / schedule.omega0);
    }
    return worst;
}

std::optional<std::string> validity_warning(const CouplingSchedule& schedule, double t0, double t1) {
    const double shift = max_relative_shift(schedule, t0, t1);
    if (shift <= kPerturbativeShiftLimit) return std::nullopt;
    std::ostringstream os;
    os << "|delta_omega|/omega0 reaches " << shift << " (> " << kPerturbativeShiftLimit
       << "); fixed-basis couplings are outside their perturbative range";
    return os.str();
}

}  // namespace dce
