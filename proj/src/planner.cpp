#include "dce/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dce {

void PlanInput::validate() const {
    if (!(target_n_gamma > 0.0)) throw std::invalid_argument("target photon number must be positive");
    if (n_pulses < 1) throw std::invalid_argument("pulse budget must be at least 1");
    if (laser_energy_uJ && !(*laser_energy_uJ >= 0.0))
        throw std::invalid_argument("laser pulse energy must be non-negative");
    if (!(r_omega > 0.0 && r_omega <= 1.0)) throw std::invalid_argument("r_Omega must lie in (0, 1]");
    if (!(scaling.reference_energy_uJ > 0.0)) throw std::invalid_argument("reference pulse energy must be positive");
    if (slab_cavity && !(slab_reference_energy_uJ > 0.0))
        throw std::invalid_argument("slab reference pulse energy must be positive");
    if (slab_cavity && !(slab_peak_surface_density >= 0.0))
        throw std::invalid_argument("slab peak surface density must be non-negative");
    if (!(slack > 0.0)) throw std::invalid_argument("slack factor must be positive");
    atoms.validate();
}

std::string_view to_string(ChiPath p) { return p == ChiPath::ScalingLaw ? "scaling-law" : "first-principles"; }

double required_squeezing_rate(double target_n_gamma, int n_pulses) {
    if (n_pulses < 1) throw std::invalid_argument("pulse budget must be at least 1");
    if (!(target_n_gamma > 0.25)) throw std::domain_error("targets of at most 1/4 photon need no squeezing");
    return std::log(4.0 * target_n_gamma) / (2.0 * kPi * n_pulses);
}

double planning_duration(int n_pulses) { return n_pulses * kPi; }

double predicted_photon_number(double chi_over_omega0, int n_pulses) {
    return 0.25 * std::exp(2.0 * chi_over_omega0 * planning_duration(n_pulses));
}

namespace {

ChiChain first_principles_chain(const PlanInput& input, double energy_factor) {
    SlabCavityConfig cfg = *input.slab_cavity;
    const double omega0 = cfg.mode_frequency();
    // Omega ~ 2 omega0 for the profile; the averages below do not depend on it.
    const double drive = 2.0 * omega0;
    cfg.surface_density = pulsed_surface_density(energy_factor * input.slab_peak_surface_density, drive);
    const CouplingSchedule schedule = coupling_schedule(cfg, drive, input.slab_integral);
    const DriveAverages avg = extract_drive(schedule, drive);

    const double half_period = kPi / drive;  // peak of (1 - cos)
    const PlasmaDisplacements peak_disp = plasma_displacements(cfg, half_period, input.slab_integral);

    ChiChain c;
    c.path = ChiPath::FirstPrinciples;
    c.delta_m_over_L = peak_disp.conductive / cfg.cavity_length;
    c.delta_omega = std::abs(schedule.delta_omega(half_period)) / omega0;
    c.mean_delta_omega = avg.mean_delta_omega / omega0;
    c.chi = 2.0 * std::abs(avg.g_fourier) / omega0;
    return c;
}

}  // namespace

PowerToChi power_to_chi(const PlanInput& input) {
    input.validate();
    if (!input.laser_energy_uJ && !input.slab_cavity)
        throw std::invalid_argument("configuration needs a laser pulse energy or a slab description");

    PowerToChi out;
    if (input.laser_energy_uJ) {
        ChiChain c;
        c.path = ChiPath::ScalingLaw;
        c.delta_omega = input.scaling.shift_at_reference * (*input.laser_energy_uJ / input.scaling.reference_energy_uJ);
        c.delta_m_over_L = c.delta_omega;
        // (1 - cos) pulses average to half their peak
        c.mean_delta_omega = 0.5 * c.delta_omega;
        c.chi = input.r_omega * c.delta_omega;
        out.scaling_law = c;
    }
    if (input.slab_cavity) {
        const double factor =
            input.laser_energy_uJ ? *input.laser_energy_uJ / input.slab_reference_energy_uJ : 1.0;
        out.first_principles = first_principles_chain(input, factor);
    }
    if (out.scaling_law && out.first_principles && out.scaling_law->chi != 0.0)
        out.chi_ratio = out.first_principles->chi / out.scaling_law->chi;

    for (const ChiChain* c : {out.scaling_law ? &*out.scaling_law : nullptr,
                              out.first_principles ? &*out.first_principles : nullptr}) {
        if (c && c->delta_omega > kPerturbativeShiftLimit) {
            std::ostringstream os;
            os << to_string(c->path) << ": delta_omega/omega0 = " << c->delta_omega << " exceeds "
               << kPerturbativeShiftLimit << "; fixed-basis couplings are outside their perturbative range";
            out.warnings.push_back(os.str());
        }
    }
    return out;
}

PlanReport plan(const PlanInput& input) {
    input.validate();
    PlanReport r;
    r.target_n_gamma = input.target_n_gamma;
    r.n_pulses = input.n_pulses;
    r.required_chi_over_omega0 = required_squeezing_rate(input.target_n_gamma, input.n_pulses);
    r.chain = power_to_chi(input);

    const ChiChain& c = r.chain.selected();
    r.achieved_delta_m_over_L = c.delta_m_over_L;
    r.achieved_delta_omega = c.delta_omega;
    r.achieved_mean_delta_omega = c.mean_delta_omega;
    r.achieved_chi = c.chi;
    r.duration = planning_duration(input.n_pulses);
    r.predicted_n_gamma = predicted_photon_number(c.chi, input.n_pulses);
    r.resonance_Omega = resonance_frequency(1.0, c.mean_delta_omega);

    const DriveSpec drive =
        DriveSpec::from_detuning(1.0, c.mean_delta_omega, Complex(0.0, 0.5 * c.chi), 0.0, input.n_pulses);
    const CavityLoss loss = CavityLoss::from_quality(1.0, input.atoms.loss.Q);
    r.threshold_ok = dce_threshold(drive, loss);

    if (input.simulate) {
        const Trajectory traj = integrate(drive_schedule(drive), drive.duration());
        r.simulated_n_gamma = photon_number(traj.final_state());
    }

    // Only photons that are actually created can be detected.
    r.detected_n_gamma = std::min(input.target_n_gamma, r.predicted_n_gamma);
    r.detection = feasibility(input.atoms, r.detected_n_gamma, input.slack);

    r.notes = r.chain.warnings;
    if (!r.threshold_ok) r.notes.push_back("chi does not exceed Gamma/2: no net growth against cavity loss");
    r.notes.push_back("after each round the field relaxes to the vacuum; allow t >~ 10 ms before the next round");
    return r;
}

}  // namespace dce
