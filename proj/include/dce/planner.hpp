#pragma once

// Experiment planning: photon target and pulse budget to squeezing rate,
// laser pulse energy to frequency shift and squeezing rate, and the
// detection budget for the resulting photon number.
//
// Frequencies are omega0-relative here; the detection part keeps its SI rates.

#include "dce/cavity_modes.hpp"
#include "dce/detection.hpp"
#include "dce/squeezing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dce {

// delta_omega / omega0 = shift_at_reference * (W / reference_energy)
// chi / omega0 = r_Omega * delta_omega / omega0
struct LaserScaling {
    double reference_energy_uJ = 0.01;
    double shift_at_reference = 0.1;
};

struct PlanInput {
    double target_n_gamma = 1e6;
    int n_pulses = 300;
    std::optional<double> laser_energy_uJ;  // scaling-law path
    double r_omega = 0.1;
    LaserScaling scaling;
    // First-principles path. The slab's surface_density is replaced by the
    // pulse profile n_peak (1 - cos Omega t) / 2, with n_peak reached at
    // slab_reference_energy_uJ and scaling linearly with the pulse energy.
    std::optional<SlabCavityConfig> slab_cavity;
    double slab_peak_surface_density = 0.0;
    double slab_reference_energy_uJ = 0.01;
    SlabIntegral slab_integral = SlabIntegral::ThinSlab;
    AtomFieldParams atoms;
    double slack = 1.0;
    // Also integrate the master equations for the achieved drive.
    bool simulate = false;

    void validate() const;
};

enum class ChiPath { ScalingLaw, FirstPrinciples };

std::string_view to_string(ChiPath p);

struct ChiChain {
    ChiPath path = ChiPath::ScalingLaw;
    double delta_m_over_L = 0.0;
    double delta_omega = 0.0;       // peak shift / omega0
    double mean_delta_omega = 0.0;  // <delta_omega> / omega0
    double chi = 0.0;               // |2 <g>_Omega| / omega0
};

struct PowerToChi {
    std::optional<ChiChain> scaling_law;
    std::optional<ChiChain> first_principles;
    // first_principles.chi / scaling_law.chi when both exist and the latter is nonzero
    std::optional<double> chi_ratio;
    std::vector<std::string> warnings;

    // First-principles values when available.
    const ChiChain& selected() const { return first_principles ? *first_principles : *scaling_law; }
};

// chi / omega0 = ln(4 n) / (2 pi N_pulse). Throws std::domain_error for n <= 1/4.
double required_squeezing_rate(double target_n_gamma, int n_pulses);

// Throws std::invalid_argument when neither a pulse energy nor a slab is configured.
PowerToChi power_to_chi(const PlanInput& input);

// t1 = N_pulse pi / omega0, the drive duration at Omega ~ 2 omega0.
double planning_duration(int n_pulses);

// 1/4 exp(2 chi t1) with chi and t1 in omega0 units.
double predicted_photon_number(double chi_over_omega0, int n_pulses);

struct PlanReport {
    double target_n_gamma = 0.0;
    int n_pulses = 0;
    double required_chi_over_omega0 = 0.0;
    PowerToChi chain;
    double achieved_delta_m_over_L = 0.0;
    double achieved_delta_omega = 0.0;
    double achieved_mean_delta_omega = 0.0;
    double achieved_chi = 0.0;
    double duration = 0.0;  // t1 omega0
    double predicted_n_gamma = 0.0;
    std::optional<double> simulated_n_gamma;
    double resonance_Omega = 0.0;  // / omega0
    bool threshold_ok = false;
    double detected_n_gamma = 0.0;  // photon number handed to the detection budget
    DetectionReport detection;
    std::vector<std::string> notes;
};

PlanReport plan(const PlanInput& input);

}  // namespace dce
