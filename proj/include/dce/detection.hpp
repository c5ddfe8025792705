#pragma once

// Rydberg-atom detection of the created photons: perturbative excitation,
// Rabi and relaxation rates, and the feasibility inequalities bounding Q.
//
// Rates here are absolute (s^-1). omega0 is the SI anchor of the cavity mode;
// divide by it for omega0-relative values.

#include "dce/squeezing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dce {

inline constexpr double kDefaultOmega0SI = 1.5e10;  // 2.4 GHz x 2 pi, s^-1

struct AtomFieldParams {
    double kappa = 3e3;  // single atom-photon coupling
    int n_ryd = 1000;
    double omega0 = kDefaultOmega0SI;
    double omega_e = kDefaultOmega0SI;
    double delta_e = 0.0;  // omega_e - omega0
    double transit_time = 1.0 / 3e3;
    CavityLoss loss;

    static AtomFieldParams make(double kappa, int n_ryd, double omega0, double omega_e, double transit_time,
                                const CavityLoss& loss);

    // kappa sqrt(N_Ryd)
    double collective_coupling() const;
    double transit_rate() const { return 1.0 / transit_time; }

    void validate() const;
};

// kappa = d sqrt(omega0 / (2 epsilon0 V)) |f(x1)| / |f(x0)|, in whatever
// consistent units the inputs carry.
double coupling_from_dipole(double dipole, double omega0, double epsilon0, double volume, double mode_ratio);

struct Excitation {
    double n_excited = 0.0;
    bool linear_regime = true;  // false once N_e > 0.1 N_Ryd
};

// N_e(t) = n (2 kbar / Delta_e)^2 sin^2(Delta_e t / 2), t measured from the end of the drive.
Excitation excitation_linear(const AtomFieldParams& params, double n_gamma, double t);

enum class PhotonRegime { ManyPhotons, FewPhotons };

std::string_view to_string(PhotonRegime r);

struct RabiRate {
    double rate = 0.0;
    PhotonRegime regime = PhotonRegime::ManyPhotons;
};

// kappa sqrt(n) for n >= N_Ryd, kbar below.
RabiRate rabi_rate(const AtomFieldParams& params, double n_gamma);

enum class RelaxationBranch { Lossless, Quadratic, Saturated };

std::string_view to_string(RelaxationBranch b);

struct RelaxationRate {
    double rate = 0.0;
    RelaxationBranch branch = RelaxationBranch::Lossless;
};

// 4 (kbar / Gamma)^2 Gamma for kbar < Gamma / 4, Gamma / 2 above; 0 without loss.
// The rate jumps from Gamma / 4 to Gamma / 2 at the switch.
RelaxationRate relaxation_rate(const AtomFieldParams& params);

// One order-of-magnitude inequality, evaluated as slack * lhs >= rhs.
struct Condition {
    std::string name;
    std::string inequality;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 1.0;
    bool pass = false;
};

Condition make_condition(std::string name, std::string inequality, double lhs, double rhs, double slack);

struct QWindow {
    double q_min = 0.0;
    double q_max = std::numeric_limits<double>::infinity();
};

struct DetectionReport {
    double omega0 = kDefaultOmega0SI;
    double n_gamma = 0.0;
    double collective_coupling = 0.0;
    double transit_rate = 0.0;
    double cavity_loss = 0.0;
    double rabi_rate = 0.0;
    PhotonRegime regime = PhotonRegime::ManyPhotons;
    double relax_rate = 0.0;
    RelaxationBranch relax_branch = RelaxationBranch::Lossless;
    double n_e_at_transit = 0.0;

    // (omega0/kappa)/sqrt(n) <~ Q <~ (omega0/kappa)(Gamma_tr/kappa)/N_Ryd; empty when the bounds cross.
    std::optional<QWindow> low_q_window;
    // Q >~ omega0 / Gamma_tr
    QWindow high_q_window;
    // Window of the branch actually in use.
    QWindow q_window;

    // Recorded branch agrees with kbar vs Gamma / 4.
    bool branch_consistent = true;
    // The low-Q window lies where kbar < Gamma / 4 and the high-Q bound where kbar >= Gamma / 4.
    bool low_window_consistent = true;
    bool high_window_consistent = true;

    std::vector<Condition> conditions;

    bool all_pass() const;
};

// Every inequality is evaluated and reported; nothing here throws for a failing condition.
DetectionReport feasibility(const AtomFieldParams& params, double n_gamma, double slack = 1.0);

// Excitation accumulated while photons are still being created:
// (kbar / omega0)^2 n(t), clipped to [0, N_Ryd].
std::vector<double> excitation_during_dce(const AtomFieldParams& params, const std::vector<double>& n_gamma);

}  // namespace dce
