#pragma once

// Photon creation as vacuum squeezing: Bogoliubov master equations, the
// rotating-wave closed form, cavity damping and the growth threshold.

#include "dce/cavity_modes.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dce {

// a_alpha(t) = A_{alpha beta} a_beta + B*_{alpha beta} a^dagger_beta.
struct BogoliubovState {
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    double t = 0.0;

    static BogoliubovState vacuum(Eigen::Index n_modes);

    Eigen::Index modes() const { return A.rows(); }

    // Single-mode squeezing parameters: A = cosh r e^{i phi_A}, B = sinh r e^{i phi_B}.
    double squeezing_parameter(Eigen::Index mode = 0) const;
    double phase_a(Eigen::Index mode = 0) const;
    double phase_b(Eigen::Index mode = 0) const;
};

// ||A A^dag - B^* B^T - I||_F. Zero for an exact Bogoliubov transformation.
double invariant_residual(const BogoliubovState& s);

// invariant_residual divided by ||A||_F^2 + ||B||_F^2, the size of the terms
// that cancel. This is the quantity that stays meaningful once |B|^2 >> 1.
double invariant_drift(const BogoliubovState& s);

// Periodic laser-pulse drive, Omega = 2 (omega0 + <delta_omega> + Delta).
struct DriveSpec {
    double omega0 = 1.0;
    double Omega = 2.0;
    double Delta = 0.0;
    double mean_delta_omega = 0.0;
    Complex g_fourier{};  // <g>_Omega
    int n_pulses = 1;

    static DriveSpec from_detuning(double omega0, double mean_delta_omega, Complex g_fourier, double detuning,
                                   int n_pulses);
    static DriveSpec from_drive_frequency(double omega0, double mean_delta_omega, Complex g_fourier,
                                          double drive_frequency, int n_pulses);

    double period() const { return 2.0 * kPi / Omega; }
    // t1 = N_pulse * 2 pi / Omega
    double duration() const { return n_pulses * period(); }
    // |2 <g>_Omega|
    double coupling_strength() const { return 2.0 * std::abs(g_fourier); }

    void validate() const;
};

struct CavityLoss {
    double Q = std::numeric_limits<double>::infinity();
    double Gamma = 0.0;

    static CavityLoss from_quality(double omega0, double quality_factor);
    static CavityLoss lossless() { return {}; }
};

// Default pulse waveforms driven at Omega:
//   omega(t) = omega0 + <delta_omega> (1 - cos Omega t),  g(t) = 2 <g>_Omega (1 - cos Omega t)
CouplingSchedule drive_schedule(const DriveSpec& drive);

struct DriveAverages {
    double mean_delta_omega = 0.0;
    Complex g_fourier{};
};

// One-period time average of delta_omega(t) and projection of g(t) on
// e^{-i Omega t}, with `samples` uniform points.
DriveAverages extract_drive(const CouplingSchedule& schedule, double drive_frequency, int samples = 2048);

// Several modes with intermode couplings. g must be symmetric and mu
// Hermitian with a zero diagonal.
struct MultimodeSchedule {
    Eigen::VectorXd omega0;
    std::function<Eigen::VectorXd(double)> delta_omega;
    std::function<Eigen::MatrixXcd(double)> coupling;   // g_{alpha beta}(t)
    std::function<Eigen::MatrixXcd(double)> intermode;  // mu_{alpha beta}(t)
    Formulation formulation = Formulation::Canonical;
    double drive_frequency = 0.0;

    Eigen::Index modes() const { return omega0.size(); }
    static MultimodeSchedule from_single(const CouplingSchedule& s);
};

enum class Stepper { RungeKutta4, GaussLegendre4 };

std::string_view to_string(Stepper s);
Stepper stepper_from_string(std::string_view name);

struct IntegrationOptions {
    // Requested step; 0 selects (2 pi / Omega) / 200. Rounded down so that a
    // whole number of steps fits in one drive period.
    double step = 0.0;
    // Dense samples per drive period (stroboscopic samples are always kept).
    int samples_per_period = 20;
    // Default: RK4 for one mode, Gauss-Legendre for several.
    std::optional<Stepper> stepper;
    // Relative invariant drift beyond which the run is aborted.
    double invariant_tolerance = 1e-6;
};

inline constexpr int kDefaultStepsPerPeriod = 200;
inline constexpr int kMinStepsPerPeriod = 50;

struct Trajectory {
    std::vector<BogoliubovState> samples;  // uniform, includes t = 0 and t_end
    std::vector<BogoliubovState> pulses;   // t = m 2 pi / Omega, m = 0, 1, ...
    double step = 0.0;
    int steps_per_period = 0;
    Stepper stepper = Stepper::RungeKutta4;
    Formulation formulation = Formulation::Canonical;
    double drive_frequency = 0.0;
    double max_invariant_drift = 0.0;     // relative, see invariant_drift
    double max_invariant_residual = 0.0;  // absolute, see invariant_residual

    const BogoliubovState& final_state() const { return samples.back(); }
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integrates the Bogoliubov master equations from A = 1, B = 0 up to t_end
// without any rotating-wave approximation.
// Throws std::invalid_argument for a step coarser than (drive period) / 50 and
// IntegrationError when the symplectic invariant drifts past tolerance.
Trajectory integrate(const CouplingSchedule& schedule, double t_end, const IntegrationOptions& options = {});
Trajectory integrate(const MultimodeSchedule& schedule, double t_end, const IntegrationOptions& options = {});

// <0| a^dag_mode(t) a_mode(t) |0> = sum_beta |B_{mode beta}|^2.
double photon_number(const BogoliubovState& s, Eigen::Index mode = 0);

enum class RateBranch { Growing, Threshold, Oscillating };

std::string_view to_string(RateBranch b);

struct SqueezingRate {
    Complex chi{};  // real when growing, purely imaginary when oscillating
    RateBranch branch = RateBranch::Growing;

    double magnitude() const { return std::abs(chi); }
    // Exponential growth rate (zero unless growing).
    double growth_rate() const { return branch == RateBranch::Growing ? chi.real() : 0.0; }
};

// chi = sqrt(|2<g>_Omega|^2 - Delta^2).
SqueezingRate effective_squeezing_rate(const DriveSpec& drive);

// Rotating-wave photon number |2<g>/chi|^2 {sinh^2 chi t; |chi|^2 t^2; sin^2 |chi| t}.
double rwa_photon_number(const DriveSpec& drive, double t);

// 2 (omega0 + <delta_omega>), not the naive 2 omega0.
double resonance_frequency(double omega0, double mean_delta_omega);

double apply_damping(double n_gamma, const CavityLoss& loss, double t);

// Growth survives cavity loss iff Re chi > Gamma / 2 (strict).
bool dce_threshold(const DriveSpec& drive, const CavityLoss& loss);

// Initially present photons are amplified to (1 + 2|B|^2) n_initial.
double thermal_amplification(double n_initial, const BogoliubovState& s, Eigen::Index mode = 0);

struct ModeTriple {
    int nx = 0;
    int ny = 0;
    int nz = 0;
};

struct IntermodeResonance {
    bool resonant = false;
    double ratio = 1.0;  // omega_2 / omega_1
};

// Cubic-cavity modes: omega proportional to |(nx, ny, nz)|. The pair couples
// resonantly under a drive at 2 omega_1 when omega_2 = 3 omega_1.
IntermodeResonance intermode_resonant_pair(const ModeTriple& first, const ModeTriple& second);

}  // namespace dce
