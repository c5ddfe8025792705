#pragma once

// Scenario files: a YAML document with the sections below. Every key is
// declared in the schema; anything else is rejected with its line number.
//
// Frequencies in `drive` are multiples of omega0. Rates in `atoms` are s^-1,
// anchored by cavity.omega0_si.

#include "dce/cavity_modes.hpp"
#include "dce/detection.hpp"
#include "dce/planner.hpp"
#include "dce/squeezing.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dce::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One point of a custom waveform. phase is the fraction of the drive period in [0, 1).
struct WaveformPoint {
    double phase = 0.0;
    double delta_omega = 0.0;
    double g_re = 0.0;
    double g_im = 0.0;
};

// Either from/to/count (inclusive, evenly spaced) or an explicit list.
struct SweepAxis {
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int count = 0;
    std::vector<double> values;

    std::vector<double> grid() const;
};

struct ScenarioConfig {
    struct Cavity {
        double quality = std::numeric_limits<double>::infinity();
        double omega0_si = kDefaultOmega0SI;
    } cavity;

    struct Drive {
        std::string source = "waveform";  // waveform | slab
        std::string waveform = "default";  // default | table
        double mean_delta_omega = 0.02;
        double g_fourier_re = 0.0;
        double g_fourier_im = 0.005;
        double detuning = 0.0;
        double drive_frequency = 0.0;  // > 0 overrides detuning
        int n_pulses = 300;
        bool reference_pair = false;  // also run Omega = 2 omega0
        std::vector<WaveformPoint> table;
    } drive;

    struct Simulation {
        std::string stepper = "rk4";
        int steps_per_period = kDefaultStepsPerPeriod;
        int samples_per_period = 20;
        double invariant_tolerance = 1e-6;
    } simulation;

    struct Slab {
        double cavity_length = 1.0;
        double slab_position = 0.5;
        double slab_thickness = 0.01;
        double epsilon0 = 1.0;
        double epsilon1 = 1.0;
        double peak_surface_density = 0.0;
        double charge_sq_over_mass = 1.0;
        int mode_number = 1;
        double transverse_wavenumber = 0.0;
        std::string integral = "thin";  // thin | quadrature
        double reference_energy_uJ = 0.01;
    } slab;

    struct Atoms {
        double kappa = 3e3;
        int n_ryd = 1000;
        double delta_e = 0.0;
        double transit_rate = 3e3;
        double n_gamma = 1e6;
    } atoms;

    struct Plan {
        double target_n_gamma = 1e6;
        std::optional<double> laser_energy_uJ = 0.01;
        double r_omega = 0.1;
        double slack = 1.0;
        bool simulate = false;
        bool use_slab = false;
    } plan;

    struct Output {
        std::string plot_scale = "linear";  // linear | log
        bool plot_script = true;
        bool bogoliubov = true;
    } output;

    std::vector<SweepAxis> sweep;
};

struct FieldInfo {
    std::string path;  // section.key
    std::string kind;  // real | integer | boolean | string | optional-real
    bool numeric = false;
};

// Every scalar key of the schema, in echo order.
const std::vector<FieldInfo>& schema();

// `origin` prefixes diagnostics, e.g. "scenario.yaml:12:3: unknown key 'drive.foo'".
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "config");
ScenarioConfig load_scenario_file(const std::string& path);

// "section.key=value"; the value is parsed as YAML.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);
// Numeric keys only, used by sweep axes.
void set_numeric(ScenarioConfig& cfg, const std::string& path, double value);

// Throws ConfigError naming the offending key.
void validate(const ScenarioConfig& cfg);

// YAML echo; parse_scenario(to_yaml(c)) reproduces c.
std::string to_yaml(const ScenarioConfig& cfg);
// Sorted "path=value" lines; independent of key order in the source file.
std::string canonical_text(const ScenarioConfig& cfg);
// FNV-1a 64 of canonical_text, as 16 hex digits.
std::string scenario_hash(const ScenarioConfig& cfg);

std::optional<std::string> preset_text(const std::string& name);
std::vector<std::string> preset_names();

// Runtime objects built from a validated scenario.
struct ResolvedDrive {
    CouplingSchedule schedule;  // natural units
    DriveSpec spec;             // same units; g_fourier / mean shift from the actual waveform
    double omega0 = 1.0;        // output time unit is 1 / omega0
};

// reference = true forces Omega = 2 omega0 (the naive resonance).
ResolvedDrive resolve_drive(const ScenarioConfig& cfg, bool reference = false);
IntegrationOptions integration_options(const ScenarioConfig& cfg, const ResolvedDrive& drive);
AtomFieldParams atom_params(const ScenarioConfig& cfg);
PlanInput plan_input(const ScenarioConfig& cfg);
SlabCavityConfig slab_config(const ScenarioConfig& cfg);

}  // namespace dce::cli
