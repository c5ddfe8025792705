#pragma once

// Subcommands behind the dcesim executable. Data files are deterministic;
// run metadata (timestamp, hash, file list) goes to run.json.
//
// CSV columns
//   simulate.csv, simulate_reference.csv:
//     t, n_pulse, n_canonical, n_instantaneous, n_rwa, n_excited
//   bogoliubov_<formulation>.csv (one row per drive period):
//     t, n_pulse, re_a, im_a, re_b, im_b, n_gamma
//   summary.csv, and the trailing columns of sweep.csv after one column per axis:
//     omega, detuning, mean_delta_omega, coupling, chi_re, chi_im, branch,
//     n_canonical, n_instantaneous, n_rwa, n_damped, threshold_ok, detection_ok,
//     max_invariant_drift
//   plan_conditions.csv, detect_conditions.csv:
//     name, inequality, lhs, rhs, slack, pass
// Times are in 1/omega0 and frequencies in omega0.

#include "dce/cli/csv.hpp"
#include "dce/cli/scenario.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace dce::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2 };

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommandResult {
    std::vector<std::string> files;  // relative to the output directory
    std::vector<std::string> warnings;
};

const std::vector<std::string>& simulate_columns();
const std::vector<std::string>& bogoliubov_columns();
const std::vector<std::string>& summary_columns();
const std::vector<std::string>& condition_columns();

// Final-state figures of one scenario, as written to summary.csv.
std::vector<Cell> summary_row(const ScenarioConfig& cfg);

CommandResult cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
CommandResult cmd_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, int workers);
CommandResult cmd_plan(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, std::ostream& report);
CommandResult cmd_detect(const ScenarioConfig& cfg, double n_gamma, const std::filesystem::path& out_dir,
                         std::ostream& report);

void write_plan_report(std::ostream& os, const PlanReport& r);
void write_detection_report(std::ostream& os, const DetectionReport& r, int indent = 0);
void write_conditions_csv(std::ostream& os, const std::vector<Condition>& conditions);

}  // namespace dce::cli
