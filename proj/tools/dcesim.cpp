// dcesim: photon creation and detection scenarios from the command line.

#include "dce/cli/commands.hpp"
#include "dce/cli/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string config;
    std::string preset;
    std::string out = "out";
    std::vector<std::string> overrides;
    int workers = 1;
    std::optional<double> n_gamma;
};

dce::cli::ScenarioConfig assemble(const Options& o) {
    using namespace dce::cli;
    if (!o.config.empty() && !o.preset.empty()) throw ConfigError("use either --config or --preset, not both");
    ScenarioConfig cfg;
    if (!o.preset.empty()) {
        const auto text = preset_text(o.preset);
        if (!text) {
            std::string known;
            for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
            throw ConfigError("unknown preset '" + o.preset + "' (available: " + known + ")");
        }
        cfg = parse_scenario(*text, "preset " + o.preset);
    } else if (!o.config.empty()) {
        cfg = load_scenario_file(o.config);
    }
    for (const auto& s : o.overrides) apply_override(cfg, s);
    validate(cfg);
    return cfg;
}

void report(const dce::cli::CommandResult& r, const std::string& out) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : r.files) std::cout << out << "/" << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dce::cli;
    CLI::App app{"Dynamical Casimir photon creation and Rydberg-atom detection"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* cmd) {
        cmd->add_option("--config", o.config, "Scenario file (YAML)");
        cmd->add_option("--preset", o.preset, "Built-in scenario: fig1, fig2, paper-nominal");
        cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
        cmd->add_option("--set", o.overrides, "Override section.key=value (repeatable)");
    };

    auto* simulate = app.add_subcommand("simulate", "Integrate the drive and write time series");
    auto* sweep = app.add_subcommand("sweep", "Run the scenario over the sweep grid");
    auto* plan_cmd = app.add_subcommand("plan", "Experiment plan from target photons and laser energy");
    auto* detect = app.add_subcommand("detect", "Detection feasibility for a photon number");
    for (auto* c : {simulate, sweep, plan_cmd, detect}) add_common(c);
    sweep->add_option("--workers", o.workers, "Concurrent grid points")->check(CLI::PositiveNumber);
    detect->add_option("--n-gamma", o.n_gamma, "Photon number (default atoms.n_gamma)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        const ScenarioConfig cfg = assemble(o);
        if (simulate->parsed()) {
            report(cmd_simulate(cfg, o.out), o.out);
        } else if (sweep->parsed()) {
            report(cmd_sweep(cfg, o.out, o.workers), o.out);
        } else if (plan_cmd->parsed()) {
            const auto r = cmd_plan(cfg, o.out, std::cout);
            for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
        } else if (detect->parsed()) {
            cmd_detect(cfg, o.n_gamma.value_or(cfg.atoms.n_gamma), o.out, std::cout);
        }
    } catch (const dce::IntegrationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
