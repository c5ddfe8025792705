#include "dce/cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <thread>

namespace dce::cli {

namespace fs = std::filesystem;

namespace {

struct Simulation {
    ResolvedDrive drive;
    Trajectory canonical;
    Trajectory instantaneous;
};

Simulation run_simulation(const ScenarioConfig& cfg, bool reference) {
    Simulation s{resolve_drive(cfg, reference), {}, {}};
    const IntegrationOptions opts = integration_options(cfg, s.drive);
    const double t_end = s.drive.spec.duration();
    s.canonical = integrate(s.drive.schedule, t_end, opts);
    s.instantaneous = integrate(to_instantaneous(s.drive.schedule), t_end, opts);
    return s;
}

std::vector<Cell> summary_cells(const ScenarioConfig& cfg, const Simulation& s) {
    const DriveSpec& spec = s.drive.spec;
    const double w0 = s.drive.omega0;
    const double t1 = spec.duration();
    const SqueezingRate rate = effective_squeezing_rate(spec);
    const double n_can = photon_number(s.canonical.final_state());
    const double n_inst = photon_number(s.instantaneous.final_state());
    const CavityLoss loss = CavityLoss::from_quality(w0, cfg.cavity.quality);
    const double n_damped = apply_damping(n_can, loss, t1);
    const bool detection_ok = feasibility(atom_params(cfg), n_damped, cfg.plan.slack).all_pass();
    return {spec.Omega / w0,
            spec.Delta / w0,
            spec.mean_delta_omega / w0,
            spec.coupling_strength() / w0,
            rate.chi.real() / w0,
            rate.chi.imag() / w0,
            std::string(to_string(rate.branch)),
            n_can,
            n_inst,
            rwa_photon_number(spec, t1),
            n_damped,
            dce_threshold(spec, loss),
            detection_ok,
            std::max(s.canonical.max_invariant_drift, s.instantaneous.max_invariant_drift)};
}

void prepare_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputError(dir.string() + ": cannot create output directory");
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError((dir / name).string() + ": cannot write");
    return out;
}

void finish(std::ofstream& out, const fs::path& dir, const std::string& name) {
    out.flush();
    if (!out) throw OutputError((dir / name).string() + ": write failed");
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_echo(const ScenarioConfig& cfg, const fs::path& dir, CommandResult& result) {
    auto out = open_output(dir, "scenario.yaml");
    out << to_yaml(cfg);
    finish(out, dir, "scenario.yaml");
    result.files.push_back("scenario.yaml");
}

void write_sidecar(const std::string& command, const ScenarioConfig& cfg, const fs::path& dir,
                   const CommandResult& result, nlohmann::json extra = nlohmann::json::object()) {
    nlohmann::json j;
    j["command"] = command;
    j["scenario_hash"] = scenario_hash(cfg);
    j["timestamp"] = utc_timestamp();
    j["files"] = result.files;
    j["warnings"] = result.warnings;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    auto out = open_output(dir, "run.json");
    out << j.dump(2) << "\n";
    finish(out, dir, "run.json");
}

// Samples sit on whole integration steps except possibly the last one.
double pulse_count(const Trajectory& traj, double t) {
    const double steps = t / traj.step;
    const double whole = std::round(steps);
    if (std::abs(steps - whole) < 1e-6) return whole / traj.steps_per_period;
    return steps / traj.steps_per_period;
}

void write_series(const ScenarioConfig& cfg, const Simulation& s, const fs::path& dir, const std::string& name) {
    const auto& can = s.canonical.samples;
    const auto& inst = s.instantaneous.samples;
    if (can.size() != inst.size()) throw std::logic_error("formulation runs are sampled on different grids");
    std::vector<double> n_can;
    n_can.reserve(can.size());
    for (const auto& st : can) n_can.push_back(photon_number(st));
    const std::vector<double> n_e = excitation_during_dce(atom_params(cfg), n_can);

    const double w0 = s.drive.omega0;
    auto out = open_output(dir, name);
    CsvWriter csv(out, simulate_columns());
    for (std::size_t i = 0; i < can.size(); ++i) {
        const double t = can[i].t;
        csv.row({t * w0, pulse_count(s.canonical, t), n_can[i], photon_number(inst[i]),
                 rwa_photon_number(s.drive.spec, t), n_e[i]});
    }
    finish(out, dir, name);
}

void write_bogoliubov(const Trajectory& traj, const ResolvedDrive& drive, const fs::path& dir,
                      const std::string& name) {
    auto out = open_output(dir, name);
    CsvWriter csv(out, bogoliubov_columns());
    for (const auto& st : traj.pulses) {
        const Complex a = st.A(0, 0);
        const Complex b = st.B(0, 0);
        csv.row({st.t * drive.omega0, pulse_count(traj, st.t), a.real(), a.imag(),
                 b.real(), b.imag(), photon_number(st)});
    }
    finish(out, dir, name);
}

void write_plot_script(const ScenarioConfig& cfg, const fs::path& dir) {
    auto out = open_output(dir, "simulate.gp");
    const bool log = cfg.output.plot_scale == "log";
    out << "# n_gamma versus pulse count; solid canonical, dotted instantaneous, dashed RWA\n"
        << "set datafile separator ','\n"
        << "set xlabel 'N_pulse'\n"
        << "set ylabel 'n_gamma'\n"
        << (log ? "set logscale y\nset format y '10^{%L}'\n" : "unset logscale y\n")
        << "set key left top\n"
        << "plot 'simulate.csv' using 2:3 with lines lc 1 dt 1 title 'canonical', \\\n"
        << "     'simulate.csv' using 2:4 with lines lc 1 dt 3 title 'instantaneous', \\\n"
        << "     'simulate.csv' using 2:5 with lines lc 3 dt 2 title 'RWA'";
    if (cfg.drive.reference_pair) {
        out << ", \\\n"
            << "     'simulate_reference.csv' using 2:3 with lines lc 2 dt 1 title 'canonical, Omega = 2 omega0', \\\n"
            << "     'simulate_reference.csv' using 2:4 with lines lc 2 dt 3 title 'instantaneous, Omega = 2 omega0'";
    }
    out << "\n";
    finish(out, dir, "simulate.gp");
}

std::string num(double v) { return format_number(v); }

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent), ' '); }

void write_rate(std::ostream& os, int indent, const std::string& key, double per_s, double omega0) {
    os << pad(indent) << key << ": {per_s: " << num(per_s) << ", per_omega0: " << num(per_s / omega0) << "}\n";
}

void write_window(std::ostream& os, int indent, const std::string& key, const QWindow& w) {
    os << pad(indent) << key << ": [" << num(w.q_min) << ", " << num(w.q_max) << "]\n";
}

void write_chain(std::ostream& os, int indent, const std::string& key, const ChiChain& c) {
    os << pad(indent) << key << ":\n"
       << pad(indent + 2) << "delta_m_over_L: " << num(c.delta_m_over_L) << "\n"
       << pad(indent + 2) << "delta_omega_over_omega0: " << num(c.delta_omega) << "\n"
       << pad(indent + 2) << "mean_delta_omega_over_omega0: " << num(c.mean_delta_omega) << "\n"
       << pad(indent + 2) << "chi_over_omega0: " << num(c.chi) << "\n";
}

std::string quoted(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += c;
    }
    return q + "\"";
}

}  // namespace

const std::vector<std::string>& simulate_columns() {
    static const std::vector<std::string> c = {"t", "n_pulse", "n_canonical", "n_instantaneous", "n_rwa", "n_excited"};
    return c;
}

const std::vector<std::string>& bogoliubov_columns() {
    static const std::vector<std::string> c = {"t", "n_pulse", "re_a", "im_a", "re_b", "im_b", "n_gamma"};
    return c;
}

const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> c = {
        "omega",       "detuning",        "mean_delta_omega", "coupling", "chi_re",       "chi_im",
        "branch",      "n_canonical",     "n_instantaneous",  "n_rwa",    "n_damped",     "threshold_ok",
        "detection_ok", "max_invariant_drift"};
    return c;
}

const std::vector<std::string>& condition_columns() {
    static const std::vector<std::string> c = {"name", "inequality", "lhs", "rhs", "slack", "pass"};
    return c;
}

std::vector<Cell> summary_row(const ScenarioConfig& cfg) { return summary_cells(cfg, run_simulation(cfg, false)); }

CommandResult cmd_simulate(const ScenarioConfig& cfg, const fs::path& out_dir) {
    validate(cfg);
    prepare_directory(out_dir);
    CommandResult result;

    const Simulation main = run_simulation(cfg, false);
    const double t_end = main.drive.spec.duration();
    if (auto w = validity_warning(main.drive.schedule, 0.0, t_end)) result.warnings.push_back(*w);

    write_series(cfg, main, out_dir, "simulate.csv");
    result.files.push_back("simulate.csv");
    if (cfg.drive.reference_pair) {
        const Simulation ref = run_simulation(cfg, true);
        write_series(cfg, ref, out_dir, "simulate_reference.csv");
        result.files.push_back("simulate_reference.csv");
    }
    if (cfg.output.bogoliubov) {
        write_bogoliubov(main.canonical, main.drive, out_dir, "bogoliubov_canonical.csv");
        write_bogoliubov(main.instantaneous, main.drive, out_dir, "bogoliubov_instantaneous.csv");
        result.files.push_back("bogoliubov_canonical.csv");
        result.files.push_back("bogoliubov_instantaneous.csv");
    }
    {
        auto out = open_output(out_dir, "summary.csv");
        CsvWriter csv(out, summary_columns());
        csv.row(summary_cells(cfg, main));
        finish(out, out_dir, "summary.csv");
        result.files.push_back("summary.csv");
    }
    if (cfg.output.plot_script) {
        write_plot_script(cfg, out_dir);
        result.files.push_back("simulate.gp");
    }
    write_echo(cfg, out_dir, result);

    nlohmann::json extra;
    extra["integration"] = {{"stepper", std::string(to_string(main.canonical.stepper))},
                            {"step", main.canonical.step * main.drive.omega0},
                            {"steps_per_period", main.canonical.steps_per_period},
                            {"max_invariant_drift_canonical", main.canonical.max_invariant_drift},
                            {"max_invariant_drift_instantaneous", main.instantaneous.max_invariant_drift}};
    result.files.push_back("run.json");
    write_sidecar("simulate", cfg, out_dir, result, extra);
    return result;
}

CommandResult cmd_sweep(const ScenarioConfig& cfg, const fs::path& out_dir, int workers) {
    validate(cfg);
    if (cfg.sweep.empty()) throw ConfigError("sweep: at least one axis is required");
    prepare_directory(out_dir);

    std::vector<std::vector<double>> points{{}};
    for (const auto& axis : cfg.sweep) {
        std::vector<std::vector<double>> next;
        for (const auto& p : points)
            for (double v : axis.grid()) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    std::sort(points.begin(), points.end());

    // Configure every point up front so parameter errors surface before any work starts.
    std::vector<ScenarioConfig> configs;
    configs.reserve(points.size());
    for (const auto& p : points) {
        ScenarioConfig c = cfg;
        c.sweep.clear();
        for (std::size_t k = 0; k < p.size(); ++k) set_numeric(c, cfg.sweep[k].parameter, p[k]);
        validate(c);
        configs.push_back(std::move(c));
    }

    std::vector<std::vector<Cell>> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                rows[i] = summary_row(configs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n_workers =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, points.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    CommandResult result;
    std::vector<std::string> header;
    for (const auto& axis : cfg.sweep) header.push_back(axis.parameter);
    for (const auto& c : summary_columns()) header.push_back(c);
    {
        auto out = open_output(out_dir, "sweep.csv");
        CsvWriter csv(out, header);
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::vector<Cell> row(points[i].begin(), points[i].end());
            row.insert(row.end(), rows[i].begin(), rows[i].end());
            csv.row(row);
        }
        finish(out, out_dir, "sweep.csv");
        result.files.push_back("sweep.csv");
    }
    write_echo(cfg, out_dir, result);
    result.files.push_back("run.json");
    write_sidecar("sweep", cfg, out_dir, result, {{"points", points.size()}, {"workers", n_workers}});
    return result;
}

void write_conditions_csv(std::ostream& os, const std::vector<Condition>& conditions) {
    CsvWriter csv(os, condition_columns());
    for (const auto& c : conditions) csv.row({c.name, c.inequality, c.lhs, c.rhs, c.slack, c.pass});
}

void write_detection_report(std::ostream& os, const DetectionReport& r, int indent) {
    const std::string p = pad(indent);
    const double w0 = r.omega0;
    os << p << "detection:\n";
    const int in = indent + 2;
    const std::string q = pad(in);
    os << q << "omega0_si: " << num(w0) << "\n"
       << q << "n_gamma: " << num(r.n_gamma) << "\n"
       << q << "regime: " << to_string(r.regime) << "\n";
    write_rate(os, in, "collective_coupling", r.collective_coupling, w0);
    write_rate(os, in, "rabi_rate", r.rabi_rate, w0);
    write_rate(os, in, "relaxation_rate", r.relax_rate, w0);
    write_rate(os, in, "cavity_loss", r.cavity_loss, w0);
    write_rate(os, in, "transit_rate", r.transit_rate, w0);
    os << q << "relaxation_branch: " << to_string(r.relax_branch) << "\n"
       << q << "n_e_at_transit: " << num(r.n_e_at_transit) << "\n";
    if (r.low_q_window)
        write_window(os, in, "low_q_window", *r.low_q_window);
    else
        os << q << "low_q_window: null\n";
    write_window(os, in, "high_q_window", r.high_q_window);
    write_window(os, in, "q_window", r.q_window);
    os << q << "branch_consistent: " << (r.branch_consistent ? "true" : "false") << "\n"
       << q << "low_window_consistent: " << (r.low_window_consistent ? "true" : "false") << "\n"
       << q << "high_window_consistent: " << (r.high_window_consistent ? "true" : "false") << "\n"
       << q << "all_pass: " << (r.all_pass() ? "true" : "false") << "\n"
       << q << "conditions:\n";
    for (const auto& c : r.conditions) {
        os << q << "  - name: " << c.name << "\n"
           << q << "    inequality: " << quoted(c.inequality) << "\n"
           << q << "    lhs: " << num(c.lhs) << "\n"
           << q << "    rhs: " << num(c.rhs) << "\n"
           << q << "    slack: " << num(c.slack) << "\n"
           << q << "    pass: " << (c.pass ? "true" : "false") << "\n";
    }
    os << q << "convention: "
       << quoted("order-of-magnitude conditions evaluated as slack * lhs >= rhs; photon regimes switch at "
                 "n_gamma = N_Ryd")
       << "\n";
}

void write_plan_report(std::ostream& os, const PlanReport& r) {
    os << "plan:\n"
       << "  target_n_gamma: " << num(r.target_n_gamma) << "\n"
       << "  n_pulses: " << r.n_pulses << "\n"
       << "  required_chi_over_omega0: " << num(r.required_chi_over_omega0) << "\n"
       << "  achieved_path: " << to_string(r.chain.selected().path) << "\n";
    write_chain(os, 2, "achieved", r.chain.selected());
    if (r.chain.scaling_law) write_chain(os, 2, "scaling_law", *r.chain.scaling_law);
    if (r.chain.first_principles) write_chain(os, 2, "first_principles", *r.chain.first_principles);
    os << "  chi_ratio_first_principles_to_scaling: " << (r.chain.chi_ratio ? num(*r.chain.chi_ratio) : "null")
       << "\n"
       << "  omega0_t1: " << num(r.duration) << "\n"
       << "  predicted_n_gamma: " << num(r.predicted_n_gamma) << "\n"
       << "  simulated_n_gamma: " << (r.simulated_n_gamma ? num(*r.simulated_n_gamma) : "null") << "\n"
       << "  resonance_omega_over_omega0: " << num(r.resonance_Omega) << "\n"
       << "  threshold_ok: " << (r.threshold_ok ? "true" : "false") << "\n"
       << "  detected_n_gamma: " << num(r.detected_n_gamma) << "\n";
    write_detection_report(os, r.detection, 0);
    os << "notes:\n";
    for (const auto& n : r.notes) os << "  - " << quoted(n) << "\n";
}

CommandResult cmd_plan(const ScenarioConfig& cfg, const fs::path& out_dir, std::ostream& report) {
    validate(cfg);
    const PlanReport r = plan(plan_input(cfg));
    prepare_directory(out_dir);
    CommandResult result;
    result.warnings = r.chain.warnings;
    {
        auto out = open_output(out_dir, "plan.yaml");
        write_plan_report(out, r);
        finish(out, out_dir, "plan.yaml");
        result.files.push_back("plan.yaml");
    }
    {
        auto out = open_output(out_dir, "plan_conditions.csv");
        write_conditions_csv(out, r.detection.conditions);
        finish(out, out_dir, "plan_conditions.csv");
        result.files.push_back("plan_conditions.csv");
    }
    write_plan_report(report, r);
    write_echo(cfg, out_dir, result);
    result.files.push_back("run.json");
    write_sidecar("plan", cfg, out_dir, result);
    return result;
}

CommandResult cmd_detect(const ScenarioConfig& cfg, double n_gamma, const fs::path& out_dir, std::ostream& report) {
    validate(cfg);
    const DetectionReport r = feasibility(atom_params(cfg), n_gamma, cfg.plan.slack);
    prepare_directory(out_dir);
    CommandResult result;
    {
        auto out = open_output(out_dir, "detect.yaml");
        write_detection_report(out, r);
        finish(out, out_dir, "detect.yaml");
        result.files.push_back("detect.yaml");
    }
    {
        auto out = open_output(out_dir, "detect_conditions.csv");
        write_conditions_csv(out, r.conditions);
        finish(out, out_dir, "detect_conditions.csv");
        result.files.push_back("detect_conditions.csv");
    }
    write_detection_report(report, r);
    write_echo(cfg, out_dir, result);
    result.files.push_back("run.json");
    write_sidecar("detect", cfg, out_dir, result, {{"n_gamma", n_gamma}});
    return result;
}

}  // namespace dce::cli
