#include "dce/cli/scenario.hpp"

#include "dce/cli/csv.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dce::cli {

namespace detail {
const std::vector<std::pair<std::string, std::string>>& preset_table();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string locate(const std::string& origin, const YAML::Mark& mark) {
    if (mark.is_null()) return origin;
    return origin + ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
}

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
    return format_number(v);
}

double parse_real(const YAML::Node& n, const std::string& ctx, bool allow_inf) {
    if (!n.IsScalar()) throw ConfigError(ctx + ": expected a number");
    const std::string& s = n.Scalar();
    double v;
    if (s == "inf" || s == "+inf" || s == "infinity") {
        v = kInf;
    } else {
        try {
            v = n.as<double>();
        } catch (const YAML::BadConversion&) {
            throw ConfigError(ctx + ": '" + s + "' is not a number");
        }
    }
    if (std::isnan(v)) throw ConfigError(ctx + ": NaN is not allowed");
    if (std::isinf(v) && !allow_inf) throw ConfigError(ctx + ": value must be finite");
    return v;
}

int to_integer(double v, const std::string& ctx) {
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(ctx + ": expected an integer");
    return static_cast<int>(v);
}

bool parse_bool(const YAML::Node& n, const std::string& ctx) {
    try {
        if (n.IsScalar()) return n.as<bool>();
    } catch (const YAML::BadConversion&) {
    }
    throw ConfigError(ctx + ": expected true or false");
}

std::string parse_string(const YAML::Node& n, const std::string& ctx) {
    if (!n.IsScalar()) throw ConfigError(ctx + ": expected a string");
    return n.Scalar();
}

struct Field {
    FieldInfo info;
    std::function<std::string(const ScenarioConfig&)> format;
    std::function<void(ScenarioConfig&, const YAML::Node&, const std::string&)> parse;
    std::function<void(ScenarioConfig&, double, const std::string&)> set_number;
};

template <class Get>
Field real_field(std::string path, Get get, bool allow_inf = false) {
    Field f{{std::move(path), "real", true}, {}, {}, {}};
    f.format = [get](const ScenarioConfig& c) { return format_real(get(c)); };
    f.parse = [get, allow_inf](ScenarioConfig& c, const YAML::Node& n, const std::string& ctx) {
        get(c) = parse_real(n, ctx, allow_inf);
    };
    f.set_number = [get, allow_inf](ScenarioConfig& c, double v, const std::string& ctx) {
        if (std::isnan(v) || (std::isinf(v) && !allow_inf)) throw ConfigError(ctx + ": value must be finite");
        get(c) = v;
    };
    return f;
}

template <class Get>
Field integer_field(std::string path, Get get) {
    Field f{{std::move(path), "integer", true}, {}, {}, {}};
    f.format = [get](const ScenarioConfig& c) { return std::to_string(get(c)); };
    f.parse = [get](ScenarioConfig& c, const YAML::Node& n, const std::string& ctx) {
        get(c) = to_integer(parse_real(n, ctx, false), ctx);
    };
    f.set_number = [get](ScenarioConfig& c, double v, const std::string& ctx) { get(c) = to_integer(v, ctx); };
    return f;
}

template <class Get>
Field boolean_field(std::string path, Get get) {
    Field f{{std::move(path), "boolean", false}, {}, {}, {}};
    f.format = [get](const ScenarioConfig& c) { return std::string(get(c) ? "true" : "false"); };
    f.parse = [get](ScenarioConfig& c, const YAML::Node& n, const std::string& ctx) { get(c) = parse_bool(n, ctx); };
    return f;
}

template <class Get>
Field string_field(std::string path, Get get) {
    Field f{{std::move(path), "string", false}, {}, {}, {}};
    f.format = [get](const ScenarioConfig& c) { return get(c); };
    f.parse = [get](ScenarioConfig& c, const YAML::Node& n, const std::string& ctx) {
        get(c) = parse_string(n, ctx);
    };
    return f;
}

template <class Get>
Field optional_real_field(std::string path, Get get) {
    Field f{{std::move(path), "optional-real", true}, {}, {}, {}};
    f.format = [get](const ScenarioConfig& c) { return get(c) ? format_real(*get(c)) : std::string("null"); };
    f.parse = [get](ScenarioConfig& c, const YAML::Node& n, const std::string& ctx) {
        if (n.IsNull() || (n.IsScalar() && (n.Scalar() == "null" || n.Scalar() == "~")))
            get(c).reset();
        else
            get(c) = parse_real(n, ctx, false);
    };
    f.set_number = [get](ScenarioConfig& c, double v, const std::string& ctx) {
        if (!std::isfinite(v)) throw ConfigError(ctx + ": value must be finite");
        get(c) = v;
    };
    return f;
}

#define DCE_REF(member) [](auto& c) -> auto& { return c.member; }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        real_field("cavity.quality", DCE_REF(cavity.quality), true),
        real_field("cavity.omega0_si", DCE_REF(cavity.omega0_si)),

        string_field("drive.source", DCE_REF(drive.source)),
        string_field("drive.waveform", DCE_REF(drive.waveform)),
        real_field("drive.mean_delta_omega", DCE_REF(drive.mean_delta_omega)),
        real_field("drive.g_fourier_re", DCE_REF(drive.g_fourier_re)),
        real_field("drive.g_fourier_im", DCE_REF(drive.g_fourier_im)),
        real_field("drive.detuning", DCE_REF(drive.detuning)),
        real_field("drive.drive_frequency", DCE_REF(drive.drive_frequency)),
        integer_field("drive.n_pulses", DCE_REF(drive.n_pulses)),
        boolean_field("drive.reference_pair", DCE_REF(drive.reference_pair)),

        string_field("simulation.stepper", DCE_REF(simulation.stepper)),
        integer_field("simulation.steps_per_period", DCE_REF(simulation.steps_per_period)),
        integer_field("simulation.samples_per_period", DCE_REF(simulation.samples_per_period)),
        real_field("simulation.invariant_tolerance", DCE_REF(simulation.invariant_tolerance)),

        real_field("slab.cavity_length", DCE_REF(slab.cavity_length)),
        real_field("slab.slab_position", DCE_REF(slab.slab_position)),
        real_field("slab.slab_thickness", DCE_REF(slab.slab_thickness)),
        real_field("slab.epsilon0", DCE_REF(slab.epsilon0)),
        real_field("slab.epsilon1", DCE_REF(slab.epsilon1)),
        real_field("slab.peak_surface_density", DCE_REF(slab.peak_surface_density)),
        real_field("slab.charge_sq_over_mass", DCE_REF(slab.charge_sq_over_mass)),
        integer_field("slab.mode_number", DCE_REF(slab.mode_number)),
        real_field("slab.transverse_wavenumber", DCE_REF(slab.transverse_wavenumber)),
        string_field("slab.integral", DCE_REF(slab.integral)),
        real_field("slab.reference_energy_uJ", DCE_REF(slab.reference_energy_uJ)),

        real_field("atoms.kappa", DCE_REF(atoms.kappa)),
        integer_field("atoms.n_ryd", DCE_REF(atoms.n_ryd)),
        real_field("atoms.delta_e", DCE_REF(atoms.delta_e)),
        real_field("atoms.transit_rate", DCE_REF(atoms.transit_rate)),
        real_field("atoms.n_gamma", DCE_REF(atoms.n_gamma)),

        real_field("plan.target_n_gamma", DCE_REF(plan.target_n_gamma)),
        optional_real_field("plan.laser_energy_uJ", DCE_REF(plan.laser_energy_uJ)),
        real_field("plan.r_omega", DCE_REF(plan.r_omega)),
        real_field("plan.slack", DCE_REF(plan.slack)),
        boolean_field("plan.simulate", DCE_REF(plan.simulate)),
        boolean_field("plan.use_slab", DCE_REF(plan.use_slab)),

        string_field("output.plot_scale", DCE_REF(output.plot_scale)),
        boolean_field("output.plot_script", DCE_REF(output.plot_script)),
        boolean_field("output.bogoliubov", DCE_REF(output.bogoliubov)),
    };
    return table;
}

#undef DCE_REF

const Field* find_field(const std::string& path) {
    for (const auto& f : fields())
        if (f.info.path == path) return &f;
    return nullptr;
}

const std::vector<std::string>& sections() {
    static const std::vector<std::string> names = {"cavity", "drive", "simulation", "slab",
                                                   "atoms",  "plan",  "output",     "sweep"};
    return names;
}

std::vector<WaveformPoint> parse_table(const YAML::Node& node, const std::string& origin) {
    const std::string ctx = locate(origin, node.Mark()) + ": drive.table";
    if (!node.IsSequence()) throw ConfigError(ctx + ": expected a list of [phase, delta_omega, g_re, g_im]");
    std::vector<WaveformPoint> out;
    for (const auto& row : node) {
        const std::string rctx = locate(origin, row.Mark()) + ": drive.table";
        if (!row.IsSequence() || row.size() != 4)
            throw ConfigError(rctx + ": each row must be [phase, delta_omega, g_re, g_im]");
        out.push_back({parse_real(row[0], rctx, false), parse_real(row[1], rctx, false),
                       parse_real(row[2], rctx, false), parse_real(row[3], rctx, false)});
    }
    return out;
}

std::vector<SweepAxis> parse_sweep(const YAML::Node& node, const std::string& origin) {
    if (node.IsNull()) return {};
    if (!node.IsSequence()) throw ConfigError(locate(origin, node.Mark()) + ": sweep must be a list of axes");
    std::vector<SweepAxis> axes;
    for (const auto& item : node) {
        const std::string ctx = locate(origin, item.Mark());
        if (!item.IsMap()) throw ConfigError(ctx + ": sweep axis must be a mapping");
        SweepAxis axis;
        for (const auto& kv : item) {
            const std::string key = kv.first.Scalar();
            const std::string kctx = locate(origin, kv.first.Mark()) + ": sweep." + key;
            if (key == "parameter")
                axis.parameter = parse_string(kv.second, kctx);
            else if (key == "from")
                axis.from = parse_real(kv.second, kctx, false);
            else if (key == "to")
                axis.to = parse_real(kv.second, kctx, false);
            else if (key == "count")
                axis.count = to_integer(parse_real(kv.second, kctx, false), kctx);
            else if (key == "values") {
                if (!kv.second.IsSequence()) throw ConfigError(kctx + ": expected a list");
                for (const auto& v : kv.second) axis.values.push_back(parse_real(v, kctx, true));
            } else
                throw ConfigError(locate(origin, kv.first.Mark()) + ": unknown key 'sweep." + key + "'");
        }
        axes.push_back(std::move(axis));
    }
    return axes;
}

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw ConfigError(path + ": " + what);
}

}  // namespace

std::vector<double> SweepAxis::grid() const {
    if (!values.empty()) return values;
    if (count == 1) return {from};
    std::vector<double> g;
    const int last = count - 1;
    // Snap interior points to 15 significant digits so that decimal grids
    // (e.g. -0.02 .. 0.02) print as written instead of 0.009999999999999998.
    auto snap = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.15g", v);
        return std::strtod(buf, nullptr);
    };
    for (int i = 0; i <= last; ++i)
        g.push_back(i == 0 ? from : i == last ? to : snap((from * (last - i) + to * i) / last));
    return g;
}

const std::vector<FieldInfo>& schema() {
    static const std::vector<FieldInfo> infos = [] {
        std::vector<FieldInfo> v;
        for (const auto& f : fields()) v.push_back(f.info);
        return v;
    }();
    return infos;
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(locate(origin, e.mark) + ": " + e.msg);
    }
    ScenarioConfig cfg;
    if (root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError(locate(origin, root.Mark()) + ": top level must be a mapping of sections");

    for (const auto& section : root) {
        const std::string name = section.first.Scalar();
        const std::string sctx = locate(origin, section.first.Mark());
        if (std::find(sections().begin(), sections().end(), name) == sections().end())
            throw ConfigError(sctx + ": unknown section '" + name + "'");
        if (name == "sweep") {
            cfg.sweep = parse_sweep(section.second, origin);
            continue;
        }
        if (section.second.IsNull()) continue;
        if (!section.second.IsMap()) throw ConfigError(sctx + ": section '" + name + "' must be a mapping");
        for (const auto& kv : section.second) {
            const std::string path = name + "." + kv.first.Scalar();
            const std::string kctx = locate(origin, kv.first.Mark());
            if (path == "drive.table") {
                cfg.drive.table = parse_table(kv.second, origin);
                continue;
            }
            const Field* f = find_field(path);
            if (!f) throw ConfigError(kctx + ": unknown key '" + path + "'");
            f->parse(cfg, kv.second, locate(origin, kv.second.Mark()) + ": " + path);
        }
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + assignment + ": expected section.key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    const Field* f = find_field(path);
    if (!f) throw ConfigError("--set: unknown key '" + path + "'");
    YAML::Node node;
    try {
        node = YAML::Load(value);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("--set " + path + ": " + e.msg);
    }
    f->parse(cfg, node, "--set " + path);
}

void set_numeric(ScenarioConfig& cfg, const std::string& path, double value) {
    const Field* f = find_field(path);
    if (!f) throw ConfigError("sweep: unknown parameter '" + path + "'");
    if (!f->set_number) throw ConfigError("sweep: parameter '" + path + "' is not numeric");
    f->set_number(cfg, value, "sweep " + path);
}

SlabCavityConfig slab_config(const ScenarioConfig& cfg) {
    const auto& s = cfg.slab;
    SlabCavityConfig c;
    c.cavity_length = s.cavity_length;
    c.slab_position = s.slab_position;
    c.slab_thickness = s.slab_thickness;
    c.epsilon0 = s.epsilon0;
    c.epsilon1 = constant_function(s.epsilon1);
    c.surface_density = constant_function(0.0);
    c.charge_sq_over_mass = s.charge_sq_over_mass;
    c.wavenumber = s.mode_number * kPi / s.cavity_length;
    c.transverse_wavenumber = s.transverse_wavenumber;
    return c;
}

void validate(const ScenarioConfig& cfg) {
    require(cfg.cavity.quality > 0.0, "cavity.quality", "must be positive (.inf for a lossless cavity)");
    require(cfg.cavity.omega0_si > 0.0, "cavity.omega0_si", "must be positive");

    const auto& d = cfg.drive;
    require(d.source == "waveform" || d.source == "slab", "drive.source", "must be waveform or slab");
    require(d.waveform == "default" || d.waveform == "table", "drive.waveform", "must be default or table");
    require(d.n_pulses >= 1, "drive.n_pulses", "must be at least 1");
    require(d.drive_frequency >= 0.0, "drive.drive_frequency", "must be non-negative (0 derives it from detuning)");
    if (d.source == "waveform" && d.waveform == "table") {
        require(!d.table.empty(), "drive.table", "needs at least one row");
        require(d.table.front().phase == 0.0, "drive.table", "first row must be at phase 0");
        const auto& p0 = d.table.front();
        require(p0.delta_omega == 0.0 && p0.g_re == 0.0 && p0.g_im == 0.0, "drive.table",
                "delta_omega and g must vanish at phase 0");
        for (std::size_t i = 1; i < d.table.size(); ++i)
            require(d.table[i].phase > d.table[i - 1].phase && d.table[i].phase < 1.0, "drive.table",
                    "phases must increase strictly within [0, 1)");
    }

    const auto& s = cfg.simulation;
    try {
        stepper_from_string(s.stepper);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("simulation.stepper: ") + e.what());
    }
    require(s.steps_per_period >= kMinStepsPerPeriod, "simulation.steps_per_period",
            "must be at least " + std::to_string(kMinStepsPerPeriod));
    require(s.samples_per_period >= 1, "simulation.samples_per_period", "must be at least 1");
    require(s.invariant_tolerance > 0.0, "simulation.invariant_tolerance", "must be positive");

    require(cfg.slab.mode_number >= 1, "slab.mode_number", "must be at least 1");
    require(cfg.slab.integral == "thin" || cfg.slab.integral == "quadrature", "slab.integral",
            "must be thin or quadrature");
    require(cfg.slab.peak_surface_density >= 0.0, "slab.peak_surface_density", "must be non-negative");
    require(cfg.slab.reference_energy_uJ > 0.0, "slab.reference_energy_uJ", "must be positive");
    if (d.source == "slab" || cfg.plan.use_slab) {
        try {
            slab_config(cfg).validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("slab: ") + e.what());
        }
    }

    const auto& a = cfg.atoms;
    require(a.kappa > 0.0, "atoms.kappa", "must be positive");
    require(a.n_ryd >= 1, "atoms.n_ryd", "must be at least 1");
    require(a.transit_rate > 0.0, "atoms.transit_rate", "must be positive");
    require(a.n_gamma >= 0.0, "atoms.n_gamma", "must be non-negative");

    const auto& p = cfg.plan;
    require(p.target_n_gamma > 0.0, "plan.target_n_gamma", "must be positive");
    require(!p.laser_energy_uJ || *p.laser_energy_uJ >= 0.0, "plan.laser_energy_uJ", "must be non-negative");
    require(p.r_omega > 0.0 && p.r_omega <= 1.0, "plan.r_omega", "must lie in (0, 1]");
    require(p.slack > 0.0, "plan.slack", "must be positive");

    require(cfg.output.plot_scale == "linear" || cfg.output.plot_scale == "log", "output.plot_scale",
            "must be linear or log");

    for (const auto& axis : cfg.sweep) {
        const Field* f = find_field(axis.parameter);
        require(f != nullptr, "sweep", "unknown parameter '" + axis.parameter + "'");
        require(f->set_number != nullptr, "sweep", "parameter '" + axis.parameter + "' is not numeric");
        const bool ranged = axis.count != 0;
        require(ranged != !axis.values.empty(), "sweep " + axis.parameter, "give either from/to/count or values");
        if (ranged) require(axis.count >= 1, "sweep " + axis.parameter, "count must be at least 1");
    }
}

std::string to_yaml(const ScenarioConfig& cfg) {
    std::ostringstream os;
    std::string current;
    for (const auto& f : fields()) {
        const auto dot = f.info.path.find('.');
        const std::string section = f.info.path.substr(0, dot);
        if (section != current) {
            os << section << ":\n";
            current = section;
        }
        os << "  " << f.info.path.substr(dot + 1) << ": " << f.format(cfg) << "\n";
        if (f.info.path == "drive.reference_pair" && !cfg.drive.table.empty()) {
            os << "  table:\n";
            for (const auto& p : cfg.drive.table)
                os << "    - [" << format_real(p.phase) << ", " << format_real(p.delta_omega) << ", "
                   << format_real(p.g_re) << ", " << format_real(p.g_im) << "]\n";
        }
    }
    if (!cfg.sweep.empty()) {
        os << "sweep:\n";
        for (const auto& axis : cfg.sweep) {
            os << "  - parameter: " << axis.parameter << "\n";
            if (!axis.values.empty()) {
                os << "    values: [";
                for (std::size_t i = 0; i < axis.values.size(); ++i)
                    os << (i ? ", " : "") << format_real(axis.values[i]);
                os << "]\n";
            } else {
                os << "    from: " << format_real(axis.from) << "\n"
                   << "    to: " << format_real(axis.to) << "\n"
                   << "    count: " << axis.count << "\n";
            }
        }
    }
    return os.str();
}

std::string canonical_text(const ScenarioConfig& cfg) {
    std::vector<std::string> lines;
    for (const auto& f : fields()) lines.push_back(f.info.path + "=" + f.format(cfg));
    for (std::size_t i = 0; i < cfg.drive.table.size(); ++i) {
        const auto& p = cfg.drive.table[i];
        lines.push_back("drive.table[" + std::to_string(i) + "]=" + format_real(p.phase) + "," +
                        format_real(p.delta_omega) + "," + format_real(p.g_re) + "," + format_real(p.g_im));
    }
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
        const auto& a = cfg.sweep[i];
        const std::string key = "sweep[" + std::to_string(i) + "].";
        lines.push_back(key + "parameter=" + a.parameter);
        std::string grid;
        for (double v : a.grid()) grid += (grid.empty() ? "" : ",") + format_real(v);
        lines.push_back(key + "grid=" + grid);
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

std::string scenario_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) hex[i] = digits[h & 0xf];
    return hex;
}

std::optional<std::string> preset_text(const std::string& name) {
    for (const auto& [n, text] : detail::preset_table())
        if (n == name) return text;
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& entry : detail::preset_table()) names.push_back(entry.first);
    return names;
}

namespace {

double choose_drive_frequency(const ScenarioConfig::Drive& d, double omega0, double mean_shift, bool reference) {
    if (reference) return 2.0 * omega0;
    if (d.drive_frequency > 0.0) return d.drive_frequency * omega0;
    return resonance_frequency(omega0, mean_shift) + 2.0 * d.detuning * omega0;
}

// Periodic piecewise-linear waveform over one drive period.
CouplingSchedule table_schedule(const std::vector<WaveformPoint>& table, double drive_frequency) {
    auto eval = [table, drive_frequency](double t, auto pick) {
        double phase = t * drive_frequency / (2.0 * kPi);
        phase -= std::floor(phase);
        auto it = std::upper_bound(table.begin(), table.end(), phase,
                                   [](double p, const WaveformPoint& w) { return p < w.phase; });
        const WaveformPoint& lo = *(it - 1);
        const WaveformPoint& hi = it == table.end() ? table.front() : *it;
        const double hi_phase = it == table.end() ? 1.0 : hi.phase;
        const double u = (phase - lo.phase) / (hi_phase - lo.phase);
        return pick(lo) + u * (pick(hi) - pick(lo));
    };
    CouplingSchedule s;
    s.omega0 = 1.0;
    s.drive_frequency = drive_frequency;
    s.delta_omega = [eval](double t) { return eval(t, [](const WaveformPoint& w) { return w.delta_omega; }); };
    s.coupling = [eval](double t) {
        return eval(t, [](const WaveformPoint& w) { return Complex(w.g_re, w.g_im); });
    };
    return s;
}

SlabIntegral slab_integral(const ScenarioConfig& cfg) {
    return cfg.slab.integral == "quadrature" ? SlabIntegral::Quadrature : SlabIntegral::ThinSlab;
}

}  // namespace

ResolvedDrive resolve_drive(const ScenarioConfig& cfg, bool reference) {
    const auto& d = cfg.drive;
    ResolvedDrive r;
    double drive_frequency;
    if (d.source == "slab") {
        SlabCavityConfig slab = slab_config(cfg);
        r.omega0 = slab.mode_frequency();
        // the (1 - cos) profile has an Omega-independent mean shift
        const double probe = 2.0 * r.omega0;
        slab.surface_density = pulsed_surface_density(cfg.slab.peak_surface_density, probe);
        const double mean = extract_drive(coupling_schedule(slab, probe, slab_integral(cfg)), probe).mean_delta_omega;
        drive_frequency = choose_drive_frequency(d, r.omega0, mean, reference);
        slab.surface_density = pulsed_surface_density(cfg.slab.peak_surface_density, drive_frequency);
        r.schedule = coupling_schedule(slab, drive_frequency, slab_integral(cfg));
    } else if (d.waveform == "table") {
        r.omega0 = 1.0;
        const double mean = extract_drive(table_schedule(d.table, 1.0), 1.0).mean_delta_omega;
        drive_frequency = choose_drive_frequency(d, 1.0, mean, reference);
        r.schedule = table_schedule(d.table, drive_frequency);
    } else {
        r.omega0 = 1.0;
        const Complex g(d.g_fourier_re, d.g_fourier_im);
        drive_frequency = choose_drive_frequency(d, 1.0, d.mean_delta_omega, reference);
        r.spec = reference || d.drive_frequency > 0.0
                     ? DriveSpec::from_drive_frequency(1.0, d.mean_delta_omega, g, drive_frequency, d.n_pulses)
                     : DriveSpec::from_detuning(1.0, d.mean_delta_omega, g, d.detuning, d.n_pulses);
        r.schedule = drive_schedule(r.spec);
        return r;
    }
    const DriveAverages avg = extract_drive(r.schedule, drive_frequency);
    r.spec = DriveSpec::from_drive_frequency(r.omega0, avg.mean_delta_omega, avg.g_fourier, drive_frequency,
                                             d.n_pulses);
    return r;
}

IntegrationOptions integration_options(const ScenarioConfig& cfg, const ResolvedDrive& drive) {
    IntegrationOptions o;
    o.step = drive.spec.period() / cfg.simulation.steps_per_period;
    o.samples_per_period = cfg.simulation.samples_per_period;
    o.stepper = stepper_from_string(cfg.simulation.stepper);
    o.invariant_tolerance = cfg.simulation.invariant_tolerance;
    return o;
}

AtomFieldParams atom_params(const ScenarioConfig& cfg) {
    const double w0 = cfg.cavity.omega0_si;
    return AtomFieldParams::make(cfg.atoms.kappa, cfg.atoms.n_ryd, w0, w0 + cfg.atoms.delta_e,
                                 1.0 / cfg.atoms.transit_rate, CavityLoss::from_quality(w0, cfg.cavity.quality));
}

PlanInput plan_input(const ScenarioConfig& cfg) {
    PlanInput in;
    in.target_n_gamma = cfg.plan.target_n_gamma;
    in.n_pulses = cfg.drive.n_pulses;
    in.laser_energy_uJ = cfg.plan.laser_energy_uJ;
    in.r_omega = cfg.plan.r_omega;
    if (cfg.plan.use_slab) {
        in.slab_cavity = slab_config(cfg);
        in.slab_peak_surface_density = cfg.slab.peak_surface_density;
        in.slab_reference_energy_uJ = cfg.slab.reference_energy_uJ;
        in.slab_integral = slab_integral(cfg);
    }
    in.atoms = atom_params(cfg);
    in.slack = cfg.plan.slack;
    in.simulate = cfg.plan.simulate;
    return in;
}

}  // namespace dce::cli
