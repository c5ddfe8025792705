#include "dce/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dce {

AtomFieldParams AtomFieldParams::make(double kappa, int n_ryd, double omega0, double omega_e, double transit_time,
                                      const CavityLoss& loss) {
    AtomFieldParams p;
    p.kappa = kappa;
    p.n_ryd = n_ryd;
    p.omega0 = omega0;
    p.omega_e = omega_e;
    p.delta_e = omega_e - omega0;
    p.transit_time = transit_time;
    p.loss = loss;
    p.validate();
    return p;
}

double AtomFieldParams::collective_coupling() const { return kappa * std::sqrt(static_cast<double>(n_ryd)); }

void AtomFieldParams::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("atom-photon coupling kappa must be positive");
    if (n_ryd < 1) throw std::invalid_argument("N_Ryd must be at least 1");
    if (!(transit_time > 0.0)) throw std::invalid_argument("transit time must be positive");
    if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
    if (!(loss.Gamma >= 0.0)) throw std::invalid_argument("cavity loss rate must be non-negative");
}

double coupling_from_dipole(double dipole, double omega0, double epsilon0, double volume, double mode_ratio) {
    if (!(omega0 > 0.0 && epsilon0 > 0.0 && volume > 0.0))
        throw std::invalid_argument("omega0, epsilon0 and the cavity volume must be positive");
    return dipole * std::sqrt(omega0 / (2.0 * epsilon0 * volume)) * mode_ratio;
}

Excitation excitation_linear(const AtomFieldParams& params, double n_gamma, double t) {
    const double kbar = params.collective_coupling();
    const double d = params.delta_e;
    const double x = std::abs(d) * t;
    double n_e;
    if (x < 1e-4) {
        n_e = n_gamma * kbar * kbar * t * t * (1.0 - x * x / 12.0);
    } else {
        const double s = std::sin(0.5 * d * t);
        n_e = n_gamma * (2.0 * kbar / d) * (2.0 * kbar / d) * s * s;
    }
    return {n_e, n_e <= 0.1 * params.n_ryd};
}

std::string_view to_string(PhotonRegime r) {
    return r == PhotonRegime::ManyPhotons ? "many-photons" : "few-photons";
}

RabiRate rabi_rate(const AtomFieldParams& params, double n_gamma) {
    if (n_gamma < 0.0) throw std::invalid_argument("photon number must be non-negative");
    if (n_gamma >= params.n_ryd) return {params.kappa * std::sqrt(n_gamma), PhotonRegime::ManyPhotons};
    return {params.collective_coupling(), PhotonRegime::FewPhotons};
}

std::string_view to_string(RelaxationBranch b) {
    switch (b) {
        case RelaxationBranch::Lossless: return "lossless";
        case RelaxationBranch::Quadratic: return "quadratic";
        case RelaxationBranch::Saturated: return "saturated";
    }
    return "unknown";
}

RelaxationRate relaxation_rate(const AtomFieldParams& params) {
    const double gamma = params.loss.Gamma;
    if (gamma == 0.0) return {0.0, RelaxationBranch::Lossless};
    const double kbar = params.collective_coupling();
    if (kbar < 0.25 * gamma) return {4.0 * kbar * kbar / gamma, RelaxationBranch::Quadratic};
    return {0.5 * gamma, RelaxationBranch::Saturated};
}

Condition make_condition(std::string name, std::string inequality, double lhs, double rhs, double slack) {
    Condition c{std::move(name), std::move(inequality), lhs, rhs, slack, false};
    c.pass = slack * lhs >= rhs;
    return c;
}

bool DetectionReport::all_pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.pass; });
}

DetectionReport feasibility(const AtomFieldParams& params, double n_gamma, double slack) {
    params.validate();
    if (!(n_gamma >= 0.0)) throw std::invalid_argument("photon number must be non-negative");
    if (!(slack > 0.0)) throw std::invalid_argument("slack factor must be positive");

    constexpr double inf = std::numeric_limits<double>::infinity();
    const double w0 = params.omega0;
    const double kappa = params.kappa;
    const double n_ryd = params.n_ryd;
    const double gamma_tr = params.transit_rate();
    const double gamma = params.loss.Gamma;
    const double q = params.loss.Q;

    DetectionReport r;
    r.omega0 = w0;
    r.n_gamma = n_gamma;
    r.collective_coupling = params.collective_coupling();
    r.transit_rate = gamma_tr;
    r.cavity_loss = gamma;

    const auto rabi = rabi_rate(params, n_gamma);
    // without photons there is nothing to oscillate
    r.rabi_rate = n_gamma > 0.0 ? rabi.rate : 0.0;
    r.regime = rabi.regime;
    const auto relax = relaxation_rate(params);
    r.relax_rate = relax.rate;
    r.relax_branch = relax.branch;
    r.n_e_at_transit = rabi.regime == PhotonRegime::ManyPhotons ? 0.5 * n_ryd : 0.5 * n_gamma;

    const double q_min = n_gamma > 0.0 ? (w0 / kappa) / std::sqrt(n_gamma) : inf;
    const double q_max = (w0 / kappa) * (gamma_tr / kappa) / n_ryd;
    if (q_min <= q_max) r.low_q_window = QWindow{q_min, q_max};
    r.high_q_window = QWindow{w0 / gamma_tr, inf};

    // kbar < Gamma / 4  <=>  Q < omega0 / (4 kbar)
    const double q_switch = w0 / (4.0 * r.collective_coupling);
    r.low_window_consistent = q_max < q_switch;
    r.high_window_consistent = r.high_q_window.q_min >= q_switch;
    switch (relax.branch) {
        case RelaxationBranch::Quadratic: r.branch_consistent = r.collective_coupling < 0.25 * gamma; break;
        case RelaxationBranch::Saturated: r.branch_consistent = r.collective_coupling >= 0.25 * gamma; break;
        case RelaxationBranch::Lossless: r.branch_consistent = gamma == 0.0; break;
    }

    auto& c = r.conditions;
    c.push_back(make_condition("rabi_over_loss", "Omega_e >~ Gamma", r.rabi_rate, gamma, slack));
    c.push_back(make_condition("rabi_over_transit", "Omega_e >~ Gamma_tr", r.rabi_rate, gamma_tr, slack));
    c.push_back(make_condition("transit_over_relaxation", "Gamma_tr >~ Gamma_e", gamma_tr, r.relax_rate, slack));
    if (relax.branch == RelaxationBranch::Quadratic) {
        r.q_window = QWindow{q_min, q_max};
        c.push_back(make_condition("q_lower_bound", "Q >~ (omega0/kappa)/sqrt(n_gamma)", q, q_min, slack));
        c.push_back(make_condition("q_upper_bound", "Q <~ (omega0/kappa)(Gamma_tr/kappa)/N_Ryd", q_max, q, slack));
    } else {
        r.q_window = r.high_q_window;
        c.push_back(make_condition("q_high_bound", "Q >~ omega0/Gamma_tr", q, r.high_q_window.q_min, slack));
    }
    c.push_back(make_condition("photon_requirement", "n_gamma >~ (kappa/Gamma_tr)^2 N_Ryd^2", n_gamma,
                               (kappa / gamma_tr) * (kappa / gamma_tr) * n_ryd * n_ryd, slack));
    return r;
}

std::vector<double> excitation_during_dce(const AtomFieldParams& params, const std::vector<double>& n_gamma) {
    const double ratio = params.collective_coupling() / params.omega0;
    const double cap = params.n_ryd;
    std::vector<double> out;
    out.reserve(n_gamma.size());
    for (double n : n_gamma) out.push_back(std::clamp(ratio * ratio * n, 0.0, cap));
    return out;
}

}  // namespace dce
