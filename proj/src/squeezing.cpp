#include "dce/squeezing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace dce {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;

constexpr Complex kI{0.0, 1.0};

// Two-stage Gauss-Legendre tableau
constexpr double kSqrt3Over6 = 0.28867513459481288225;
constexpr double kGaussC1 = 0.5 - kSqrt3Over6;
constexpr double kGaussC2 = 0.5 + kSqrt3Over6;
constexpr double kGaussA11 = 0.25;
constexpr double kGaussA12 = 0.25 - kSqrt3Over6;
constexpr double kGaussA21 = 0.25 + kSqrt3Over6;
constexpr double kGaussA22 = 0.25;

// d/dt [A; B] = M(t) [A; B] with
//   M = [ -i (W + mu)      2 g          ]
//       [  2 g^*           i (W + mu^*) ]
class Generator {
public:
    explicit Generator(const MultimodeSchedule& s) : s_(s), n_(s.modes()) {}

    MatrixXcd operator()(double t) const {
        const Eigen::VectorXd w = s_.omega0 + s_.delta_omega(t);
        const MatrixXcd g = s_.coupling(t);
        const MatrixXcd mu = s_.intermode ? s_.intermode(t) : MatrixXcd::Zero(n_, n_);
        check(g, mu, t);

        MatrixXcd m(2 * n_, 2 * n_);
        MatrixXcd diag = mu;
        diag.diagonal() += w.cast<Complex>();
        m.topLeftCorner(n_, n_) = -kI * diag;
        m.topRightCorner(n_, n_) = 2.0 * g;
        m.bottomLeftCorner(n_, n_) = 2.0 * g.conjugate();
        MatrixXcd diag_conj = mu.conjugate();
        diag_conj.diagonal() += w.cast<Complex>();
        m.bottomRightCorner(n_, n_) = kI * diag_conj;
        return m;
    }

private:
    void check(const MatrixXcd& g, const MatrixXcd& mu, double t) const {
        if (g.rows() != n_ || g.cols() != n_ || mu.rows() != n_ || mu.cols() != n_)
            throw std::invalid_argument("coupling matrices do not match the number of modes");
        if (n_ == 1) return;
        const double scale = 1.0 + g.norm() + mu.norm();
        if (mu.diagonal().norm() > 1e-14 * scale)
            throw std::invalid_argument("intermode coupling must have a zero diagonal (shifts belong in delta_omega)");
        if ((mu - mu.adjoint()).norm() > 1e-12 * scale)
            throw std::invalid_argument("intermode coupling is not Hermitian at t = " + std::to_string(t));
        if ((g - g.transpose()).norm() > 1e-12 * scale)
            throw std::invalid_argument("squeezing coupling is not symmetric at t = " + std::to_string(t));
    }

    const MultimodeSchedule& s_;
    Index n_;
};

void rk4_step(const Generator& gen, double t, double h, MatrixXcd& y) {
    const MatrixXcd m0 = gen(t);
    const MatrixXcd mh = gen(t + 0.5 * h);
    const MatrixXcd m1 = gen(t + h);
    const MatrixXcd k1 = m0 * y;
    const MatrixXcd k2 = mh * (y + 0.5 * h * k1);
    const MatrixXcd k3 = mh * (y + 0.5 * h * k2);
    const MatrixXcd k4 = m1 * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Two-stage Gauss-Legendre collocation. Implicit stages are a linear solve
// since the equations are linear; the method conserves quadratic invariants.
void gauss_legendre_step(const Generator& gen, double t, double h, MatrixXcd& y) {
    const MatrixXcd m1 = gen(t + kGaussC1 * h);
    const MatrixXcd m2 = gen(t + kGaussC2 * h);
    const Index d = y.rows();

    MatrixXcd system = MatrixXcd::Identity(2 * d, 2 * d);
    system.topLeftCorner(d, d) -= h * kGaussA11 * m1;
    system.topRightCorner(d, d) -= h * kGaussA12 * m1;
    system.bottomLeftCorner(d, d) -= h * kGaussA21 * m2;
    system.bottomRightCorner(d, d) -= h * kGaussA22 * m2;

    MatrixXcd rhs(2 * d, y.cols());
    rhs.topRows(d) = m1 * y;
    rhs.bottomRows(d) = m2 * y;
    const MatrixXcd k = system.partialPivLu().solve(rhs);
    y += (0.5 * h) * (k.topRows(d) + k.bottomRows(d));
}

}  // namespace

BogoliubovState BogoliubovState::vacuum(Index n_modes) {
    return BogoliubovState{MatrixXcd::Identity(n_modes, n_modes), MatrixXcd::Zero(n_modes, n_modes), 0.0};
}

double BogoliubovState::squeezing_parameter(Index mode) const {
    return std::acosh(std::max(1.0, std::abs(A(mode, mode))));
}

double BogoliubovState::phase_a(Index mode) const { return std::arg(A(mode, mode)); }

double BogoliubovState::phase_b(Index mode) const { return std::arg(B(mode, mode)); }

double invariant_residual(const BogoliubovState& s) {
    const Index n = s.modes();
    const MatrixXcd r = s.A * s.A.adjoint() - s.B.conjugate() * s.B.transpose() - MatrixXcd::Identity(n, n);
    return r.norm();
}

double invariant_drift(const BogoliubovState& s) {
    return invariant_residual(s) / (s.A.squaredNorm() + s.B.squaredNorm());
}

DriveSpec DriveSpec::from_detuning(double omega0, double mean_delta_omega, Complex g_fourier, double detuning,
                                   int n_pulses) {
    DriveSpec d;
    d.omega0 = omega0;
    d.mean_delta_omega = mean_delta_omega;
    d.g_fourier = g_fourier;
    d.Delta = detuning;
    d.Omega = 2.0 * (omega0 + mean_delta_omega + detuning);
    d.n_pulses = n_pulses;
    d.validate();
    return d;
}

DriveSpec DriveSpec::from_drive_frequency(double omega0, double mean_delta_omega, Complex g_fourier,
                                          double drive_frequency, int n_pulses) {
    DriveSpec d;
    d.omega0 = omega0;
    d.mean_delta_omega = mean_delta_omega;
    d.g_fourier = g_fourier;
    d.Omega = drive_frequency;
    d.Delta = 0.5 * drive_frequency - omega0 - mean_delta_omega;
    d.n_pulses = n_pulses;
    d.validate();
    return d;
}

void DriveSpec::validate() const {
    if (!(omega0 > 0.0)) throw std::invalid_argument("mode frequency omega0 must be positive");
    if (!(Omega > 0.0)) throw std::invalid_argument("drive frequency Omega must be positive");
    if (n_pulses < 1) throw std::invalid_argument("pulse count must be at least 1");
}

CavityLoss CavityLoss::from_quality(double omega0, double quality_factor) {
    if (!(quality_factor > 0.0)) throw std::invalid_argument("quality factor must be positive");
    if (!(omega0 > 0.0)) throw std::invalid_argument("mode frequency must be positive");
    CavityLoss loss;
    loss.Q = quality_factor;
    loss.Gamma = std::isinf(quality_factor) ? 0.0 : omega0 / quality_factor;
    return loss;
}

CouplingSchedule drive_schedule(const DriveSpec& drive) {
    drive.validate();
    CouplingSchedule s;
    s.omega0 = drive.omega0;
    s.drive_frequency = drive.Omega;
    s.formulation = Formulation::Canonical;
    s.delta_omega = [m = drive.mean_delta_omega, w = drive.Omega](double t) { return m * (1.0 - std::cos(w * t)); };
    s.coupling = [g2 = 2.0 * drive.g_fourier, w = drive.Omega](double t) { return g2 * (1.0 - std::cos(w * t)); };
    return s;
}

DriveAverages extract_drive(const CouplingSchedule& schedule, double drive_frequency, int samples) {
    if (!(drive_frequency > 0.0)) throw std::invalid_argument("drive frequency must be positive");
    if (samples < 2) throw std::invalid_argument("need at least two samples per period");
    const double period = 2.0 * kPi / drive_frequency;
    double shift = 0.0;
    Complex projection{};
    for (int j = 0; j < samples; ++j) {
        const double t = period * j / samples;
        shift += schedule.delta_omega(t);
        projection += schedule.coupling(t) * std::polar(1.0, drive_frequency * t);
    }
    return {shift / samples, projection / static_cast<double>(samples)};
}

MultimodeSchedule MultimodeSchedule::from_single(const CouplingSchedule& s) {
    MultimodeSchedule m;
    m.omega0 = Eigen::VectorXd::Constant(1, s.omega0);
    m.delta_omega = [dw = s.delta_omega](double t) { return Eigen::VectorXd::Constant(1, dw(t)); };
    m.coupling = [g = s.coupling](double t) { return MatrixXcd::Constant(1, 1, g(t)); };
    m.intermode = nullptr;
    m.formulation = s.formulation;
    m.drive_frequency = s.drive_frequency;
    return m;
}

std::string_view to_string(Stepper s) {
    switch (s) {
        case Stepper::RungeKutta4: return "rk4";
        case Stepper::GaussLegendre4: return "gauss-legendre";
    }
    return "unknown";
}

Stepper stepper_from_string(std::string_view name) {
    if (name == "rk4") return Stepper::RungeKutta4;
    if (name == "gauss-legendre") return Stepper::GaussLegendre4;
    throw std::invalid_argument("unknown stepper '" + std::string(name) + "' (expected rk4 or gauss-legendre)");
}

namespace {

struct Grid {
    double h = 0.0;
    int spp = 0;     // steps per drive period
    int stride = 1;  // steps between dense samples
    bool periodic = false;
    std::int64_t full_steps = 0;
    double remainder = 0.0;
};

Grid make_grid(double drive_frequency, double fastest_mode, double t_end, const IntegrationOptions& options) {
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
    if (options.samples_per_period < 1) throw std::invalid_argument("samples_per_period must be positive");
    Grid g;
    g.periodic = drive_frequency > 0.0;
    // Without a drive, the pair-creation frequency 2 omega_max plays the role of Omega.
    const double reference = g.periodic ? drive_frequency : 2.0 * fastest_mode;
    if (!(reference > 0.0)) throw std::invalid_argument("cannot derive a time scale for the step");
    const double period = 2.0 * kPi / reference;

    const double requested = options.step > 0.0 ? options.step : period / kDefaultStepsPerPeriod;
    if (requested > period / kMinStepsPerPeriod * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "integration step " << requested << " exceeds drive period / " << kMinStepsPerPeriod << " = "
           << period / kMinStepsPerPeriod;
        throw std::invalid_argument(os.str());
    }
    g.spp = static_cast<int>(std::ceil(period / requested - 1e-9));
    g.h = period / g.spp;
    g.stride = std::max(1, g.spp / options.samples_per_period);
    while (g.spp % g.stride != 0) --g.stride;
    g.full_steps = static_cast<std::int64_t>(std::floor(t_end / g.h + 1e-9));
    g.remainder = t_end - static_cast<double>(g.full_steps) * g.h;
    if (g.remainder < 1e-9 * g.h) g.remainder = 0.0;
    return g;
}

// System: advance(t, dt), invariant() -> {residual, scale}, state(t) -> BogoliubovState.
template <class System>
void run(System& sys, const Grid& g, double t_end, double tolerance, Trajectory& traj) {
    traj.step = g.h;
    traj.steps_per_period = g.spp;
    traj.samples.push_back(sys.state(0.0));
    if (g.periodic) traj.pulses.push_back(traj.samples.front());

    auto monitor = [&](double t) {
        const auto [residual, scale] = sys.invariant();
        const double drift = residual / scale;
        if (!std::isfinite(drift) || drift > tolerance) {
            std::ostringstream os;
            os << "symplectic invariant drifted to " << drift << " (tolerance " << tolerance << ") at t = " << t;
            throw IntegrationError(os.str());
        }
        traj.max_invariant_drift = std::max(traj.max_invariant_drift, drift);
        traj.max_invariant_residual = std::max(traj.max_invariant_residual, residual);
    };

    for (std::int64_t k = 0; k < g.full_steps; ++k) {
        sys.advance(static_cast<double>(k) * g.h, g.h);
        const std::int64_t done = k + 1;
        const bool last = done == g.full_steps && g.remainder == 0.0;
        const double t = last ? t_end : static_cast<double>(done) * g.h;
        monitor(t);
        const bool at_pulse = g.periodic && done % g.spp == 0;
        const bool at_sample = done % g.stride == 0 || last;
        if (!at_pulse && !at_sample) continue;
        BogoliubovState s = sys.state(t);
        if (at_sample) traj.samples.push_back(s);
        if (at_pulse) traj.pulses.push_back(std::move(s));
    }
    if (g.remainder > 0.0) {
        sys.advance(static_cast<double>(g.full_steps) * g.h, g.remainder);
        monitor(t_end);
        traj.samples.push_back(sys.state(t_end));
    }
}

// One mode in scalars: a' = -i w a + 2 g b, b' = i w b + 2 g^* a.
class SingleModeSystem {
public:
    SingleModeSystem(const CouplingSchedule& s, Stepper stepper) : s_(s), stepper_(stepper) {}

    void advance(double t, double h) {
        if (stepper_ == Stepper::RungeKutta4)
            rk4(t, h);
        else
            gauss_legendre(t, h);
    }

    std::pair<double, double> invariant() const {
        const double aa = std::norm(a_);
        const double bb = std::norm(b_);
        return {std::abs(aa - bb - 1.0), aa + bb};
    }

    BogoliubovState state(double t) const {
        return BogoliubovState{MatrixXcd::Constant(1, 1, a_), MatrixXcd::Constant(1, 1, b_), t};
    }

private:
    struct Coeff {
        double w;
        Complex g2;  // 2 g
    };

    Coeff at(double t) const { return {s_.omega0 + s_.delta_omega(t), 2.0 * s_.coupling(t)}; }

    static void rhs(const Coeff& c, Complex a, Complex b, Complex& da, Complex& db) {
        da = -kI * c.w * a + c.g2 * b;
        db = kI * c.w * b + std::conj(c.g2) * a;
    }

    void rk4(double t, double h) {
        const Coeff c0 = at(t), ch = at(t + 0.5 * h), c1 = at(t + h);
        Complex ka1, kb1, ka2, kb2, ka3, kb3, ka4, kb4;
        rhs(c0, a_, b_, ka1, kb1);
        rhs(ch, a_ + 0.5 * h * ka1, b_ + 0.5 * h * kb1, ka2, kb2);
        rhs(ch, a_ + 0.5 * h * ka2, b_ + 0.5 * h * kb2, ka3, kb3);
        rhs(c1, a_ + h * ka3, b_ + h * kb3, ka4, kb4);
        a_ += (h / 6.0) * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
        b_ += (h / 6.0) * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
    }

    void gauss_legendre(double t, double h) {
        using M2 = Eigen::Matrix2cd;
        auto generator = [](const Coeff& c) {
            M2 m;
            m << -kI * c.w, c.g2, std::conj(c.g2), kI * c.w;
            return m;
        };
        const M2 m1 = generator(at(t + kGaussC1 * h));
        const M2 m2 = generator(at(t + kGaussC2 * h));
        Eigen::Matrix4cd system = Eigen::Matrix4cd::Identity();
        system.topLeftCorner<2, 2>() -= h * kGaussA11 * m1;
        system.topRightCorner<2, 2>() -= h * kGaussA12 * m1;
        system.bottomLeftCorner<2, 2>() -= h * kGaussA21 * m2;
        system.bottomRightCorner<2, 2>() -= h * kGaussA22 * m2;
        const Eigen::Vector2cd y(a_, b_);
        Eigen::Vector4cd rhs;
        rhs << m1 * y, m2 * y;
        const Eigen::Vector4cd k = system.partialPivLu().solve(rhs);
        a_ += 0.5 * h * (k(0) + k(2));
        b_ += 0.5 * h * (k(1) + k(3));
    }

    const CouplingSchedule& s_;
    Stepper stepper_;
    Complex a_{1.0, 0.0};
    Complex b_{0.0, 0.0};
};

class MultimodeSystem {
public:
    MultimodeSystem(const MultimodeSchedule& s, Stepper stepper)
        : gen_(s), stepper_(stepper), n_(s.modes()), y_(2 * n_, n_) {
        y_.topRows(n_) = MatrixXcd::Identity(n_, n_);
        y_.bottomRows(n_).setZero();
    }

    void advance(double t, double h) {
        if (stepper_ == Stepper::RungeKutta4)
            rk4_step(gen_, t, h, y_);
        else
            gauss_legendre_step(gen_, t, h, y_);
    }

    std::pair<double, double> invariant() const {
        const BogoliubovState s = state(0.0);
        return {invariant_residual(s), s.A.squaredNorm() + s.B.squaredNorm()};
    }

    BogoliubovState state(double t) const { return BogoliubovState{y_.topRows(n_), y_.bottomRows(n_), t}; }

private:
    Generator gen_;
    Stepper stepper_;
    Index n_;
    MatrixXcd y_;
};

}  // namespace

Trajectory integrate(const CouplingSchedule& schedule, double t_end, const IntegrationOptions& options) {
    if (!schedule.delta_omega || !schedule.coupling) throw std::invalid_argument("schedule functions are missing");
    if (!(schedule.omega0 > 0.0)) throw std::invalid_argument("mode frequency must be positive");
    const Grid grid = make_grid(schedule.drive_frequency, schedule.omega0, t_end, options);
    const Stepper stepper = options.stepper.value_or(Stepper::RungeKutta4);

    Trajectory traj;
    traj.stepper = stepper;
    traj.formulation = schedule.formulation;
    traj.drive_frequency = schedule.drive_frequency;
    SingleModeSystem sys(schedule, stepper);
    run(sys, grid, t_end, options.invariant_tolerance, traj);
    return traj;
}

Trajectory integrate(const MultimodeSchedule& schedule, double t_end, const IntegrationOptions& options) {
    const Index n = schedule.modes();
    if (n < 1) throw std::invalid_argument("schedule has no modes");
    if (!schedule.delta_omega || !schedule.coupling) throw std::invalid_argument("schedule functions are missing");
    if (!(schedule.omega0.minCoeff() > 0.0)) throw std::invalid_argument("mode frequencies must be positive");
    const Grid grid = make_grid(schedule.drive_frequency, schedule.omega0.maxCoeff(), t_end, options);
    const Stepper stepper = options.stepper.value_or(n == 1 ? Stepper::RungeKutta4 : Stepper::GaussLegendre4);

    Trajectory traj;
    traj.stepper = stepper;
    traj.formulation = schedule.formulation;
    traj.drive_frequency = schedule.drive_frequency;
    MultimodeSystem sys(schedule, stepper);
    run(sys, grid, t_end, options.invariant_tolerance, traj);
    return traj;
}

double photon_number(const BogoliubovState& s, Index mode) {
    if (mode < 0 || mode >= s.modes()) throw std::out_of_range("mode index out of range");
    return s.B.row(mode).squaredNorm();
}

std::string_view to_string(RateBranch b) {
    switch (b) {
        case RateBranch::Growing: return "growing";
        case RateBranch::Threshold: return "threshold";
        case RateBranch::Oscillating: return "oscillating";
    }
    return "unknown";
}

SqueezingRate effective_squeezing_rate(const DriveSpec& drive) {
    const double g = drive.coupling_strength();
    const double d = drive.Delta;
    const double c2 = g * g - d * d;
    SqueezingRate r;
    if (std::abs(c2) <= 1e-12 * std::max(g * g, d * d)) {
        r.branch = RateBranch::Threshold;
        r.chi = 0.0;
    } else if (c2 > 0.0) {
        r.branch = RateBranch::Growing;
        r.chi = std::sqrt(c2);
    } else {
        r.branch = RateBranch::Oscillating;
        r.chi = Complex(0.0, std::sqrt(-c2));
    }
    return r;
}

double rwa_photon_number(const DriveSpec& drive, double t) {
    const double g = drive.coupling_strength();
    const double d = drive.Delta;
    const double c2 = g * g - d * d;
    const double x = std::sqrt(std::abs(c2)) * t;
    double shape;  // n / |2<g>|^2
    if (x < 1e-4) {
        // all three branches share this expansion
        shape = t * t * (1.0 + c2 * t * t / 3.0);
    } else if (c2 > 0.0) {
        const double s = std::sinh(x);
        shape = s * s / c2;
    } else {
        const double s = std::sin(x);
        shape = s * s / -c2;
    }
    return g * g * shape;
}

double resonance_frequency(double omega0, double mean_delta_omega) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
    return 2.0 * (omega0 + mean_delta_omega);
}

double apply_damping(double n_gamma, const CavityLoss& loss, double t) {
    if (loss.Gamma == 0.0) return n_gamma;
    return n_gamma * std::exp(-loss.Gamma * t);
}

bool dce_threshold(const DriveSpec& drive, const CavityLoss& loss) {
    const auto rate = effective_squeezing_rate(drive);
    return rate.branch == RateBranch::Growing && rate.chi.real() > 0.5 * loss.Gamma;
}

double thermal_amplification(double n_initial, const BogoliubovState& s, Index mode) {
    if (n_initial < 0.0) throw std::invalid_argument("initial photon number must be non-negative");
    return (1.0 + 2.0 * photon_number(s, mode)) * n_initial;
}

IntermodeResonance intermode_resonant_pair(const ModeTriple& first, const ModeTriple& second) {
    auto norm_sq = [](const ModeTriple& m) {
        if (m.nx < 0 || m.ny < 0 || m.nz < 0) throw std::invalid_argument("mode indices must be non-negative");
        const double s = double(m.nx) * m.nx + double(m.ny) * m.ny + double(m.nz) * m.nz;
        if (s == 0.0) throw std::invalid_argument("mode triple (0, 0, 0) is not a cavity mode");
        return s;
    };
    const double s1 = norm_sq(first);
    const double s2 = norm_sq(second);
    IntermodeResonance r;
    r.ratio = std::sqrt(s2 / s1);
    // omega_hi - omega_lo = 2 omega_lo, in either order
    const double lo = std::sqrt(std::min(s1, s2));
    const double hi = std::sqrt(std::max(s1, s2));
    r.resonant = std::abs(hi - 3.0 * lo) <= 1e-12 * lo;
    return r;
}

}  // namespace dce
