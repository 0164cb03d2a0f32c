#include "wcpmem/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcpmem/errors.hpp"
#include "wcpmem/metrics.hpp"

namespace wcpmem {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidParameter(std::string(what) + " must be positive and finite, got " + std::to_string(v));
}

void require_photon_number(double n) {
    if (!(n >= 0.0) || !std::isfinite(n))
        throw InvalidParameter("photon number n must be non-negative and finite, got " + std::to_string(n));
}

constexpr int kMomentQuadraturePoints = 20001;

}  // namespace

// ---------------------------------------------------------------- parameters

void PhysicalParams::validate() const {
    require_positive(g, "g");
    require_positive(kappa, "kappa");
    require_positive(gamma, "gamma");
    if (!(kappa_loss >= 0.0) || !std::isfinite(kappa_loss))
        throw InvalidParameter("kappa_loss must be non-negative and finite");
    if (!std::isfinite(Delta) || !std::isfinite(delta)) throw InvalidParameter("detunings must be finite");
}

void PhysicalParams::require_nonnegative() const {
    for (double v : {g, kappa, kappa_loss, gamma}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("rates must be non-negative and finite");
    }
    if (!std::isfinite(Delta) || !std::isfinite(delta)) throw InvalidParameter("detunings must be finite");
}

PhysicalParams PhysicalParams::reference_setup() { return from_mhz(4.9, 2.42, 3.03, 0.33); }

PhysicalParams PhysicalParams::from_mhz(double g, double kappa, double gamma, double kappa_loss, double Delta,
                                        double delta) {
    PhysicalParams p;
    p.g = mhz_to_angular(g);
    p.kappa = mhz_to_angular(kappa);
    p.gamma = mhz_to_angular(gamma);
    p.kappa_loss = mhz_to_angular(kappa_loss);
    p.Delta = mhz_to_angular(Delta);
    p.delta = mhz_to_angular(delta);
    return p;
}

void TimeGrid::validate() const {
    if (!(t1 < 0.0 && 0.0 < t2)) throw InvalidParameter("time grid must satisfy t1 < 0 < t2");
    require_positive(rel_tol, "rel_tol");
    require_positive(abs_tol, "abs_tol");
    if (max_step < 0.0) throw InvalidParameter("max_step must be non-negative");
    if (samples < 2) throw InvalidParameter("time grid needs at least two diagnostic samples");
}

TimeGrid TimeGrid::around(double coherence_time, double half_width_in_tc) {
    require_positive(coherence_time, "coherence time");
    TimeGrid grid;
    grid.t1 = -half_width_in_tc * coherence_time;
    grid.t2 = half_width_in_tc * coherence_time;
    return grid;
}

// ----------------------------------------------------------------- envelopes

cplx PulseEnvelope::operator()(double t) const {
    return std::visit(
        overloaded{
            [t](const SechShape& s) -> cplx {
                return std::sqrt(s.n / s.T) / std::cosh(2.0 * t / s.T);
            },
            [t](const GaussianShape& s) -> cplx {
                const double norm = std::pow(kTwoPi * s.Tc * s.Tc, -0.25);
                const double dt = t - s.t0;
                return std::sqrt(s.n) * norm * std::exp(-dt * dt / (4.0 * s.Tc * s.Tc));
            },
            [t](const TabulatedShape& s) -> cplx { return s.samples(t); },
        },
        shape_);
}

double PulseEnvelope::photon_number() const {
    return std::visit([](const auto& s) { return s.n; }, shape_);
}

PulseEnvelope PulseEnvelope::with_photon_number(double n) const {
    if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidParameter("photon number must be non-negative");
    return std::visit(
        overloaded{
            [n](SechShape s) { s.n = n; return PulseEnvelope(s); },
            [n](GaussianShape s) { s.n = n; return PulseEnvelope(s); },
            [n](const TabulatedShape& s) {
                if (s.n <= 0.0) throw InvalidParameter("cannot rescale a zero-norm tabulated envelope");
                const double scale = std::sqrt(n / s.n);
                std::vector<cplx> values(s.samples.values().begin(), s.samples.values().end());
                for (auto& v : values) v *= scale;
                std::vector<double> times(s.samples.times().begin(), s.samples.times().end());
                return PulseEnvelope(TabulatedShape{SampledCurve(std::move(times), std::move(values)), n});
            },
        },
        shape_);
}

PulseEnvelope sech_envelope(double n, double T) {
    require_photon_number(n);
    require_positive(T, "sech width T");
    return PulseEnvelope(SechShape{n, T});
}

PulseEnvelope gaussian_envelope(double n, double Tc, double t0) {
    require_photon_number(n);
    require_positive(Tc, "coherence time Tc");
    return PulseEnvelope(GaussianShape{n, Tc, t0});
}

PulseEnvelope tabulated_envelope(SampledCurve samples) {
    const double n = samples.integrate_abs2(samples.times().front(), samples.times().back());
    return PulseEnvelope(TabulatedShape{std::move(samples), n});
}

double sech_width_for_coherence_time(double Tc) {
    require_positive(Tc, "coherence time Tc");
    return 4.0 * std::sqrt(3.0) * Tc / std::numbers::pi;
}

double coherence_time(const PulseEnvelope& env, const TimeGrid& grid) {
    if (!(grid.t1 < grid.t2)) throw InvalidParameter("coherence_time: empty window");
    const int m = kMomentQuadraturePoints;
    const double dt = (grid.t2 - grid.t1) / (m - 1);
    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < m; ++i) {
        const double t = grid.t1 + i * dt;
        const double w = std::norm(env(t)) * ((i == 0 || i == m - 1) ? 0.5 : 1.0);
        w0 += w;
        w1 += w * t;
        w2 += w * t * t;
    }
    if (!(w0 > 0.0)) throw InvalidParameter("coherence_time: envelope has zero norm on the window");
    const double mean = w1 / w0;
    return std::sqrt(std::max(0.0, w2 / w0 - mean * mean));
}

double envelope_norm(const PulseEnvelope& env, double t1, double t2) {
    if (!(t1 < t2)) throw InvalidParameter("envelope_norm: requires t1 < t2");
    return std::visit(
        overloaded{
            [&](const SechShape& s) {
                return 0.5 * s.n * (std::tanh(2.0 * t2 / s.T) - std::tanh(2.0 * t1 / s.T));
            },
            [&](const GaussianShape& s) {
                const double scale = std::sqrt(2.0) * s.Tc;
                return 0.5 * s.n * (std::erf((t2 - s.t0) / scale) - std::erf((t1 - s.t0) / scale));
            },
            [&](const TabulatedShape& s) { return s.samples.integrate_abs2(t1, t2); },
        },
        env.shape());
}

// ----------------------------------------------------------------- mode grid

ModeGrid::ModeGrid(int count, double time_of_flight, double kappa)
    : count_(count), tau_(time_of_flight), lambda_(0.0) {
    if (count < 1 || count % 2 == 0) throw InvalidParameter("mode count N must be a positive odd integer");
    require_positive(time_of_flight, "line length L/c");
    if (!(kappa >= 0.0)) throw InvalidParameter("kappa must be non-negative");
    lambda_ = std::sqrt(kappa / tau_);
}

ModeGrid ModeGrid::standard(double Tc, double kappa, int count, double length_in_tc) {
    return ModeGrid(count, length_in_tc * Tc, kappa);
}

double ModeGrid::spacing() const { return std::numbers::pi / tau_; }

double ModeGrid::detuning(int index) const { return (index - (count_ - 1) / 2) * spacing(); }

std::vector<double> ModeGrid::detunings() const {
    std::vector<double> d(static_cast<std::size_t>(count_));
    for (int i = 0; i < count_; ++i) d[static_cast<std::size_t>(i)] = detuning(i);
    return d;
}

ModeAmplitudes mode_amplitudes(const PulseEnvelope& env, const ModeGrid& modes, double t1, double t2,
                               int quadrature_points) {
    if (!(t1 < t2)) throw InvalidParameter("mode_amplitudes: requires t1 < t2");
    int m = quadrature_points;
    if (m <= 0) {
        // At least 16 samples per period of the fastest mode.
        const double needed = (t2 - t1) * modes.bandwidth() / kTwoPi * 16.0;
        m = std::max(8193, static_cast<int>(std::ceil(needed)) + 1);
    }
    if (m < 2) throw InvalidParameter("mode_amplitudes: need at least two quadrature points");
    const double dt = (t2 - t1) / (m - 1);

    std::vector<cplx> samples(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
        samples[static_cast<std::size_t>(i)] = w * dt * env(t1 + i * dt);
    }

    ModeAmplitudes out;
    out.alpha.resize(static_cast<std::size_t>(modes.size()));
    const double prefactor = 1.0 / std::sqrt(2.0 * modes.time_of_flight());
    for (int k = 0; k < modes.size(); ++k) {
        const double d = modes.detuning(k);
        cplx acc{0.0, 0.0};
        for (int i = 0; i < m; ++i) acc += std::polar(1.0, d * (t1 + i * dt)) * samples[static_cast<std::size_t>(i)];
        out.alpha[static_cast<std::size_t>(k)] = prefactor * acc;
        out.captured_norm += std::norm(out.alpha[static_cast<std::size_t>(k)]);
    }
    out.window_norm = envelope_norm(env, t1, t2);
    out.bandwidth_warning = out.window_norm > 0.0 && out.captured_fraction() < 1.0 - 1e-4;
    return out;
}

cplx envelope_from_modes(std::span<const cplx> alpha, const ModeGrid& modes, double t) {
    if (alpha.size() != static_cast<std::size_t>(modes.size()))
        throw DimensionMismatch("envelope_from_modes: amplitude count differs from mode count");
    cplx acc{0.0, 0.0};
    for (int k = 0; k < modes.size(); ++k) acc += alpha[static_cast<std::size_t>(k)] * std::polar(1.0, -modes.detuning(k) * t);
    return acc / std::sqrt(2.0 * modes.time_of_flight());
}

// ------------------------------------------------------------------- control

cplx ControlField::operator()(double t) const {
    return std::visit(
        overloaded{
            [t](const OptimalSechControl& c) -> cplx {
                // 1/(e^x + 1) evaluated without overflow for large x.
                const double x = 4.0 * t / c.T;
                const double fermi = x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (std::exp(x) + 1.0);
                return std::sqrt(c.plateau_sq * fermi);
            },
            [t](const TabulatedControl& c) -> cplx { return c.samples(t); },
        },
        form_);
}

ControlField ControlField::off() {
    return ControlField(TabulatedControl{SampledCurve({0.0, 1.0}, {cplx{}, cplx{}})});
}

ControlField optimal_control_sech(const PhysicalParams& params, double T) {
    params.validate();
    require_positive(T, "sech width T");
    const double C = cooperativity(params);
    return ControlField(OptimalSechControl{2.0 * params.gamma * (1.0 + C) / T, T});
}

ControlField tabulated_control(SampledCurve samples) { return ControlField(TabulatedControl{std::move(samples)}); }

}  // namespace wcpmem
