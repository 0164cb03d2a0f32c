#pragma once

#include <variant>
#include <vector>

#include "wcpmem/params.hpp"
#include "wcpmem/table.hpp"

namespace wcpmem {

/// E(t) = sqrt(n/T) sech(2t/T)
struct SechShape {
    double n;
    double T;
};

/// E(t) = sqrt(n) (2 pi Tc^2)^(-1/4) exp(-(t - t0)^2 / (4 Tc^2)); |E|^2 has
/// standard deviation Tc.
struct GaussianShape {
    double n;
    double Tc;
    double t0;
};

struct TabulatedShape {
    SampledCurve samples;
    double n;  ///< trapezoid norm of the samples
};

/// Input-pulse amplitude at the cavity mirror in units of 1/sqrt(us); the
/// squared norm over the real line is the mean photon number.
class PulseEnvelope {
public:
    using Shape = std::variant<SechShape, GaussianShape, TabulatedShape>;

    explicit PulseEnvelope(Shape shape) : shape_(std::move(shape)) {}

    cplx operator()(double t) const;

    /// Nominal photon number (full-line norm for closed forms).
    double photon_number() const;

    const Shape& shape() const { return shape_; }

    /// Same temporal profile rescaled to photon number n (n = 0 is allowed
    /// and yields the vacuum envelope).
    PulseEnvelope with_photon_number(double n) const;

private:
    Shape shape_;
};

PulseEnvelope sech_envelope(double n, double T);
PulseEnvelope gaussian_envelope(double n, double Tc, double t0 = 0.0);
PulseEnvelope tabulated_envelope(SampledCurve samples);

/// sech parameter T that produces coherence time Tc (Tc = pi T / (4 sqrt 3)).
double sech_width_for_coherence_time(double Tc);

/// Standard deviation of t under the weight |E(t)|^2 on [grid.t1, grid.t2].
/// Throws InvalidParameter for an envelope with zero norm on the window.
double coherence_time(const PulseEnvelope& env, const TimeGrid& grid);

/// Integral of |E|^2 over [t1, t2]. Closed forms are exact and accept
/// infinite bounds; tabulated envelopes use the trapezoid rule.
double envelope_norm(const PulseEnvelope& env, double t1, double t2);

/// Standing-wave modes of the transmission line around the cavity frequency.
/// Detunings are j*pi/tau for j = -(N-1)/2 .. (N-1)/2 where tau = L/c is the
/// one-way time of flight; the uniform coupling is lambda = sqrt(kappa/tau).
class ModeGrid {
public:
    ModeGrid(int count, double time_of_flight, double kappa);

    /// N = 311 and L = 12 c Tc.
    static ModeGrid standard(double Tc, double kappa, int count = 311, double length_in_tc = 12.0);

    int size() const { return count_; }
    double time_of_flight() const { return tau_; }
    double spacing() const;
    double detuning(int index) const;
    std::vector<double> detunings() const;
    double coupling() const { return lambda_; }
    /// kappa reconstructed from the coupling, L lambda^2 / c.
    double kappa() const { return lambda_ * lambda_ * tau_; }
    double bandwidth() const { return detuning(count_ - 1); }

private:
    int count_;
    double tau_;
    double lambda_;
};

struct ModeAmplitudes {
    std::vector<cplx> alpha;  ///< coherent amplitudes referenced to t = 0
    double window_norm = 0.0;
    double captured_norm = 0.0;  ///< sum of |alpha|^2
    bool bandwidth_warning = false;

    double captured_fraction() const { return window_norm > 0.0 ? captured_norm / window_norm : 1.0; }
};

/// alpha_k = sqrt(c/2L) \int_{t1}^{t2} exp(i Delta_k t) E(t) dt by the
/// trapezoid rule. `quadrature_points` = 0 picks a resolution from the mode
/// bandwidth. Sets bandwidth_warning when less than 1 - 1e-4 of the window
/// norm lands inside the grid.
ModeAmplitudes mode_amplitudes(const PulseEnvelope& env, const ModeGrid& modes, double t1, double t2,
                               int quadrature_points = 0);

/// Inverse map, E(t) = sqrt(c/2L) sum_k alpha_k exp(-i Delta_k t).
cplx envelope_from_modes(std::span<const cplx> alpha, const ModeGrid& modes, double t);

struct OptimalSechControl {
    double plateau_sq;  ///< 2 gamma (1 + C) / T, the t -> -inf value of Omega^2
    double T;
};

struct TabulatedControl {
    SampledCurve samples;
};

/// Control Rabi frequency Omega(t) in rad/us.
class ControlField {
public:
    using Form = std::variant<OptimalSechControl, TabulatedControl>;

    explicit ControlField(Form form) : form_(std::move(form)) {}

    cplx operator()(double t) const;
    const Form& form() const { return form_; }

    /// Omega == 0 everywhere.
    static ControlField off();

private:
    Form form_;
};

/// Omega(t) = sqrt(2 gamma (1 + C) / ((exp(4t/T) + 1) T)), the adiabatic
/// control that maximizes single-photon storage of a sech pulse at
/// Delta = delta = 0. It is not optimal for any other envelope shape.
ControlField optimal_control_sech(const PhysicalParams& params, double T);

ControlField tabulated_control(SampledCurve samples);

}  // namespace wcpmem
