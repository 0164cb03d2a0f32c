#pragma once

#include <complex>
#include <limits>
#include <numbers>

namespace wcpmem {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Converts a frequency given in MHz to an angular frequency in rad/us.
constexpr double mhz_to_angular(double mhz) { return kTwoPi * mhz; }

/// Atom-cavity rates and detunings. All values are angular frequencies in
/// rad/us; `gamma` and `kappa_loss` follow the half-width convention of the
/// Lindblad terms (an excited-state population decays at 2*gamma).
struct PhysicalParams {
    double g = 0.0;           ///< vacuum Rabi coupling of the g-e transition
    double kappa = 0.0;       ///< radiative decay through the input mirror
    double kappa_loss = 0.0;  ///< scattering/absorption/second-mirror loss
    double gamma = 0.0;       ///< decay of |e> into the terminal level
    double Delta = 0.0;       ///< cavity - atom detuning
    double delta = 0.0;       ///< two-photon detuning

    double kappa_tot() const { return kappa + kappa_loss; }

    /// Throws InvalidParameter unless g, kappa, gamma > 0 and kappa_loss >= 0.
    void validate() const;

    /// Lenient check used by the solvers: finite rates, none negative.
    void require_nonnegative() const;

    /// The experimental parameter set (4.9, 2.42, 3.03, 0.33) x 2pi MHz at
    /// one- and two-photon resonance.
    static PhysicalParams reference_setup();

    /// Builds parameters from values in MHz (multiplied by 2pi).
    static PhysicalParams from_mhz(double g, double kappa, double gamma, double kappa_loss,
                                   double Delta = 0.0, double delta = 0.0);
};

/// Integration window and step control shared by both solvers.
struct TimeGrid {
    double t1 = -3.0;
    double t2 = 3.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    /// Upper bound on the adaptive step. Zero selects (t2 - t1) / 400 so the
    /// integrator cannot stride over a pulse starting from an idle state.
    double max_step = 0.0;
    /// Number of uniformly spaced diagnostic samples across [t1, t2].
    int samples = 241;

    double span() const { return t2 - t1; }
    double effective_max_step() const { return max_step > 0.0 ? max_step : span() / 400.0; }
    void validate() const;

    /// The default window [-6 Tc, +6 Tc].
    static TimeGrid around(double coherence_time, double half_width_in_tc = 6.0);
};

}  // namespace wcpmem
