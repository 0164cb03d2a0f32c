#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wcpmem/errors.hpp"
#include "wcpmem/fields.hpp"
#include "wcpmem/metrics.hpp"

using namespace wcpmem;
using doctest::Approx;

namespace {

constexpr double kTc = 0.5;

double sech_T() { return sech_width_for_coherence_time(kTc); }

TimeGrid window() { return TimeGrid::around(kTc); }

}  // namespace

TEST_CASE("sech amplitude") {
    const auto env = sech_envelope(1.0, 1.1027);
    CHECK(env(0.0).real() == Approx(0.9523).epsilon(1e-4));
    CHECK(env(0.0).real() == Approx(1.0 / std::sqrt(1.1027)).epsilon(1e-15));
    CHECK(env(0.0).imag() == 0.0);
    CHECK(std::abs(env(0.3)) == Approx(std::sqrt(1.0 / 1.1027) / std::cosh(0.6 / 1.1027)).epsilon(1e-14));

    const auto vacuum = sech_envelope(0.0, 1.1027);
    for (double t : {-2.0, 0.0, 0.7}) CHECK(vacuum(t) == cplx{});
}

TEST_CASE("sech norm over the real line equals n") {
    for (double n : {0.02, 1.0, 7.5})
        for (double T : {0.3, 1.1027, 4.0}) CHECK(envelope_norm(sech_envelope(n, T), -INFINITY, INFINITY) == Approx(n).epsilon(1e-14));
    CHECK(envelope_norm(sech_envelope(1.0, 1.1027), -INFINITY, 0.0) == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("sech norm is linear in n") {
    const double T = sech_T();
    const double one = envelope_norm(sech_envelope(1.0, T), -6 * kTc, 6 * kTc);
    CHECK(envelope_norm(sech_envelope(0.02, T), -6 * kTc, 6 * kTc) == Approx(0.02 * one).epsilon(1e-14));
}

TEST_CASE("window norm defect of the sech pulse") {
    const double eps = 1.0 - envelope_norm(sech_envelope(1.0, sech_T()), -6 * kTc, 6 * kTc);
    INFO("eps = " << eps);
    CHECK(eps > 0.0);
    CHECK(eps < 1e-5);
}

TEST_CASE("gaussian envelope") {
    const auto env = gaussian_envelope(1.0, kTc);
    CHECK(envelope_norm(env, -6 * kTc, 6 * kTc) == Approx(1.0).epsilon(1e-9));
    CHECK(coherence_time(env, window()) == Approx(0.5).epsilon(1e-6));

    const auto weak = gaussian_envelope(0.02, kTc);
    CHECK(std::norm(weak(0.0)) == Approx(0.02 / (std::sqrt(2 * std::numbers::pi) * 0.5)).epsilon(1e-12));
    CHECK(std::norm(weak(0.0)) == Approx(0.01596).epsilon(1e-3));
}

TEST_CASE("sech coherence time") {
    TimeGrid wide;
    wide.t1 = -20.0;
    wide.t2 = 20.0;
    CHECK(coherence_time(sech_envelope(1.0, 1.1027), wide) == Approx(0.5).epsilon(1e-3));
    CHECK(coherence_time(sech_envelope(1.0, sech_T()), wide) == Approx(kTc).epsilon(1e-6));
    CHECK(sech_T() == Approx(4 * std::sqrt(3.0) * kTc / std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("coherence time is shift invariant") {
    const double T = sech_T();
    std::vector<double> t;
    std::vector<cplx> e0, e1;
    for (int i = 0; i <= 4000; ++i) {
        const double s = -10.0 + 20.0 * i / 4000;
        t.push_back(s);
        e0.push_back(std::sqrt(1.0 / T) / std::cosh(2 * s / T));
        e1.push_back(std::sqrt(1.0 / T) / std::cosh(2 * (s - 1.0) / T));
    }
    TimeGrid grid;
    grid.t1 = -10.0;
    grid.t2 = 10.0;
    const double a = coherence_time(tabulated_envelope(SampledCurve(t, e0)), grid);
    const double b = coherence_time(tabulated_envelope(SampledCurve(t, e1)), grid);
    CHECK(a == Approx(kTc).epsilon(1e-3));
    CHECK(b == Approx(a).epsilon(1e-5));
}

TEST_CASE("negative photon numbers are rejected") {
    CHECK_THROWS_AS(sech_envelope(-1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(gaussian_envelope(-0.1, 0.5), InvalidParameter);
}

TEST_CASE("coherence time of a vacuum envelope is undefined") {
    CHECK_THROWS_AS(coherence_time(sech_envelope(0.0, 1.0), window()), InvalidParameter);
}

TEST_CASE("tabulated envelope rescales to a photon number") {
    const auto env = tabulated_envelope(SampledCurve({-1.0, 0.0, 1.0}, {cplx{0, 0}, cplx{2, 0}, cplx{0, 0}}));
    CHECK(env.photon_number() == Approx(4.0));
    const auto unit = env.with_photon_number(1.0);
    CHECK(unit.photon_number() == Approx(1.0));
    CHECK(unit(0.0).real() == Approx(1.0));
    CHECK(env.with_photon_number(0.0)(0.0) == cplx{});
}

TEST_CASE("mode grid geometry") {
    const double kappa = 2.42 * kTwoPi;
    const auto modes = ModeGrid::standard(kTc, kappa);
    CHECK(modes.size() == 311);
    CHECK(modes.time_of_flight() == Approx(12 * kTc));
    CHECK(modes.detuning(155) == 0.0);
    CHECK(modes.spacing() == Approx(std::numbers::pi / (12 * kTc)));
    CHECK(modes.detuning(0) == Approx(-155 * modes.spacing()));
    CHECK(modes.kappa() == Approx(kappa).epsilon(1e-14));
    CHECK(modes.coupling() == Approx(std::sqrt(kappa / (12 * kTc))));
    CHECK_THROWS_AS(ModeGrid(10, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(ModeGrid(11, -1.0, 1.0), InvalidParameter);
}

TEST_CASE("mode amplitudes capture the pulse") {
    const auto env = sech_envelope(1.0, sech_T());
    const auto modes = ModeGrid::standard(kTc, 2.42 * kTwoPi);
    const auto amps = mode_amplitudes(env, modes, -6 * kTc, 6 * kTc);
    INFO("captured = " << amps.captured_norm);
    CHECK(amps.captured_norm <= 1.0);
    CHECK(amps.captured_norm >= 1.0 - 1e-4);
    CHECK_FALSE(amps.bandwidth_warning);

    // Real even envelope on a symmetric window: real, symmetric amplitudes.
    const int N = modes.size();
    for (int k = 0; k < N; ++k) {
        CHECK(std::abs(amps.alpha[k].imag()) < 1e-12);
        CHECK(amps.alpha[k].real() == Approx(amps.alpha[N - 1 - k].real()).epsilon(1e-12));
    }
}

TEST_CASE("narrow mode grid raises the bandwidth warning") {
    const auto modes = ModeGrid::standard(kTc, 2.42 * kTwoPi, 11);
    const auto amps = mode_amplitudes(sech_envelope(1.0, sech_T()), modes, -6 * kTc, 6 * kTc);
    CHECK(amps.bandwidth_warning);
    CHECK(amps.captured_fraction() < 1.0 - 1e-4);
}

TEST_CASE("vacuum has zero mode amplitudes") {
    const auto modes = ModeGrid::standard(kTc, 2.42 * kTwoPi, 31);
    const auto amps = mode_amplitudes(sech_envelope(0.0, sech_T()), modes, -6 * kTc, 6 * kTc);
    for (const auto& a : amps.alpha) CHECK(a == cplx{});
    CHECK(envelope_from_modes(amps.alpha, modes, 0.3) == cplx{});
}

TEST_CASE("envelope round trip through the modes") {
    const auto env = sech_envelope(1.0, sech_T());
    const auto modes = ModeGrid::standard(kTc, 2.42 * kTwoPi);
    const auto amps = mode_amplitudes(env, modes, -6 * kTc, 6 * kTc);
    double err = 0.0, ref = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = -6 * kTc + 12 * kTc * i / 2000;
        err += std::norm(envelope_from_modes(amps.alpha, modes, t) - env(t));
        ref += std::norm(env(t));
    }
    CHECK(std::sqrt(err / ref) < 1e-3);
}

TEST_CASE("a single mode reconstructs a flat amplitude") {
    const auto modes = ModeGrid::standard(kTc, 2.42 * kTwoPi, 31);
    std::vector<cplx> alpha(31);
    alpha[15] = 1.0;
    const double level = 1.0 / std::sqrt(2 * modes.time_of_flight());
    for (double t : {-3.0, -1.2, 0.0, 2.9}) CHECK(std::abs(envelope_from_modes(alpha, modes, t)) == Approx(level).epsilon(1e-14));
}

TEST_CASE("optimal control") {
    const auto p = PhysicalParams::reference_setup();
    const double T = sech_T();
    const double C = cooperativity(p);
    const auto ctrl = optimal_control_sech(p, T);
    const double plateau = std::sqrt(2 * p.gamma * (1 + C) / T);

    CHECK(ctrl(0.0).real() == Approx(std::sqrt(p.gamma * (1 + C) / T)).epsilon(1e-14));
    CHECK(ctrl(0.0).real() == Approx(8.19).epsilon(2e-3));
    CHECK(ctrl(0.0).real() / kTwoPi == Approx(1.30).epsilon(5e-3));
    CHECK(ctrl(-40.0).real() == Approx(plateau).epsilon(1e-15));
    const double tail = 6 * kTc;
    CHECK(ctrl(tail).real() / plateau == Approx(1.0 / std::sqrt(std::exp(4 * tail / T) + 1.0)).epsilon(1e-13));

    // Omega^2 (exp(4t/T) + 1) T / (2 gamma (1 + C)) = 1
    for (double t : {-5.0, -1.0, -0.1, 0.0, 0.2, 1.5, 3.0, 6.0}) {
        const double w = ctrl(t).real();
        CHECK(std::abs(w * w * (std::exp(4 * t / T) + 1.0) * T / (2 * p.gamma * (1 + C)) - 1.0) < 1e-14);
        CHECK(ctrl(t).imag() == 0.0);
    }

    double prev = ctrl(-6 * kTc).real();
    for (int i = 1; i <= 600; ++i) {
        const double w = ctrl(-6 * kTc + 12 * kTc * i / 600).real();
        CHECK(w < prev);
        prev = w;
    }
    CHECK(std::isfinite(ctrl(1e4).real()));
    CHECK(ctrl(1e4).real() >= 0.0);
}

TEST_CASE("control off and tabulated control") {
    const auto off = ControlField::off();
    for (double t : {-10.0, 0.0, 3.3}) CHECK(off(t) == cplx{});
    const auto tab = tabulated_control(SampledCurve({0.0, 1.0}, {cplx{1, 0}, cplx{3, 1}}));
    CHECK(tab(0.5) == cplx{2, 0.5});
    CHECK(tab(2.0) == cplx{});
}

TEST_CASE("optimal control needs valid parameters") {
    auto p = PhysicalParams::reference_setup();
    p.gamma = 0.0;
    CHECK_THROWS_AS(optimal_control_sech(p, 1.0), InvalidParameter);
    CHECK_THROWS_AS(optimal_control_sech(PhysicalParams::reference_setup(), -1.0), InvalidParameter);
}
