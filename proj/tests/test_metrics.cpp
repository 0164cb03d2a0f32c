#include <doctest.h>

#include <cmath>
#include <vector>

#include "wcpmem/errors.hpp"
#include "wcpmem/metrics.hpp"

using namespace wcpmem;
using doctest::Approx;

TEST_CASE("cooperativity") {
    const auto p = PhysicalParams::reference_setup();
    CHECK(cooperativity(p) == Approx(2.88149).epsilon(1e-5));
    CHECK(cooperativity(p) == Approx(2.88).epsilon(0.01 / 2.88));
    CHECK(cooperativity(ensemble_params(p, 4)) == Approx(4 * cooperativity(p)).epsilon(1e-14));
    CHECK(cooperativity(ensemble_params(p, 4)) == Approx(11.53).epsilon(1e-3));

    auto lossless = p;
    lossless.kappa_loss = 0.0;
    CHECK(cooperativity(lossless) == Approx(4.9 * 4.9 / (2.42 * 3.03)).epsilon(1e-14));
    CHECK(cooperativity(lossless) == Approx(3.27).epsilon(2e-3));
}

TEST_CASE("maximal single-photon efficiency") {
    const auto p = PhysicalParams::reference_setup();
    CHECK(max_single_photon_efficiency(p) == Approx(0.653283).epsilon(1e-6));

    auto strong = p;
    strong.g *= 1e4;
    CHECK(max_single_photon_efficiency(strong) == Approx(2.42 / 2.75).epsilon(1e-7));
    strong.kappa_loss = 0.0;
    CHECK(max_single_photon_efficiency(strong) == Approx(1.0).epsilon(1e-7));

    CHECK(max_single_photon_efficiency(ensemble_params(p, 4)) == Approx(0.810).epsilon(1e-3));
    double prev = 0.0;
    for (int M = 1; M <= 64; M *= 2) {
        const double eta = max_single_photon_efficiency(ensemble_params(p, M));
        CHECK(eta > prev);
        CHECK(eta < p.kappa / p.kappa_tot());
        prev = eta;
    }
}

TEST_CASE("fidelity from efficiency") {
    CHECK(fidelity_from_efficiency(0.65, 1.0) == Approx(0.65));
    CHECK(fidelity_from_efficiency(0.0065, 0.01) == Approx(0.65));
    CHECK_THROWS_AS(fidelity_from_efficiency(0.1, 0.0), InvalidParameter);
}

TEST_CASE("series expansion") {
    const double eta1 = 0.65, eta2 = 0.31;
    const auto zero = series_eta(0.0, eta1, eta2);
    CHECK(zero.eta == 0.0);
    CHECK(zero.nu == eta1);

    const double slope = eta2 / 2 - eta1;
    for (double n : {0.01, 0.1, 0.5}) {
        const auto s = series_eta(n, eta1, eta2);
        CHECK(s.nu == Approx(eta1 + slope * n).epsilon(1e-15));
        CHECK(s.eta == Approx(n * eta1 + n * n * slope).epsilon(1e-15));
        // Second-order Taylor polynomial of exp(-n)(n eta1 + n^2 eta2 / 2).
        const double poisson = std::exp(-n) * (n * eta1 + 0.5 * n * n * eta2);
        CHECK(std::abs(poisson - s.eta) < n * n * n);
    }

    // eta2 = 2 eta1 leaves nu flat at this order.
    CHECK(series_eta(0.3, eta1, 2 * eta1).nu == Approx(eta1).epsilon(1e-15));
}

TEST_CASE("mixed state efficiency") {
    const std::vector<double> one{1.0}, e1{0.42};
    CHECK(mixed_state_efficiency(one, e1) == 0.42);
    const std::vector<double> w{0.5, 0.5}, e{0.2, 0.6};
    CHECK(mixed_state_efficiency(w, e) == Approx(0.4));
    const std::vector<double> w0{0.0, 1.0}, e0{123.0, 0.3};
    CHECK(mixed_state_efficiency(w0, e0) == Approx(0.3));

    const std::vector<double> bad{0.5, 0.6}, neg{1.5, -0.5}, short_w{1.0};
    CHECK_THROWS_AS(mixed_state_efficiency(bad, e), InvalidParameter);
    CHECK_THROWS_AS(mixed_state_efficiency(neg, e), InvalidParameter);
    CHECK_THROWS_AS(mixed_state_efficiency(short_w, e), DimensionMismatch);
}

TEST_CASE("adiabaticity") {
    const auto p = PhysicalParams::reference_setup();
    const auto a = adiabaticity(p, 0.5);
    CHECK(a.value == Approx(kTwoPi * 3.03 * 0.5 * 2.88149).epsilon(1e-5));
    CHECK(a.value == Approx(27.0).epsilon(0.02));
    CHECK(a.adiabatic);

    const auto fast = adiabaticity(p, 0.05);
    CHECK(fast.value == Approx(a.value / 10).epsilon(1e-14));
    CHECK_FALSE(fast.adiabatic);

    auto weak = p;
    weak.g = 1e-9;
    CHECK(adiabaticity(weak, 0.5).value == Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(adiabaticity(weak, 0.5).adiabatic);
}

TEST_CASE("ensemble parameters") {
    const auto p = PhysicalParams::reference_setup();
    const auto same = ensemble_params(p, 1);
    CHECK(same.g == p.g);
    CHECK(same.kappa == p.kappa);
    CHECK(ensemble_params(p, 9).g == Approx(3 * p.g));
    CHECK_THROWS_AS(ensemble_params(p, 0), InvalidParameter);
}

TEST_CASE("figure of merit") {
    const auto f = figure_of_merit(PhysicalParams::reference_setup(), 0.5);
    CHECK(f.C == Approx(2.88149).epsilon(1e-5));
    CHECK(f.eta_max_sp == Approx(0.653283).epsilon(1e-5));
    CHECK(f.adiabaticity == Approx(27.43).epsilon(1e-3));
}

TEST_CASE("parameter validation") {
    auto p = PhysicalParams::reference_setup();
    CHECK_NOTHROW(p.validate());
    p.g = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = PhysicalParams::reference_setup();
    p.kappa_loss = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    CHECK_THROWS_AS(p.require_nonnegative(), InvalidParameter);
    p = PhysicalParams::reference_setup();
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    CHECK_NOTHROW(p.require_nonnegative());
    const auto q = PhysicalParams::from_mhz(1.0, 2.0, 3.0, 0.5, -1.0, 0.25);
    CHECK(q.g == Approx(kTwoPi));
    CHECK(q.kappa_loss == Approx(kTwoPi * 0.5));
    CHECK(q.Delta == Approx(-kTwoPi));
    CHECK(q.delta == Approx(kTwoPi * 0.25));
}
