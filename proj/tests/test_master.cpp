#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wcpmem/errors.hpp"
#include "wcpmem/master_solver.hpp"
#include "wcpmem/metrics.hpp"

using namespace wcpmem;
using doctest::Approx;

namespace {

struct Setup {
    PhysicalParams p = PhysicalParams::reference_setup();
    double T = sech_width_for_coherence_time(0.5);
    ControlField ctrl = optimal_control_sech(p, T);
    TimeGrid grid = TimeGrid::around(0.5);

    MasterRunResult run(double n, int m_max = 14) const {
        MasterOptions o;
        o.m_max = m_max;
        return integrate_master(p, sech_envelope(n, T), ctrl, grid, o);
    }
};

DensityState diagonal_state(int m_max, std::initializer_list<std::tuple<AtomLevel, int, double>> entries) {
    const HilbertSpace s(m_max);
    DensityState st{s, Matrix::Zero(s.dim(), s.dim()), 0.0};
    for (const auto& [a, m, w] : entries) st.rho(s.index(a, m), s.index(a, m)) = w;
    return st;
}

}  // namespace

TEST_CASE("storage efficiency and photon number of fixed states") {
    CHECK(storage_efficiency(diagonal_state(3, {{AtomLevel::r, 0, 1.0}})) == 1.0);
    CHECK(storage_efficiency(diagonal_state(3, {{AtomLevel::g, 0, 1.0}})) == 0.0);
    CHECK(storage_efficiency(diagonal_state(3, {{AtomLevel::r, 0, 0.5}, {AtomLevel::g, 1, 0.5}})) == 0.5);
    CHECK(intracavity_photons(diagonal_state(3, {{AtomLevel::g, 0, 1.0}})) == 0.0);
    CHECK(intracavity_photons(diagonal_state(3, {{AtomLevel::g, 2, 1.0}})) == 2.0);
}

TEST_CASE("vacuum input leaves the ground state untouched") {
    const Setup s;
    const auto r = s.run(0.0, 4);
    CHECK(r.eta == 0.0);
    CHECK(std::isnan(r.nu));
    const auto ground = DensityState::ground(HilbertSpace(4), s.grid.t2);
    CHECK((r.final_state.rho - ground.rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("no control, no storage") {
    const Setup s;
    MasterOptions o;
    o.m_max = 6;
    const auto r = integrate_master(s.p, sech_envelope(1.0, s.T), ControlField::off(), s.grid, o);
    CHECK(r.eta == 0.0);
    CHECK(r.max_photons > 0.0);
}

TEST_CASE("single-photon limit of the fidelity") {
    const Setup s;
    const auto r = s.run(0.001);
    CHECK(std::abs(r.nu - max_single_photon_efficiency(s.p)) < 0.01);
    CHECK(r.nu == Approx(0.651372).epsilon(2e-5));
    CHECK(r.window_norm == Approx(0.001 * (1 - 3.75564e-5)).epsilon(1e-9));
}

TEST_CASE("efficiency is linear at small n") {
    const Setup s;
    std::vector<double> ratio;
    for (double n : {0.001, 0.002, 0.005}) ratio.push_back(s.run(n).eta / n);
    for (double x : ratio) CHECK(x == Approx(ratio.front()).epsilon(0.01));
}

TEST_CASE("invariants along a run") {
    const Setup s;
    MasterOptions o;
    o.record_trajectory = true;
    const auto r = integrate_master(s.p, sech_envelope(1.0, s.T), s.ctrl, s.grid, o);
    CHECK(r.max_trace_defect < 1e-6);
    CHECK(r.max_hermiticity_defect < 1e-10);
    CHECK(r.min_eigenvalue >= -1e-7);
    REQUIRE(r.trajectory.size() == static_cast<std::size_t>(s.grid.samples));
    CHECK(r.trajectory.front().t == s.grid.t1);
    CHECK(r.trajectory.back().t == s.grid.t2);
    CHECK(r.trajectory.back().eta == r.eta);
    CHECK(r.eta == Approx(0.422990).epsilon(2e-5));
    CHECK_FALSE(r.truncation_warning);
}

TEST_CASE("agrees with a fixed-step dense integration") {
    const Setup s;
    auto p = s.p;
    p.Delta = 0.8;
    p.delta = -0.3;
    MasterOptions o;
    o.m_max = 5;
    const auto env = sech_envelope(0.7, s.T);
    const double got = integrate_master(p, env, s.ctrl, s.grid, o).eta;
    const double want = oracle::rk4_efficiency(oracle::Generator::full, p, env, s.ctrl, s.grid.t1, s.grid.t2, 5, 12000);
    CHECK(got == Approx(want).epsilon(1e-7));
}

TEST_CASE("loosening the tolerances barely moves the result") {
    const Setup s;
    auto loose = s.grid;
    loose.rel_tol *= 2;
    loose.abs_tol *= 2;
    MasterOptions o;
    const auto env = sech_envelope(1.0, s.T);
    const double a = integrate_master(s.p, env, s.ctrl, s.grid, o).eta;
    const double b = integrate_master(s.p, env, s.ctrl, loose, o).eta;
    CHECK(std::abs(a - b) < 1e-5);
}

TEST_CASE("efficiency grows with the photon number") {
    const Setup s;
    double prev = 0.0;
    for (double n : {0.001, 0.01, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double eta = s.run(n).eta;
        INFO("n = " << n);
        CHECK(eta >= prev);
        prev = eta;
    }
}

TEST_CASE("fock truncation convergence") {
    const Setup s;
    SUBCASE("n = 1") {
        const std::array<int, 2> m{10, 14};
        const auto scan = truncation_scan(s.p, sech_envelope(1.0, s.T), s.ctrl, s.grid, m);
        CHECK(std::abs(scan.eta[1] - scan.eta[0]) < 1e-4);
        CHECK(scan.converged);
        CHECK(scan.converged_m_max == 14);
    }
    SUBCASE("n = 0.01") {
        CHECK(std::abs(s.run(0.01, 3).eta - s.run(0.01, 14).eta) < 1e-6);
    }
    SUBCASE("n = 20 is not converged at m_max = 6") {
        const std::array<int, 2> m{5, 6};
        const auto scan = truncation_scan(s.p, sech_envelope(20.0, s.T), s.ctrl, s.grid, m);
        CHECK_FALSE(scan.converged);
        CHECK(scan.converged_m_max == -1);
    }
    SUBCASE("n = 20 peak photon number stays clear of the cutoff") {
        const std::array<int, 3> m{8, 11, 14};
        const auto scan = truncation_scan(s.p, sech_envelope(20.0, s.T), s.ctrl, s.grid, m);
        REQUIRE(scan.converged);
        const auto idx = static_cast<std::size_t>(std::find(scan.m_max.begin(), scan.m_max.end(), scan.converged_m_max) -
                                                  scan.m_max.begin());
        CHECK(scan.max_photons[idx] < scan.converged_m_max - 3);
        CHECK(scan.eta[idx] == Approx(0.79).epsilon(0.02 / 0.79));
    }
    SUBCASE("bad truncation lists") {
        const std::array<int, 2> down{6, 4};
        const std::array<int, 2> dup{4, 4};
        const auto env = sech_envelope(1.0, s.T);
        CHECK_THROWS_AS(truncation_scan(s.p, env, s.ctrl, s.grid, down), InvalidParameter);
        CHECK_THROWS_AS(truncation_scan(s.p, env, s.ctrl, s.grid, dup), InvalidParameter);
        CHECK_THROWS_AS(truncation_scan(s.p, env, s.ctrl, s.grid, std::span<const int>{}), InvalidParameter);
    }
}

TEST_CASE("small cutoff raises the truncation warning") {
    const Setup s;
    MasterOptions o;
    o.m_max = 4;
    o.monitor_positivity = false;
    CHECK(integrate_master(s.p, sech_envelope(20.0, s.T), s.ctrl, s.grid, o).truncation_warning);
}

TEST_CASE("invalid inputs") {
    const Setup s;
    auto bad = s.p;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(integrate_master(bad, sech_envelope(1.0, s.T), s.ctrl, s.grid), InvalidParameter);
    auto grid = s.grid;
    grid.t2 = grid.t1;
    CHECK_THROWS_AS(integrate_master(s.p, sech_envelope(1.0, s.T), s.ctrl, grid), InvalidParameter);
}
