#include "wcpmem/master_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wcpmem/errors.hpp"

namespace wcpmem {

DensityState DensityState::ground(const HilbertSpace& space, double t) {
    DensityState s{space, Matrix::Zero(space.dim(), space.dim()), t};
    const int g0 = space.index(AtomLevel::g, 0);
    s.rho(g0, g0) = 1.0;
    return s;
}

double storage_efficiency(const DensityState& state) {
    double eta = 0.0;
    for (int m = 0; m < state.space.fock_levels(); ++m) {
        const int i = state.space.index(AtomLevel::r, m);
        eta += state.rho(i, i).real();
    }
    return eta;
}

namespace {

double photons_of(const HilbertSpace& space, const Eigen::Ref<const Matrix>& rho) {
    double n = 0.0;
    for (int i = 0; i < space.dim(); ++i) n += space.fock_of(i) * rho(i, i).real();
    return n;
}

double efficiency_of(const HilbertSpace& space, const Eigen::Ref<const Matrix>& rho) {
    double eta = 0.0;
    for (int m = 0; m < space.fock_levels(); ++m) eta += rho(space.index(AtomLevel::r, m), space.index(AtomLevel::r, m)).real();
    return eta;
}

}  // namespace

double intracavity_photons(const DensityState& state) { return photons_of(state.space, state.rho); }

MasterRunResult integrate_master(const PhysicalParams& params, const PulseEnvelope& env, const ControlField& ctrl,
                                 const TimeGrid& grid, const MasterOptions& options) {
    params.require_nonnegative();
    grid.validate();
    const HilbertSpace space(options.m_max);
    const int dim = space.dim();

    ode::State y = ode::State::Zero(static_cast<Eigen::Index>(dim) * dim);
    y[static_cast<Eigen::Index>(space.index(AtomLevel::g, 0)) * (dim + 1)] = 1.0;

    auto rhs = [&](double t, const ode::State& state, ode::State& dstate) {
        const SparseMatrix H = build_hamiltonian(params, space, env(t), ctrl(t));
        Eigen::Map<const Matrix> rho(state.data(), dim, dim);
        Eigen::Map<Matrix> out(dstate.data(), dim, dim);
        lindblad_rhs(params, space, H, rho, out);
    };

    MasterRunResult result{DensityState::ground(space, grid.t2), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, options.m_max,
                           false, {}, {}};

    std::vector<double> sample_times(static_cast<std::size_t>(grid.samples));
    for (int i = 0; i < grid.samples; ++i)
        sample_times[static_cast<std::size_t>(i)] = grid.t1 + grid.span() * i / (grid.samples - 1);
    sample_times.back() = grid.t2;

    auto observe = [&](double t, const ode::State& state) {
        Eigen::Map<const Matrix> rho(state.data(), dim, dim);
        const double trace_defect = std::abs(rho.trace() - 1.0);
        const double photons = photons_of(space, rho);
        result.max_trace_defect = std::max(result.max_trace_defect, trace_defect);
        result.max_photons = std::max(result.max_photons, photons);
        result.max_hermiticity_defect = std::max(result.max_hermiticity_defect, hermiticity_defect(rho));
        if (options.monitor_positivity) result.min_eigenvalue = std::min(result.min_eigenvalue, min_eigenvalue(rho));
        if (options.record_trajectory) result.trajectory.push_back({t, efficiency_of(space, rho), photons, trace_defect});
        if (trace_defect > kTraceGate)
            throw IntegrationError("integrate_master: trace defect " + std::to_string(trace_defect) + " at t = " +
                                   std::to_string(t));
        if (result.min_eigenvalue < kPositivityGate)
            throw IntegrationError("integrate_master: density matrix lost positivity (eigenvalue " +
                                   std::to_string(result.min_eigenvalue) + ") at t = " + std::to_string(t));
    };

    ode::Options opt;
    opt.rel_tol = grid.rel_tol;
    opt.abs_tol = grid.abs_tol;
    opt.max_step = grid.effective_max_step();
    result.stats = ode::integrate_dopri5(rhs, y, grid.t1, grid.t2, opt, sample_times, observe);

    result.final_state.rho = Eigen::Map<const Matrix>(y.data(), dim, dim);
    result.final_state.t = grid.t2;
    result.eta = storage_efficiency(result.final_state);
    result.window_norm = envelope_norm(env, grid.t1, grid.t2);
    result.nu = result.window_norm > 0.0 ? result.eta / result.window_norm : std::numeric_limits<double>::quiet_NaN();
    result.truncation_warning = result.max_photons > options.m_max - 3;
    return result;
}

TruncationScan truncation_scan(const PhysicalParams& params, const PulseEnvelope& env, const ControlField& ctrl,
                               const TimeGrid& grid, std::span<const int> m_list) {
    if (m_list.empty()) throw InvalidParameter("truncation_scan: empty list of truncations");
    if (!std::is_sorted(m_list.begin(), m_list.end()) ||
        std::adjacent_find(m_list.begin(), m_list.end()) != m_list.end())
        throw InvalidParameter("truncation_scan: truncations must be strictly ascending");

    TruncationScan scan;
    MasterOptions options;
    options.monitor_positivity = false;
    for (int m : m_list) {
        options.m_max = m;
        const auto run = integrate_master(params, env, ctrl, grid, options);
        scan.m_max.push_back(m);
        scan.eta.push_back(run.eta);
        scan.max_photons.push_back(run.max_photons);
        const std::size_t n = scan.eta.size();
        if (!scan.converged && n >= 2 && std::abs(scan.eta[n - 1] - scan.eta[n - 2]) < kTruncationTolerance) {
            scan.converged = true;
            scan.converged_m_max = m;
        }
    }
    return scan;
}

}  // namespace wcpmem
