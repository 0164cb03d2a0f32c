#include "wcpmem/ladder_solver.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "wcpmem/errors.hpp"

namespace wcpmem {

namespace {

constexpr cplx I{0.0, 1.0};

double sum_norm(std::span<const cplx> v) {
    return std::accumulate(v.begin(), v.end(), 0.0, [](double acc, cplx x) { return acc + std::norm(x); });
}

std::vector<double> uniform_samples(const TimeGrid& grid) {
    std::vector<double> times(static_cast<std::size_t>(grid.samples));
    for (int i = 0; i < grid.samples; ++i)
        times[static_cast<std::size_t>(i)] = grid.t1 + grid.span() * i / (grid.samples - 1);
    times.back() = grid.t2;
    return times;
}

ode::Options options_from(const TimeGrid& grid) {
    ode::Options opt;
    opt.rel_tol = grid.rel_tol;
    opt.abs_tol = grid.abs_tol;
    opt.max_step = grid.effective_max_step();
    return opt;
}

/// Unit-normalized one-photon amplitudes propagated freely from t = 0 to t1.
std::vector<cplx> line_amplitudes_at(const ModeGrid& modes, std::span<const cplx> alpha, double t1) {
    if (alpha.size() != static_cast<std::size_t>(modes.size()))
        throw DimensionMismatch("ladder: amplitude count differs from mode count");
    const double n = sum_norm(alpha);
    if (!(n > 0.0)) throw InvalidParameter("ladder: mode amplitudes have zero norm");
    std::vector<cplx> out(alpha.size());
    for (int k = 0; k < modes.size(); ++k)
        out[static_cast<std::size_t>(k)] =
            alpha[static_cast<std::size_t>(k)] / std::sqrt(n) * std::polar(1.0, -modes.detuning(k) * t1);
    return out;
}

}  // namespace

LadderInitial ladder_initial_conditions(std::span<const cplx> alpha, double n) {
    if (!(n > 0.0)) throw InvalidParameter("ladder_initial_conditions: normalization undefined for n = 0");
    const double captured = sum_norm(alpha);
    if (std::abs(captured - n) > 1e-3 * n)
        throw InvalidParameter("ladder_initial_conditions: sum |alpha_k|^2 = " + std::to_string(captured) +
                               " is inconsistent with n = " + std::to_string(n));
    LadderInitial out;
    out.mode_count = static_cast<int>(alpha.size());
    out.single.resize(alpha.size());
    const double scale = 1.0 / std::sqrt(captured);
    for (std::size_t k = 0; k < alpha.size(); ++k) out.single[k] = alpha[k] * scale;
    out.pair.resize(triangle_size(out.mode_count));
    for (int k = 0; k < out.mode_count; ++k)
        for (int q = k; q < out.mode_count; ++q)
            out.pair[triangle_index(out.mode_count, k, q)] =
                out.single[static_cast<std::size_t>(k)] * out.single[static_cast<std::size_t>(q)] / std::sqrt(2.0);
    return out;
}

double SingleExcitationState::norm() const {
    return std::norm(c1) + std::norm(e1) + std::norm(r1) + sum_norm(modes);
}

double TwoExcitationState::norm() const {
    double pair_norm = 0.0;
    for (int k = 0; k < mode_count; ++k)
        for (int q = k; q < mode_count; ++q)
            pair_norm += (k == q ? 0.5 : 1.0) * std::norm(pairs[triangle_index(mode_count, k, q)]);
    return std::norm(c2) + std::norm(e2) + std::norm(r2) + sum_norm(cavity_line) + sum_norm(excited_line) +
           sum_norm(stored_line) + pair_norm;
}

double TwoExcitationState::stored_population() const { return std::norm(r2) + sum_norm(stored_line); }

// --------------------------------------------------------- one excitation

SingleExcitationResult integrate_single_excitation_io(const PhysicalParams& params, const PulseEnvelope& env,
                                                      const ControlField& ctrl, const TimeGrid& grid,
                                                      const LadderOptions& options) {
    params.require_nonnegative();
    grid.validate();
    const double n = env.photon_number();
    if (!(n > 0.0)) throw InvalidParameter("integrate_single_excitation_io: envelope has zero photon number");
    const double drive = std::sqrt(2.0 * params.kappa / n);
    const double kappa_tot = params.kappa_tot();

    auto rhs = [&](double t, const ode::State& y, ode::State& dy) {
        const cplx omega = ctrl(t);
        dy[0] = -I * params.g * y[1] - I * drive * env(t) - kappa_tot * y[0];
        dy[1] = (I * params.Delta - params.gamma) * y[1] - I * params.g * y[0] - I * omega * y[2];
        dy[2] = -I * params.delta * y[2] - I * std::conj(omega) * y[1];
    };

    SingleExcitationResult result;
    ode::State y = ode::State::Zero(3);
    const auto times = options.record_trajectory ? uniform_samples(grid) : std::vector<double>{};
    auto observe = [&](double t, const ode::State& s) {
        result.trajectory.push_back({t, s.squaredNorm(), std::norm(s[2])});
    };
    result.stats = ode::integrate_dopri5(rhs, y, grid.t1, grid.t2, options_from(grid), times, observe);
    result.state = {y[0], y[1], y[2], {}};
    result.eta_1 = std::norm(y[2]);
    return result;
}

SingleExcitationResult integrate_single_excitation_modes(const PhysicalParams& params, const ModeGrid& modes,
                                                         std::span<const cplx> alpha, const ControlField& ctrl,
                                                         const TimeGrid& grid, const LadderOptions& options) {
    params.require_nonnegative();
    grid.validate();
    const int N = modes.size();
    const auto line = line_amplitudes_at(modes, alpha, grid.t1);
    const std::vector<double> detuning = modes.detunings();
    const double lambda = modes.coupling();

    // Layout: c1, e1, r1, E_0 .. E_{N-1}, dissipated norm.
    const Eigen::Index dim = 3 + N + 1;
    auto rhs = [&](double t, const ode::State& y, ode::State& dy) {
        const cplx omega = ctrl(t);
        const cplx c1 = y[0], e1 = y[1], r1 = y[2];
        cplx line_sum{0.0, 0.0};
        for (int k = 0; k < N; ++k) {
            const cplx ek = y[3 + k];
            line_sum += ek;
            dy[3 + k] = -I * detuning[static_cast<std::size_t>(k)] * ek - I * lambda * c1;
        }
        dy[0] = -I * params.g * e1 - I * lambda * line_sum - params.kappa_loss * c1;
        dy[1] = (I * params.Delta - params.gamma) * e1 - I * params.g * c1 - I * omega * r1;
        dy[2] = -I * params.delta * r1 - I * std::conj(omega) * e1;
        dy[dim - 1] = 2.0 * params.gamma * std::norm(e1) + 2.0 * params.kappa_loss * std::norm(c1);
    };

    ode::State y = ode::State::Zero(dim);
    for (int k = 0; k < N; ++k) y[3 + k] = line[static_cast<std::size_t>(k)];

    SingleExcitationResult result;
    const auto times = options.record_trajectory ? uniform_samples(grid) : std::vector<double>{};
    auto observe = [&](double t, const ode::State& s) {
        result.trajectory.push_back({t, s.head(dim - 1).squaredNorm(), std::norm(s[2])});
    };
    result.stats = ode::integrate_dopri5(rhs, y, grid.t1, grid.t2, options_from(grid), times, observe);

    result.state.c1 = y[0];
    result.state.e1 = y[1];
    result.state.r1 = y[2];
    result.state.modes.assign(y.data() + 3, y.data() + 3 + N);
    result.dissipated = y[dim - 1].real();
    result.eta_1 = std::norm(y[2]);
    return result;
}

// --------------------------------------------------------- two excitations

namespace {

constexpr std::size_t kIntegratorVectors = 16;  // working vectors held by integrate_dopri5

std::size_t two_excitation_amplitudes(int N) { return 3 + 3 * static_cast<std::size_t>(N) + triangle_size(N) + 1; }

}  // namespace

std::size_t two_excitation_memory_estimate(int mode_count) {
    return two_excitation_amplitudes(mode_count) * sizeof(cplx) * kIntegratorVectors;
}

TwoExcitationResult integrate_two_excitation(const PhysicalParams& params, const ModeGrid& modes,
                                             std::span<const cplx> alpha, const ControlField& ctrl,
                                             const TimeGrid& grid, const LadderOptions& options) {
    params.require_nonnegative();
    grid.validate();
    const int N = modes.size();
    if (two_excitation_memory_estimate(N) > options.memory_limit_bytes) {
        int fit = N;
        while (fit > 1 && two_excitation_memory_estimate(fit) > options.memory_limit_bytes) fit -= 2;
        throw CapacityError("integrate_two_excitation: N = " + std::to_string(N) + " needs about " +
                            std::to_string(two_excitation_memory_estimate(N) >> 20) + " MiB, over the " +
                            std::to_string(options.memory_limit_bytes >> 20) + " MiB budget; use N <= " +
                            std::to_string(fit));
    }
    const auto line = line_amplitudes_at(modes, alpha, grid.t1);
    const std::vector<double> detuning = modes.detunings();
    const double lambda = modes.coupling();
    const double root2 = std::sqrt(2.0);
    const double g = params.g, gamma = params.gamma, loss = params.kappa_loss;

    // Layout: c2, e2, r2, E^c[N], E^e[N], E^r[N], A[triangle], dissipated norm.
    const Eigen::Index off_c = 3, off_e = 3 + N, off_r = 3 + 2 * N, off_a = 3 + 3 * N;
    const auto dim = static_cast<Eigen::Index>(two_excitation_amplitudes(N));
    std::vector<cplx> row_sum(static_cast<std::size_t>(N));

    auto rhs = [&](double t, const ode::State& y, ode::State& dy) {
        const cplx omega = ctrl(t);
        const cplx omega_c = std::conj(omega);
        const cplx c2 = y[0], e2 = y[1], r2 = y[2];
        const cplx* Ec = y.data() + off_c;
        const cplx* Ee = y.data() + off_e;
        const cplx* Er = y.data() + off_r;
        const cplx* A = y.data() + off_a;
        cplx* dA = dy.data() + off_a;

        // Pair block: free rotation plus feeding from |g,1,1_k>, and the row
        // sums sum_q A_{k,q} that feed back into |g,1,1_k>.
        std::fill(row_sum.begin(), row_sum.end(), cplx{});
        std::size_t idx = 0;
        for (int k = 0; k < N; ++k) {
            const double dk = detuning[static_cast<std::size_t>(k)];
            const cplx ec_k = Ec[k];
            cplx acc{0.0, 0.0};
            for (int q = k; q < N; ++q, ++idx) {
                const cplx a = A[idx];
                acc += a;
                if (q != k) row_sum[static_cast<std::size_t>(q)] += a;
                dA[idx] = -I * ((dk + detuning[static_cast<std::size_t>(q)]) * a + lambda * (ec_k + Ec[q]));
            }
            row_sum[static_cast<std::size_t>(k)] += acc;
        }

        cplx sum_c{}, sum_e{}, sum_r{};
        double flux = 0.0;
        for (int k = 0; k < N; ++k) {
            const double dk = detuning[static_cast<std::size_t>(k)];
            sum_c += Ec[k];
            sum_e += Ee[k];
            sum_r += Er[k];
            dy[off_c + k] = -(I * dk + loss) * Ec[k] - I * g * Ee[k] -
                            I * lambda * (row_sum[static_cast<std::size_t>(k)] + root2 * c2);
            dy[off_e + k] = (I * (params.Delta - dk) - gamma) * Ee[k] - I * g * Ec[k] - I * omega * Er[k] -
                            I * lambda * e2;
            dy[off_r + k] = -I * (dk + params.delta) * Er[k] - I * omega_c * Ee[k] - I * lambda * r2;
            flux += loss * std::norm(Ec[k]) + gamma * std::norm(Ee[k]);
        }
        dy[0] = -I * root2 * (g * e2 + lambda * sum_c) - 2.0 * loss * c2;
        dy[1] = (I * params.Delta - gamma - loss) * e2 - I * root2 * g * c2 - I * omega * r2 - I * lambda * sum_e;
        dy[2] = -(I * params.delta + loss) * r2 - I * omega_c * e2 - I * lambda * sum_r;
        flux += 2.0 * loss * std::norm(c2) + (gamma + loss) * std::norm(e2) + loss * std::norm(r2);
        dy[dim - 1] = 2.0 * flux;
    };

    ode::State y = ode::State::Zero(dim);
    {
        std::size_t idx = 0;
        for (int k = 0; k < N; ++k)
            for (int q = k; q < N; ++q, ++idx)
                y[off_a + static_cast<Eigen::Index>(idx)] =
                    root2 * line[static_cast<std::size_t>(k)] * line[static_cast<std::size_t>(q)];
    }

    auto unpack = [&](const ode::State& s) {
        TwoExcitationState state;
        state.mode_count = N;
        state.c2 = s[0];
        state.e2 = s[1];
        state.r2 = s[2];
        state.cavity_line.assign(s.data() + off_c, s.data() + off_c + N);
        state.excited_line.assign(s.data() + off_e, s.data() + off_e + N);
        state.stored_line.assign(s.data() + off_r, s.data() + off_r + N);
        state.pairs.assign(s.data() + off_a, s.data() + off_a + static_cast<Eigen::Index>(triangle_size(N)));
        return state;
    };

    TwoExcitationResult result;
    const auto times = options.record_trajectory ? uniform_samples(grid) : std::vector<double>{};
    auto observe = [&](double t, const ode::State& s) {
        const auto state = unpack(s);
        result.trajectory.push_back({t, state.norm(), state.stored_population()});
    };
    result.stats = ode::integrate_dopri5(rhs, y, grid.t1, grid.t2, options_from(grid), times, observe);
    result.state = unpack(y);
    result.dissipated = y[dim - 1].real();
    result.eta_2 = result.state.stored_population();
    return result;
}

// --------------------------------------------------------- coherent input

EfficiencyPair coherent_efficiency_ladder(double n, double eta1, double eta2) {
    if (!(n >= 0.0)) throw InvalidParameter("coherent_efficiency_ladder: n must be non-negative");
    if (n == 0.0) return {0.0, eta1};
    const double eta = std::exp(-n) * (n * eta1 + 0.5 * n * n * eta2);
    return {eta, eta / n};
}

double no_jump_probability(double block1_norm, double block2_norm, double n) {
    if (!(n >= 0.0)) throw InvalidParameter("no_jump_probability: n must be non-negative");
    return std::exp(-n) * (1.0 + n * block1_norm + 0.5 * n * n * block2_norm);
}

double conditional_efficiency(double eta1, double eta2, double block1_norm, double block2_norm, double n) {
    const double p0 = no_jump_probability(block1_norm, block2_norm, n);
    return std::exp(-n) * (n * eta1 + 0.5 * n * n * eta2) / p0;
}

LadderResult solve_ladder(const PhysicalParams& params, const PulseEnvelope& env, const ControlField& ctrl,
                          const TimeGrid& grid, const ModeGrid& modes, const LadderOptions& options) {
    const auto amplitudes = mode_amplitudes(env, modes, grid.t1, grid.t2);
    LadderResult out;
    out.eta_1 = integrate_single_excitation_io(params, env, ctrl, grid, options).eta_1;
    const auto single = integrate_single_excitation_modes(params, modes, amplitudes.alpha, ctrl, grid, options);
    out.eta_1_modes = single.eta_1;
    out.norm_1 = single.state.norm();
    const auto pair = integrate_two_excitation(params, modes, amplitudes.alpha, ctrl, grid, options);
    out.eta_2 = pair.eta_2;
    out.norm_2 = pair.state.norm();
    return out;
}

}  // namespace wcpmem
