#pragma once

// Pure-state storage dynamics under the effective (no-jump) Hamiltonian,
// resolved by total excitation number. The one-excitation block is solved
// either with explicit line modes or in the input-output reduction; the
// two-excitation block always carries explicit modes.

#include <algorithm>
#include <vector>

#include "wcpmem/fields.hpp"
#include "wcpmem/metrics.hpp"
#include "wcpmem/ode.hpp"

namespace wcpmem {

/// Index of (k, q), k <= q, in a row-major packed upper triangle of an N x N
/// symmetric array.
inline std::size_t triangle_index(int N, int k, int q) {
    const auto kk = static_cast<std::size_t>(k);
    return kk * static_cast<std::size_t>(N) - kk * (kk - 1) / 2 + static_cast<std::size_t>(q - k);
}

inline std::size_t triangle_size(int N) { return static_cast<std::size_t>(N) * static_cast<std::size_t>(N + 1) / 2; }

struct LadderInitial {
    std::vector<cplx> single;  ///< E_k, unit norm
    std::vector<cplx> pair;    ///< E_{k,k'} for k <= k' (packed upper triangle)
    int mode_count = 0;

    cplx pair_at(int k, int q) const { return pair[triangle_index(mode_count, std::min(k, q), std::max(k, q))]; }
};

/// Photon-number components of a coherent state with mode amplitudes alpha:
/// E_k = alpha_k / sqrt(n), E_{k,k'} = E_k E_{k'} / sqrt 2. The amplitudes are
/// normalized by their own squared sum, which must agree with n within 1e-3
/// relative. Throws InvalidParameter for n = 0.
LadderInitial ladder_initial_conditions(std::span<const cplx> alpha, double n);

/// One excitation: cavity photon with atom in g, atom in e, atom in r, and
/// (optionally) one photon in line mode k.
struct SingleExcitationState {
    cplx c1{}, e1{}, r1{};
    std::vector<cplx> modes;

    double norm() const;
};

/// Two excitations. `pairs` holds A_{k,k'} = E_{k,k'} + E_{k',k} on the
/// packed upper triangle; the two-photon line component is
/// (1/2) sum_{k,k'} A_{k,k'} b_k^dag b_k'^dag |vac>.
struct TwoExcitationState {
    int mode_count = 0;
    cplx c2{}, e2{}, r2{};
    std::vector<cplx> cavity_line;  ///< |g, 1, 1_k>
    std::vector<cplx> excited_line; ///< |e, 0, 1_k>
    std::vector<cplx> stored_line;  ///< |r, 0, 1_k>
    std::vector<cplx> pairs;

    double norm() const;
    /// |r2|^2 + sum_k |E_k^r|^2: probability that the atom ends in |r>.
    double stored_population() const;
    cplx pair_amplitude(int k, int q) const { return pairs[triangle_index(mode_count, std::min(k, q), std::max(k, q))]; }
};

struct LadderSample {
    double t;
    double norm;
    double eta;  ///< population of |r> in this block
};

struct LadderOptions {
    bool record_trajectory = false;
    /// Budget for the integrator's working set of the two-excitation block.
    std::size_t memory_limit_bytes = std::size_t{4} << 30;
};

struct SingleExcitationResult {
    SingleExcitationState state;
    double eta_1 = 0.0;
    /// Norm removed by gamma and kappa_loss, integrated alongside the state
    /// (explicit-mode variant only).
    double dissipated = 0.0;
    std::vector<LadderSample> trajectory;
    ode::Stats stats;
};

struct TwoExcitationResult {
    TwoExcitationState state;
    double eta_2 = 0.0;
    double dissipated = 0.0;
    std::vector<LadderSample> trajectory;
    ode::Stats stats;
};

/// Input-output form: the line is eliminated in favour of the drive
/// sqrt(2 kappa) E(t)/sqrt(n) and radiative damping kappa on the cavity.
SingleExcitationResult integrate_single_excitation_io(const PhysicalParams& params, const PulseEnvelope& env,
                                                      const ControlField& ctrl, const TimeGrid& grid,
                                                      const LadderOptions& options = {});

/// Explicit line modes. `alpha` are the coherent amplitudes referenced to
/// t = 0 (as returned by mode_amplitudes); they are propagated freely to t1.
SingleExcitationResult integrate_single_excitation_modes(const PhysicalParams& params, const ModeGrid& modes,
                                                         std::span<const cplx> alpha, const ControlField& ctrl,
                                                         const TimeGrid& grid, const LadderOptions& options = {});

/// Bytes the integrator needs for a two-excitation block with N modes.
std::size_t two_excitation_memory_estimate(int mode_count);

/// Throws CapacityError (naming the largest N that fits) when the estimate
/// exceeds options.memory_limit_bytes.
TwoExcitationResult integrate_two_excitation(const PhysicalParams& params, const ModeGrid& modes,
                                             std::span<const cplx> alpha, const ControlField& ctrl,
                                             const TimeGrid& grid, const LadderOptions& options = {});

/// Poisson-weighted sum truncated at two photons:
/// eta = exp(-n) (n eta1 + n^2/2 eta2), nu = eta / n (-> eta1 as n -> 0).
EfficiencyPair coherent_efficiency_ladder(double n, double eta1, double eta2);

/// Probability of the no-jump trajectory for a coherent input, from the
/// final squared norms of the one- and two-excitation blocks.
double no_jump_probability(double block1_norm, double block2_norm, double n);

/// Population of |r> in the normalized no-jump state; multiplying by the
/// no-jump probability returns coherent_efficiency_ladder(n, ...).eta.
double conditional_efficiency(double eta1, double eta2, double block1_norm, double block2_norm, double n);

struct LadderResult {
    double eta_1 = 0.0;        ///< single-photon storage efficiency (input-output form)
    double eta_1_modes = 0.0;  ///< the same from the explicit-mode block
    double eta_2 = 0.0;
    double norm_1 = 0.0;  ///< final squared norm of the explicit-mode one-excitation block
    double norm_2 = 0.0;

    EfficiencyPair coherent(double n) const { return coherent_efficiency_ladder(n, eta_1, eta_2); }
    EfficiencyPair series(double n) const { return series_eta(n, eta_1, eta_2); }
};

/// eta^(1) from the input-output block and eta^(2) from the explicit-mode
/// two-excitation block, both for the normalized shape of `env`. The
/// explicit-mode one-excitation block is also run for its norm.
LadderResult solve_ladder(const PhysicalParams& params, const PulseEnvelope& env, const ControlField& ctrl,
                          const TimeGrid& grid, const ModeGrid& modes, const LadderOptions& options = {});

}  // namespace wcpmem
