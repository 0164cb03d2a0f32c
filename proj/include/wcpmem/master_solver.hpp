#pragma once

#include <vector>

#include "wcpmem/fields.hpp"
#include "wcpmem/ode.hpp"
#include "wcpmem/operators.hpp"

namespace wcpmem {

/// Atom-cavity density matrix in the displaced frame at time t.
struct DensityState {
    HilbertSpace space;
    Matrix rho;
    double t = 0.0;

    /// |g, 0><g, 0|
    static DensityState ground(const HilbertSpace& space, double t);
};

/// eta = sum_m <r, m|rho|r, m>
double storage_efficiency(const DensityState& state);

/// Tr(rho a^dag a)
double intracavity_photons(const DensityState& state);

struct MasterSample {
    double t;
    double eta;
    double photons;
    double trace_defect;
};

struct MasterOptions {
    int m_max = 14;
    bool monitor_positivity = true;
    bool record_trajectory = false;
};

/// Gates applied to every diagnostic sample; breaking one aborts the run.
inline constexpr double kTraceGate = 1e-6;
inline constexpr double kPositivityGate = -1e-7;

struct MasterRunResult {
    DensityState final_state;
    double eta = 0.0;
    double nu = 0.0;           ///< eta / window norm (NaN for a vacuum input)
    double window_norm = 0.0;  ///< photons impinging within [t1, t2]
    double max_photons = 0.0;
    double max_trace_defect = 0.0;
    double max_hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;  ///< smallest over the samples (1 if unmonitored)
    int m_max = 0;
    bool truncation_warning = false;  ///< max <a^dag a> exceeded m_max - 3
    std::vector<MasterSample> trajectory;
    ode::Stats stats;
};

/// Integrates the displaced-frame master equation from |g,0><g,0| at t1 to t2.
MasterRunResult integrate_master(const PhysicalParams& params, const PulseEnvelope& env, const ControlField& ctrl,
                                 const TimeGrid& grid, const MasterOptions& options = {});

struct TruncationScan {
    std::vector<int> m_max;
    std::vector<double> eta;
    std::vector<double> max_photons;
    bool converged = false;
    /// First truncation whose eta differs from the previous entry by less than
    /// kTruncationTolerance; -1 when none does.
    int converged_m_max = -1;
};

inline constexpr double kTruncationTolerance = 1e-4;

TruncationScan truncation_scan(const PhysicalParams& params, const PulseEnvelope& env, const ControlField& ctrl,
                               const TimeGrid& grid, std::span<const int> m_list);

}  // namespace wcpmem
