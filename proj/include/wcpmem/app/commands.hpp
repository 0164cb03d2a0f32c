#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcpmem/app/config.hpp"
#include "wcpmem/ladder_solver.hpp"
#include "wcpmem/master_solver.hpp"

namespace wcpmem::app {

/// Runs fn(0) .. fn(count-1) on up to `jobs` threads. Exceptions escaping fn
/// are rethrown (the first one) after all workers finish.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

struct SweepRow {
    double n = 0.0;
    std::optional<double> eta_master, nu_master, eta_ladder, nu_ladder, eta_series, max_photons, trace_defect;
    bool ok = true;
    std::string error;
    bool truncation_warning = false;
    std::vector<MasterSample> trajectory;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<LadderResult> ladder;
    std::string ladder_error;
    std::vector<std::string> notes;

    bool success() const;
};

SweepResult run_sweep(const Scenario& scenario);

/// n, eta_master, nu_master, eta_ladder, nu_ladder, eta_series, max_photons,
/// trace_defect, status. Cells that were not computed are left empty.
std::string sweep_csv(const SweepResult& result);
nlohmann::json sweep_summary(const Scenario& scenario, const SweepResult& result);

/// t, re_E, im_E, re_omega, im_omega at output.pulse_samples uniform times
/// for the first photon number of the sweep. Sample times are rounded to
/// their printed form so a dumped control reads back onto the same nodes.
std::string pulse_csv(const Scenario& scenario);

struct CompareRow {
    double n = 0.0;
    std::optional<double> eta_master, eta_ladder, relative;
    std::optional<bool> pass;  ///< empty outside the ladder validity range
    std::string error;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double gate = 0.02;
    std::optional<LadderResult> ladder;
    int mode_count = 0;
    int half_mode_count = 0;
    std::optional<double> eta_2_half;  ///< eta^(2) on the coarser grid, same L
    std::vector<std::string> notes;

    bool passed() const;
};

/// Throws ConfigError when an n exceeds the ladder cap and force is off.
CompareReport compare_solvers(const Scenario& scenario);

std::string compare_csv(const CompareReport& report);
nlohmann::json compare_summary(const CompareReport& report);

nlohmann::json metrics_summary(const Scenario& scenario);

/// Subcommand drivers: write files under config.out_dir, print a summary to
/// `out`, return the process exit code.
int command_sweep(const RunConfig& config, std::ostream& out);
int command_pulse(const RunConfig& config, std::ostream& out);
int command_compare(const RunConfig& config, std::ostream& out);
int command_metrics(const RunConfig& config, std::ostream& out);

}  // namespace wcpmem::app
