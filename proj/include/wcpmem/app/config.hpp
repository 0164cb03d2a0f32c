#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcpmem/fields.hpp"
#include "wcpmem/params.hpp"

namespace wcpmem::app {

enum class SolverChoice { master, ladder, both };

struct PulseConfig {
    std::string shape = "sech";  ///< sech | gaussian | tabulated
    std::vector<double> n;       ///< photon numbers to sweep
    std::optional<double> Tc;    ///< required for closed forms
    double t0 = 0.0;             ///< gaussian centre
    std::filesystem::path path;  ///< tabulated envelope (shape is rescaled to each n)
};

struct ControlConfig {
    std::string type = "optimal-sech";  ///< optimal-sech | tabulated
    std::filesystem::path path;
};

/// A complete run description. Rates in the file are in MHz (converted to
/// rad/us here), times in us; the file must declare `"units": "MHz,us"`.
struct RunConfig {
    PhysicalParams params;
    PulseConfig pulse;
    ControlConfig control;

    double t1_over_tc = -6.0;
    double t2_over_tc = 6.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.0;
    int diagnostic_samples = 241;

    int mode_count = 311;
    double length_over_ctc = 12.0;

    SolverChoice solver = SolverChoice::master;
    int m_max = 14;
    /// Upper photon number for ladder predictions unless forced.
    double ladder_n_cap = 0.3;
    /// Relative master-ladder gate used by `compare`.
    double compare_gate = 0.02;
    int pulse_samples = 1201;
    /// Also write per-sample master trajectories (t, eta, photons, trace defect).
    bool trajectories = false;

    std::filesystem::path out_dir = "out";
    int jobs = 1;
    bool force = false;
};

/// Applies `key.path=value` overrides (value parsed as JSON when possible).
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Parses and validates. Relative file paths resolve against `base_dir`.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Objects derived from a configuration.
struct Scenario {
    RunConfig config;
    PulseEnvelope unit_envelope;  ///< shape normalized to one photon
    ControlField control;
    double Tc;
    TimeGrid grid;
    ModeGrid modes;

    PulseEnvelope envelope(double n) const { return unit_envelope.with_photon_number(n); }
};

Scenario build_scenario(const RunConfig& config);

}  // namespace wcpmem::app
