#include "wcpmem/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "wcpmem/errors.hpp"
#include "wcpmem/metrics.hpp"
#include "wcpmem/table.hpp"

namespace wcpmem::app {

using nlohmann::json;

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    const int workers = std::clamp(jobs, 1, count);
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string cell(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

json maybe(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

std::string number_label(double n) { return format_number(n); }

bool ladder_allowed(const RunConfig& cfg, double n) { return cfg.force || n <= cfg.ladder_n_cap; }

MasterOptions master_options(const RunConfig& cfg) {
    MasterOptions o;
    o.m_max = cfg.m_max;
    o.record_trajectory = cfg.trajectories;
    return o;
}

json params_json(const PhysicalParams& p) {
    return {{"g", p.g}, {"kappa", p.kappa}, {"gamma", p.gamma}, {"kappa_loss", p.kappa_loss},
            {"Delta", p.Delta}, {"delta", p.delta}, {"units", "rad/us"}};
}

json ladder_json(const LadderResult& l) {
    return {{"eta_1", l.eta_1}, {"eta_1_modes", l.eta_1_modes}, {"eta_2", l.eta_2}, {"norm_1", l.norm_1},
            {"norm_2", l.norm_2}};
}

}  // namespace

bool SweepResult::success() const {
    if (!ladder_error.empty()) return false;
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
}

SweepResult run_sweep(const Scenario& sc) {
    const RunConfig& cfg = sc.config;
    const bool use_master = cfg.solver != SolverChoice::ladder;
    bool use_ladder = cfg.solver != SolverChoice::master;

    SweepResult result;
    for (double n : cfg.pulse.n) {
        SweepRow row;
        row.n = n;
        result.rows.push_back(row);
    }

    if (use_ladder && std::none_of(cfg.pulse.n.begin(), cfg.pulse.n.end(), [&](double n) { return ladder_allowed(cfg, n); })) {
        use_ladder = false;
        result.notes.push_back("no photon number within the ladder cap; ladder not run");
    }

    // Task 0 is the ladder (the longest job) when requested; the rest are master rows.
    const int offset = use_ladder ? 1 : 0;
    const int tasks = offset + (use_master ? static_cast<int>(result.rows.size()) : 0);
    parallel_for(tasks, cfg.jobs, [&](int task) {
        if (task < offset) {
            try {
                result.ladder = solve_ladder(cfg.params, sc.unit_envelope, sc.control, sc.grid, sc.modes);
            } catch (const std::exception& e) {
                result.ladder_error = e.what();
            }
            return;
        }
        SweepRow& row = result.rows[static_cast<std::size_t>(task - offset)];
        try {
            auto run = integrate_master(cfg.params, sc.envelope(row.n), sc.control, sc.grid, master_options(cfg));
            row.eta_master = run.eta;
            row.nu_master = run.nu;
            row.max_photons = run.max_photons;
            row.trace_defect = run.max_trace_defect;
            row.truncation_warning = run.truncation_warning;
            row.trajectory = std::move(run.trajectory);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    });

    for (auto& row : result.rows) {
        if (row.truncation_warning)
            result.notes.push_back("n = " + number_label(row.n) + ": peak photon number " +
                                   format_number(*row.max_photons) + " is close to m_max = " +
                                   std::to_string(cfg.m_max));
        if (!use_ladder || !ladder_allowed(cfg, row.n)) continue;
        if (!result.ladder) {
            row.ok = false;
            row.error = row.error.empty() ? "ladder: " + result.ladder_error : row.error;
            continue;
        }
        const auto coherent = result.ladder->coherent(row.n);
        row.eta_ladder = coherent.eta;
        row.nu_ladder = coherent.nu;
        row.eta_series = result.ladder->series(row.n).eta;
    }
    if (use_ladder && std::any_of(cfg.pulse.n.begin(), cfg.pulse.n.end(), [&](double n) { return !ladder_allowed(cfg, n); }))
        result.notes.push_back("ladder columns left empty for n > " + format_number(cfg.ladder_n_cap) +
                               " (two-excitation truncation; use --force to fill them)");
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream os;
    os << "n,eta_master,nu_master,eta_ladder,nu_ladder,eta_series,max_photons,trace_defect,status\n";
    for (const auto& r : result.rows) {
        os << format_number(r.n) << ',' << cell(r.eta_master) << ',' << cell(r.nu_master) << ','
           << cell(r.eta_ladder) << ',' << cell(r.nu_ladder) << ',' << cell(r.eta_series) << ','
           << cell(r.max_photons) << ',' << cell(r.trace_defect) << ',' << (r.ok ? "ok" : "failed") << '\n';
    }
    return os.str();
}

json sweep_summary(const Scenario& sc, const SweepResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) {
        json row = {{"n", r.n},
                    {"eta_master", maybe(r.eta_master)},
                    {"nu_master", maybe(r.nu_master)},
                    {"eta_ladder", maybe(r.eta_ladder)},
                    {"nu_ladder", maybe(r.nu_ladder)},
                    {"eta_series", maybe(r.eta_series)},
                    {"max_photons", maybe(r.max_photons)},
                    {"trace_defect", maybe(r.trace_defect)},
                    {"ok", r.ok}};
        if (!r.error.empty()) row["error"] = r.error;
        rows.push_back(row);
    }
    json s = {{"command", "sweep"},
              {"params", params_json(sc.config.params)},
              {"Tc", sc.Tc},
              {"window", {sc.grid.t1, sc.grid.t2}},
              {"m_max", sc.config.m_max},
              {"rows", rows},
              {"notes", result.notes},
              {"success", result.success()}};
    if (result.ladder) s["ladder"] = ladder_json(*result.ladder);
    if (!result.ladder_error.empty()) s["ladder_error"] = result.ladder_error;
    return s;
}

std::string pulse_csv(const Scenario& sc) {
    const PulseEnvelope env = sc.envelope(sc.config.pulse.n.front());
    const int M = sc.config.pulse_samples;
    std::ostringstream os;
    os << "t,re_E,im_E,re_omega,im_omega\n";
    for (int i = 0; i < M; ++i) {
        double t = i == M - 1 ? sc.grid.t2 : sc.grid.t1 + sc.grid.span() * i / (M - 1);
        t = std::stod(format_number(t));
        const cplx E = env(t);
        const cplx W = sc.control(t);
        os << format_number(t) << ',' << format_number(E.real()) << ',' << format_number(E.imag()) << ','
           << format_number(W.real()) << ',' << format_number(W.imag()) << '\n';
    }
    return os.str();
}

bool CompareReport::passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const CompareRow& r) { return r.error.empty() && r.pass.value_or(true); });
}

CompareReport compare_solvers(const Scenario& sc) {
    const RunConfig& cfg = sc.config;
    for (double n : cfg.pulse.n)
        if (!ladder_allowed(cfg, n))
            throw ConfigError("n = " + number_label(n) + " exceeds the ladder validity cap " +
                              format_number(cfg.ladder_n_cap) + "; pass --force to compare anyway");

    CompareReport report;
    report.gate = cfg.compare_gate;
    report.mode_count = sc.modes.size();
    report.half_mode_count = (sc.modes.size() - 1) / 2;
    if (report.half_mode_count % 2 == 0) report.half_mode_count += 1;
    for (double n : cfg.pulse.n) {
        CompareRow row;
        row.n = n;
        report.rows.push_back(row);
    }

    std::string ladder_error;
    std::string half_error;
    const int rows = static_cast<int>(report.rows.size());
    parallel_for(rows + 2, cfg.jobs, [&](int task) {
        if (task == 0) {
            try {
                report.ladder = solve_ladder(cfg.params, sc.unit_envelope, sc.control, sc.grid, sc.modes);
            } catch (const std::exception& e) {
                ladder_error = e.what();
            }
            return;
        }
        if (task == 1) {
            try {
                const ModeGrid half(report.half_mode_count, sc.modes.time_of_flight(), cfg.params.kappa);
                const auto amps = mode_amplitudes(sc.unit_envelope, half, sc.grid.t1, sc.grid.t2);
                report.eta_2_half = integrate_two_excitation(cfg.params, half, amps.alpha, sc.control, sc.grid).eta_2;
            } catch (const std::exception& e) {
                half_error = e.what();
            }
            return;
        }
        CompareRow& row = report.rows[static_cast<std::size_t>(task - 2)];
        try {
            MasterOptions o;
            o.m_max = cfg.m_max;
            row.eta_master = integrate_master(cfg.params, sc.envelope(row.n), sc.control, sc.grid, o).eta;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    for (auto& row : report.rows) {
        if (!report.ladder) {
            if (row.error.empty()) row.error = "ladder: " + ladder_error;
            continue;
        }
        row.eta_ladder = report.ladder->coherent(row.n).eta;
        if (!row.eta_master) continue;
        row.relative = std::abs(*row.eta_master - *row.eta_ladder) / *row.eta_master;
        if (row.n <= cfg.ladder_n_cap) row.pass = *row.relative < report.gate;
    }
    if (std::any_of(report.rows.begin(), report.rows.end(), [&](const CompareRow& r) { return r.n > cfg.ladder_n_cap; }))
        report.notes.push_back("rows with n > " + format_number(cfg.ladder_n_cap) +
                               " are outside the two-excitation truncation; the neglected m >= 3 terms enter at "
                               "O(n^3) and those rows carry no pass/fail");
    if (report.ladder && report.eta_2_half)
        report.notes.push_back("eta_2 at N = " + std::to_string(report.mode_count) + ": " +
                               format_number(report.ladder->eta_2) + ", at N = " +
                               std::to_string(report.half_mode_count) + " (same L): " +
                               format_number(*report.eta_2_half));
    if (!half_error.empty()) report.notes.push_back("coarse-grid eta_2 failed: " + half_error);
    return report;
}

std::string compare_csv(const CompareReport& report) {
    std::ostringstream os;
    os << "n,eta_master,eta_ladder,relative_discrepancy,gate\n";
    for (const auto& r : report.rows) {
        os << format_number(r.n) << ',' << cell(r.eta_master) << ',' << cell(r.eta_ladder) << ',' << cell(r.relative)
           << ',' << (!r.error.empty() ? "failed" : r.pass ? (*r.pass ? "PASS" : "FAIL") : "none") << '\n';
    }
    return os.str();
}

json compare_summary(const CompareReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row = {{"n", r.n},
                    {"eta_master", maybe(r.eta_master)},
                    {"eta_ladder", maybe(r.eta_ladder)},
                    {"relative_discrepancy", maybe(r.relative)},
                    {"pass", r.pass ? json(*r.pass) : json(nullptr)}};
        if (!r.error.empty()) row["error"] = r.error;
        rows.push_back(row);
    }
    json s = {{"command", "compare"},
              {"gate", report.gate},
              {"rows", rows},
              {"convergence",
               {{"N", report.mode_count},
                {"eta_2", report.ladder ? json(report.ladder->eta_2) : json(nullptr)},
                {"N_half", report.half_mode_count},
                {"eta_2_half", maybe(report.eta_2_half)}}},
              {"notes", report.notes},
              {"passed", report.passed()}};
    if (report.ladder) s["ladder"] = ladder_json(*report.ladder);
    return s;
}

json metrics_summary(const Scenario& sc) {
    const auto fom = figure_of_merit(sc.config.params, sc.Tc);
    return {{"command", "metrics"},
            {"C", fom.C},
            {"eta_max_sp", fom.eta_max_sp},
            {"gamma_Tc_C", fom.adiabaticity},
            {"adiabatic", fom.adiabaticity > kAdiabaticThreshold},
            {"Tc", sc.Tc},
            {"params", params_json(sc.config.params)}};
}

namespace {

std::filesystem::path prepare_out(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir;
}

}  // namespace

int command_sweep(const RunConfig& config, std::ostream& out) {
    const Scenario sc = build_scenario(config);
    const SweepResult result = run_sweep(sc);
    const auto dir = prepare_out(config);
    write_text(dir / "sweep.csv", sweep_csv(result));
    const json summary = sweep_summary(sc, result);
    write_text(dir / "sweep.json", summary.dump(2) + "\n");
    if (config.trajectories) {
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            const auto& row = result.rows[i];
            if (row.trajectory.empty()) continue;
            std::ostringstream os;
            os << "t,eta,photons,trace_defect\n";
            for (const auto& s : row.trajectory)
                os << format_number(s.t) << ',' << format_number(s.eta) << ',' << format_number(s.photons) << ','
                   << format_number(s.trace_defect) << '\n';
            write_text(dir / ("trajectory_" + std::to_string(i) + ".csv"), os.str());
        }
    }
    out << summary.dump(2) << '\n';
    return result.success() ? 0 : 1;
}

int command_pulse(const RunConfig& config, std::ostream& out) {
    const Scenario sc = build_scenario(config);
    const auto dir = prepare_out(config);
    write_text(dir / "pulse.csv", pulse_csv(sc));
    out << json{{"command", "pulse"}, {"n", config.pulse.n.front()}, {"samples", config.pulse_samples},
                {"file", (dir / "pulse.csv").string()}}
               .dump(2)
        << '\n';
    return 0;
}

int command_compare(const RunConfig& config, std::ostream& out) {
    const Scenario sc = build_scenario(config);
    const CompareReport report = compare_solvers(sc);
    const auto dir = prepare_out(config);
    write_text(dir / "compare.csv", compare_csv(report));
    const json summary = compare_summary(report);
    write_text(dir / "compare.json", summary.dump(2) + "\n");
    out << summary.dump(2) << '\n';
    return report.passed() ? 0 : 1;
}

int command_metrics(const RunConfig& config, std::ostream& out) {
    const Scenario sc = build_scenario(config);
    out << metrics_summary(sc).dump(2) << '\n';
    return 0;
}

}  // namespace wcpmem::app
