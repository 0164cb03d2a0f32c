#include "wcpmem/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "wcpmem/errors.hpp"

namespace wcpmem::app {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!keys.count(key)) throw ConfigError("unknown key '" + where + key + "'");
    }
}

const json& require_object(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ConfigError(std::string("missing block '") + key + "'");
    const json& v = doc.at(key);
    if (!v.is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
    return v;
}

double number_at(const json& obj, const std::string& where, const char* key, std::optional<double> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing field '" + where + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("field '" + where + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("field '" + where + key + "' is not finite");
    return x;
}

int integer_at(const json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError("field '" + where + key + "' must be an integer");
    return v.get<int>();
}

std::string string_at(const json& obj, const std::string& where, const char* key, std::optional<std::string> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing field '" + where + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError("field '" + where + key + "' must be a string");
    return v.get<std::string>();
}

std::filesystem::path existing_file(const json& obj, const std::string& where, const std::filesystem::path& base) {
    if (!obj.contains("path")) throw ConfigError("missing field '" + where + "path'");
    std::filesystem::path p = string_at(obj, where, "path");
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::is_regular_file(p))
        throw ConfigError("field '" + where + "path' names a file that does not exist: " + p.string());
    return p;
}

// Either a list of numbers or {"from", "to", "count", "spacing": "log"|"linear"}.
std::vector<double> photon_numbers(const json& v) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError("'pulse.n' entries must be numbers");
            out.push_back(x.get<double>());
        }
    } else if (v.is_object()) {
        reject_unknown(v, "pulse.n.", {"from", "to", "count", "spacing"});
        const double a = number_at(v, "pulse.n.", "from");
        const double b = number_at(v, "pulse.n.", "to");
        const int count = integer_at(v, "pulse.n.", "count", 0);
        const std::string spacing = string_at(v, "pulse.n.", "spacing", std::string("log"));
        if (count < 1) throw ConfigError("'pulse.n.count' must be positive");
        if (spacing != "log" && spacing != "linear") throw ConfigError("'pulse.n.spacing' must be log or linear");
        if (spacing == "log" && (a <= 0.0 || b <= 0.0)) throw ConfigError("log-spaced 'pulse.n' needs positive bounds");
        for (int i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            out.push_back(spacing == "log" ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a));
        }
    } else {
        throw ConfigError("'pulse.n' must be a number, a list or a range object");
    }
    if (out.empty()) throw ConfigError("'pulse.n' sweep list is empty");
    for (double n : out)
        if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("'pulse.n' entries must be positive");
    return out;
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    std::string pointer;
    std::size_t start = 0;
    while (start <= key.size()) {
        const auto dot = key.find('.', start);
        pointer += "/" + key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    doc[json::json_pointer(pointer)] = value;
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(doc, "", {"units", "params", "pulse", "control", "grid", "modes", "solver", "m_max", "ladder",
                             "compare", "output", "jobs", "force", "comment"});

    if (!doc.contains("units")) throw ConfigError("missing field 'units' (expected \"MHz,us\")");
    if (string_at(doc, "", "units") != "MHz,us") throw ConfigError("field 'units' must be \"MHz,us\"");

    RunConfig cfg;

    const json& p = require_object(doc, "params");
    reject_unknown(p, "params.", {"g", "kappa", "gamma", "kappa_loss", "Delta", "delta"});
    cfg.params = PhysicalParams::from_mhz(number_at(p, "params.", "g"), number_at(p, "params.", "kappa"),
                                          number_at(p, "params.", "gamma"), number_at(p, "params.", "kappa_loss", 0.0),
                                          number_at(p, "params.", "Delta", 0.0), number_at(p, "params.", "delta", 0.0));
    try {
        cfg.params.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }

    const json& pulse = require_object(doc, "pulse");
    reject_unknown(pulse, "pulse.", {"shape", "n", "Tc", "t0", "path"});
    cfg.pulse.shape = string_at(pulse, "pulse.", "shape", std::string("sech"));
    if (!pulse.contains("n")) throw ConfigError("missing field 'pulse.n'");
    cfg.pulse.n = photon_numbers(pulse.at("n"));
    if (pulse.contains("Tc")) cfg.pulse.Tc = number_at(pulse, "pulse.", "Tc");
    cfg.pulse.t0 = number_at(pulse, "pulse.", "t0", 0.0);
    if (cfg.pulse.shape == "sech" || cfg.pulse.shape == "gaussian") {
        if (!cfg.pulse.Tc) throw ConfigError("missing field 'pulse.Tc'");
    } else if (cfg.pulse.shape == "tabulated") {
        cfg.pulse.path = existing_file(pulse, "pulse.", base_dir);
    } else {
        throw ConfigError("field 'pulse.shape' must be sech, gaussian or tabulated");
    }
    if (cfg.pulse.Tc && !(*cfg.pulse.Tc > 0.0)) throw ConfigError("field 'pulse.Tc' must be positive");

    if (doc.contains("control")) {
        const json& c = require_object(doc, "control");
        reject_unknown(c, "control.", {"type", "path"});
        cfg.control.type = string_at(c, "control.", "type", std::string("optimal-sech"));
        if (cfg.control.type == "tabulated")
            cfg.control.path = existing_file(c, "control.", base_dir);
        else if (cfg.control.type != "optimal-sech")
            throw ConfigError("field 'control.type' must be optimal-sech or tabulated");
    }
    if (cfg.control.type == "optimal-sech" && cfg.pulse.shape != "sech")
        throw ConfigError("'control.type' optimal-sech is only defined for a sech pulse; give a tabulated control");

    if (doc.contains("grid")) {
        const json& g = require_object(doc, "grid");
        reject_unknown(g, "grid.", {"t1_over_Tc", "t2_over_Tc", "rel_tol", "abs_tol", "max_step", "samples"});
        cfg.t1_over_tc = number_at(g, "grid.", "t1_over_Tc", cfg.t1_over_tc);
        cfg.t2_over_tc = number_at(g, "grid.", "t2_over_Tc", cfg.t2_over_tc);
        cfg.rel_tol = number_at(g, "grid.", "rel_tol", cfg.rel_tol);
        cfg.abs_tol = number_at(g, "grid.", "abs_tol", cfg.abs_tol);
        cfg.max_step = number_at(g, "grid.", "max_step", cfg.max_step);
        cfg.diagnostic_samples = integer_at(g, "grid.", "samples", cfg.diagnostic_samples);
    }
    if (!(cfg.t2_over_tc > cfg.t1_over_tc)) throw ConfigError("'grid.t2_over_Tc' must exceed 'grid.t1_over_Tc'");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) throw ConfigError("grid tolerances must be positive");
    if (cfg.max_step < 0.0) throw ConfigError("'grid.max_step' must be non-negative");
    if (cfg.diagnostic_samples < 2) throw ConfigError("'grid.samples' must be at least 2");

    if (doc.contains("modes")) {
        const json& m = require_object(doc, "modes");
        reject_unknown(m, "modes.", {"N", "L_over_cTc"});
        cfg.mode_count = integer_at(m, "modes.", "N", cfg.mode_count);
        cfg.length_over_ctc = number_at(m, "modes.", "L_over_cTc", cfg.length_over_ctc);
    }
    if (cfg.mode_count < 3 || cfg.mode_count % 2 == 0) throw ConfigError("'modes.N' must be an odd integer >= 3");
    if (!(cfg.length_over_ctc > 0.0)) throw ConfigError("'modes.L_over_cTc' must be positive");

    const std::string solver = string_at(doc, "", "solver", std::string("master"));
    if (solver == "master")
        cfg.solver = SolverChoice::master;
    else if (solver == "ladder")
        cfg.solver = SolverChoice::ladder;
    else if (solver == "both")
        cfg.solver = SolverChoice::both;
    else
        throw ConfigError("field 'solver' must be master, ladder or both");

    cfg.m_max = integer_at(doc, "", "m_max", cfg.m_max);
    if (cfg.m_max < 1) throw ConfigError("'m_max' must be at least 1");

    if (doc.contains("ladder")) {
        const json& l = require_object(doc, "ladder");
        reject_unknown(l, "ladder.", {"n_cap"});
        cfg.ladder_n_cap = number_at(l, "ladder.", "n_cap", cfg.ladder_n_cap);
    }
    if (doc.contains("compare")) {
        const json& c = require_object(doc, "compare");
        reject_unknown(c, "compare.", {"gate"});
        cfg.compare_gate = number_at(c, "compare.", "gate", cfg.compare_gate);
    }

    if (doc.contains("output")) {
        const json& o = require_object(doc, "output");
        reject_unknown(o, "output.", {"dir", "pulse_samples", "trajectories"});
        cfg.out_dir = string_at(o, "output.", "dir", cfg.out_dir.string());
        cfg.pulse_samples = integer_at(o, "output.", "pulse_samples", cfg.pulse_samples);
        if (o.contains("trajectories")) {
            if (!o.at("trajectories").is_boolean()) throw ConfigError("field 'output.trajectories' must be true or false");
            cfg.trajectories = o.at("trajectories").get<bool>();
        }
    }
    if (cfg.pulse_samples < 2) throw ConfigError("'output.pulse_samples' must be at least 2");

    cfg.jobs = integer_at(doc, "", "jobs", cfg.jobs);
    if (cfg.jobs < 1) throw ConfigError("'jobs' must be at least 1");
    if (doc.contains("force")) {
        if (!doc.at("force").is_boolean()) throw ConfigError("field 'force' must be true or false");
        cfg.force = doc.at("force").get<bool>();
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration " + path.string());
    json doc = json::parse(in, nullptr, false, /*ignore_comments=*/true);
    if (doc.is_discarded()) throw ConfigError("configuration " + path.string() + " is not valid JSON");
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_config(doc, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

Scenario build_scenario(const RunConfig& config) {
    const PhysicalParams& params = config.params;

    std::optional<PulseEnvelope> unit;
    double Tc = config.pulse.Tc.value_or(0.0);
    if (config.pulse.shape == "sech") {
        unit = sech_envelope(1.0, sech_width_for_coherence_time(Tc));
    } else if (config.pulse.shape == "gaussian") {
        unit = gaussian_envelope(1.0, Tc, config.pulse.t0);
    } else {
        const PulseEnvelope raw = tabulated_envelope(read_curve_csv(config.pulse.path));
        if (!config.pulse.Tc) {
            const auto& curve = std::get<TabulatedShape>(raw.shape()).samples;
            TimeGrid span;
            span.t1 = curve.times().front();
            span.t2 = curve.times().back();
            Tc = coherence_time(raw, span);
        }
        unit = raw.with_photon_number(1.0);
    }

    TimeGrid grid;
    grid.t1 = config.t1_over_tc * Tc;
    grid.t2 = config.t2_over_tc * Tc;
    grid.rel_tol = config.rel_tol;
    grid.abs_tol = config.abs_tol;
    grid.max_step = config.max_step;
    grid.samples = config.diagnostic_samples;

    const ControlField control = config.control.type == "tabulated"
                                     ? tabulated_control(read_curve_csv(config.control.path))
                                     : optimal_control_sech(params, sech_width_for_coherence_time(Tc));

    return Scenario{config, *unit, control, Tc, grid,
                    ModeGrid::standard(Tc, params.kappa, config.mode_count, config.length_over_ctc)};
}

}  // namespace wcpmem::app
