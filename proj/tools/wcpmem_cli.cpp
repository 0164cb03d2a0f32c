#include <iostream>

#include <CLI11.hpp>

#include "wcpmem/app/commands.hpp"
#include "wcpmem/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Weak-coherent-pulse storage in a single-atom cavity memory"};
    app.require_subcommand(1);

    std::string config_path;
    int jobs = 0;
    bool force = false;
    std::string out_dir;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--jobs", jobs, "worker threads for sweep points")->check(CLI::PositiveNumber);
        sub->add_flag("--force", force, "allow ladder predictions beyond the validity cap");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--set", overrides, "override a config key, e.g. --set pulse.Tc=0.4");
    };
    auto* sweep = app.add_subcommand("sweep", "efficiency and fidelity over the photon-number list");
    auto* pulse = app.add_subcommand("pulse", "dump the input envelope and control field");
    auto* compare = app.add_subcommand("compare", "master equation against the two-excitation ladder");
    auto* metrics = app.add_subcommand("metrics", "cooperativity and single-photon bounds");
    for (auto* sub : {sweep, pulse, compare, metrics}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help prints and exits 0; every usage error exits 2 like a bad config.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (jobs > 0) overrides.push_back("jobs=" + std::to_string(jobs));
        if (force) overrides.push_back("force=true");
        wcpmem::app::RunConfig config = wcpmem::app::load_config(config_path, overrides);
        if (!out_dir.empty()) config.out_dir = out_dir;

        if (*sweep) return wcpmem::app::command_sweep(config, std::cout);
        if (*pulse) return wcpmem::app::command_pulse(config, std::cout);
        if (*compare) return wcpmem::app::command_compare(config, std::cout);
        return wcpmem::app::command_metrics(config, std::cout);
    } catch (const wcpmem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
