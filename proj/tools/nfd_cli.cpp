#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nfd/cli.hpp"

int main(int argc, char** argv) {
    using namespace nfd::cli;
    CLI::App app{"Near-field dephasing of electron interference"};
    app.fallthrough();
    std::string config_path, out_path, psi_dump;
    double tol = 0.0;
    unsigned threads = 0;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "write CSV/JSON here instead of stdout");
    app.add_option("--tol", tol, "relative quadrature tolerance");
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
    app.add_option("--psi-dump", psi_dump, "also write the Psi grid (z,y,psi1,psi2) as CSV");
    const std::map<std::string, std::string> about{
        {"spectrum", "near-field spectral density S(omega, d)"},
        {"kernel", "-Im g on a wave-vector, distance or frequency sweep"},
        {"dephase", "dephasing exponent K: full, dipole and asymptotic"},
        {"regimes", "velocity intervals, crossover distance and enhancement for a conductor"},
        {"reproduce", "built-in order-of-magnitude estimates (JSON)"},
        {"validate", "invariant suites (JSON); exit 1 if any fails"}};
    for (const auto& name : commands()) app.add_subcommand(name, about.at(name))->fallthrough();
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    if (auto subs = app.get_subcommands(); !subs.empty()) {
        const std::string name = subs.front()->get_name();
        if (!cfg.command.empty() && cfg.command != name)
            std::cerr << "note: command '" << cfg.command << "' in config overridden by '" << name << "'\n";
        cfg.command = name;
    }
    if (!out_path.empty()) cfg.out = out_path;
    if (!psi_dump.empty()) cfg.psi_dump = psi_dump;
    if (app.count("--tol")) cfg.rel_tol = tol;
    if (app.count("--threads")) cfg.threads = threads;
    if (cfg.command.empty()) {
        std::cerr << "config error: no command given\n" << app.help();
        return config_error;
    }
    return run(cfg, std::cout, std::cerr);
}
