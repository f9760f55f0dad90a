#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <thread>

#include "run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spherent: collective decay and entanglement of two atoms near a microsphere"};
    app.footer(spherent::cli::csv_schema_help());
    app.require_subcommand(1);

    spherent::cli::RunRequest req;
    req.threads = std::max(1u, std::thread::hardware_concurrency());

    const std::pair<const char*, const char*> commands[] = {
        {"resonances", "list field resonances in a frequency window"},
        {"rates", "sweep the collective decay rates over theta, omega or delta_r"},
        {"dynamics", "sample the amplitudes C+(t), C-(t)"},
        {"entangle", "rates, drive, amplitudes, steady state and concurrence per sweep point"},
        {"figure2", "cross rate vs theta at omega = 1.0501"},
        {"figure3", "rates vs omega near the surface-guided resonance"},
        {"figure4", "rates vs omega below the band gap"},
        {"figure5", "rates vs delta_r at omega = 1.0501"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        const bool figure = std::string(name).rfind("figure", 0) == 0;
        auto* opt = sub->add_option("--config", req.config_path, "configuration file (key = value lines)");
        if (!figure) {
            opt->required();
        }
        sub->add_option("--out", req.out_path, "output CSV path (default: output.path, else stdout)");
        sub->add_option("--threads", req.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
        sub->callback([&req, name = std::string(name)] { req.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return spherent::cli::run(req, std::cout, std::cerr);
}
