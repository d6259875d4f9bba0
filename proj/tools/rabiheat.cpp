#include "rabiheat/config.hpp"
#include "rabiheat/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

namespace
{

enum Exit
{
    ok = 0,
    config_error = 1,
    all_failed = 2
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steady-state heat transport through a qubit-resonator junction"};
    app.set_version_flag("--version", rabiheat::version());

    std::string config_path, preset_name, mode, out_path, format;
    std::size_t threads = 1;
    bool seedless = false;
    bool print_config = false;

    auto* cfg_opt = app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    auto* preset_opt = app.add_option("--preset", preset_name, "named protocol: fig3, fig4a, fig4b, bias, fig5, fig6, fig7");
    cfg_opt->excludes(preset_opt);
    app.add_option("--mode", mode, "override the solver: fsme or psme")->check(CLI::IsMember({"fsme", "psme"}));
    app.add_option("--out", out_path, "output file ('-' for stdout)");
    app.add_option("--format", format, "csv, json or gnuplot")->check(CLI::IsMember({"csv", "json", "gnuplot"}));
    app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
    app.add_flag("--seedless", seedless, "accepted for compatibility; nothing here is random")->disable_flag_override();
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::config_error;
    }

    rabiheat::RunConfig config;
    try {
        if (!cfg_opt->count() && !preset_opt->count()) throw rabiheat::ConfigError("", "give --config or --preset");
        config = cfg_opt->count() ? rabiheat::load_config(config_path) : rabiheat::preset(preset_name);
        if (!mode.empty()) config.sweep.fixed.mode = mode == "psme" ? rabiheat::SolverMode::psme : rabiheat::SolverMode::fsme;
        if (!format.empty()) config.format = rabiheat::output_format_from_string(format);
        if (!out_path.empty()) config.output = out_path;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "rabiheat: " << e.what() << '\n';
        return Exit::config_error;
    }

    if (print_config) {
        std::cout << rabiheat::to_json(config).dump(2) << '\n';
        return Exit::ok;
    }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const rabiheat::RunReport report = rabiheat::run(config, threads);

    try {
        if (config.output == "-") {
            rabiheat::emit(std::cout, config.format, config, report);
        } else {
            std::ofstream out(config.output);
            if (!out) throw std::runtime_error("cannot open '" + config.output + "' for writing");
            rabiheat::emit(out, config.format, config, report);
            std::ofstream side(config.output + ".manifest.json");
            if (!side) throw std::runtime_error("cannot write the run manifest");
            side << rabiheat::manifest(config, report, true).dump(2) << '\n';
            if (!out || !side) throw std::runtime_error("write failed");
        }
    } catch (const std::exception& e) {
        std::cerr << "rabiheat: " << e.what() << '\n';
        return Exit::config_error;
    }

    for (const auto& row : report.rows)
        if (!row.outcome.error.empty())
            std::cerr << "rabiheat: curve " << row.curve << " point " << row.index << ": " << row.outcome.error << '\n';
    return report.all_failed() ? Exit::all_failed : Exit::ok;
}
