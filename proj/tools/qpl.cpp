// qpl: verification suites, growth simulations, limit-shape tables and exact
// push-forward distributions for the q-deformed Plancherel growth process.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qpl/commands.hpp"
#include "qpl/config.hpp"

namespace {

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

constexpr Flag kFlags[] = {
    {"--q", "q", "deformation parameter in (0,1)"},
    {"--n", "n", "number of boxes (simulate) or level (pushforward)"},
    {"--trials", "trials", "number of independent trajectories"},
    {"--moments", "moments", "number of moments N"},
    {"--seed", "seed", "64-bit RNG seed"},
    {"--format", "format", "csv or json"},
    {"--out", "out", "output path (default: standard output)"},
    {"--scaling", "scaling", "simulate: limit (kernel at q^(1/sqrt n)) or fixed (kernel at q)"},
    {"--tolerance", "tolerance", "verify: replace every check tolerance"},
    {"--x-min", "x_min", "limit-shape: first x of the R table"},
    {"--x-max", "x_max", "limit-shape: last x of the R table"},
    {"--x-points", "x_points", "limit-shape: number of x values"},
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"q-deformed Plancherel growth: verify, simulate, limit-shape, pushforward"};
    app.require_subcommand(1);

    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;
    std::map<std::string, CLI::App*> commands;

    for (const char* name : {"verify", "simulate", "limit-shape", "pushforward"}) {
        CLI::App* sub = app.add_subcommand(name);
        commands[name] = sub;
        sub->add_option("--config", config_path, "key=value file, or a previous output to reproduce");
        for (const auto& flag : kFlags) {
            auto* opt = sub->add_option(flag.name, values[std::string(name) + flag.key], flag.help);
            options[std::string(name) + flag.key] = opt;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qpl::kExitConfig;
    }

    std::string command;
    for (const auto& [name, sub] : commands)
        if (sub->parsed()) command = name;

    qpl::RunConfig cfg;
    try {
        if (!config_path.empty()) qpl::apply_entries(cfg, qpl::load_config_file(config_path));
        qpl::ConfigEntries overrides{{"command", command}};
        for (const auto& flag : kFlags) {
            const std::string id = command + flag.key;
            if (options[id]->count() > 0) overrides.emplace_back(flag.key, values[id]);
        }
        qpl::apply_entries(cfg, overrides);
        qpl::validate(cfg);
    } catch (const qpl::Error& e) {
        std::cerr << "qpl: config error: " << e.what() << "\n";
        return qpl::kExitConfig;
    }

    try {
        const auto result = qpl::run_command(cfg);
        qpl::write_output(cfg, result.text);
        std::cerr << "qpl: " << result.message << "\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "qpl " << command << ": " << e.what() << "\n";
        return qpl::exit_code_for(e);
    }
}
