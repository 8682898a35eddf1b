#include <cstdint>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "mfgstop_cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Mean-field optimal stopping: obstacle solver, equilibrium search and audits"};
    app.require_subcommand(1);

    mfgstop::cli::CommandOptions options;
    std::uint64_t seed = 0;
    const std::pair<const char*, const char*> commands[] = {
        {"solve-stop", "solve the single-agent stopping problem with the reward frozen at m = 0"},
        {"solve-mfg", "run the conditional-gradient equilibrium search"},
        {"verify", "re-check emitted artifacts against the invariant suite"},
        {"mc-check", "compare Monte Carlo paths with the forward measure of value.csv"},
    };
    for (const auto& [name, help] : commands) {
        const std::string cmd = name;
        auto* sub = app.add_subcommand(cmd, help);
        sub->add_option("--config", options.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", options.out, "artifact directory")->required();
        sub->add_option("--seed", seed, "seed for audits and Monte Carlo (overrides [mc] seed)");
        sub->add_flag("--quiet", options.quiet, "suppress progress output");
        sub->callback([&options, &seed, sub, cmd] {
            options.command = cmd;
            if (sub->count("--seed") > 0) options.seed = seed;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(mfgstop::cli::ExitCode::config_parse);
    }
    return static_cast<int>(mfgstop::cli::run_command(options, std::cout, std::cerr));
}
