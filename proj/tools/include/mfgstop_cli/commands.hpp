#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace mfgstop::cli {

enum class ExitCode : int {
    ok = 0,
    config_parse = 2,
    validation = 3,
    solver = 4,
    verification = 5,
};

struct CommandOptions {
    std::string command;  // solve-stop | solve-mfg | verify | mc-check
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

/// Runs one command; progress goes to `log` unless quiet, errors always go to `err`.
ExitCode run_command(const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace mfgstop::cli
