#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

#include "mfgstop/grid.hpp"
#include "mfgstop/mfg.hpp"
#include "mfgstop/model.hpp"
#include "mfgstop/montecarlo.hpp"
#include "mfgstop/reward.hpp"

namespace mfgstop::cli {

/// Malformed configuration text: syntax, missing keys, unparsable values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StartMeasure { zero, all_continue };

struct RunConfig {
    SpaceTimeGrid grid;
    DiffusionModel model;
    InitialMeasure initial;
    /// Discount rate and the folded terminal reward (offset) included.
    RewardSpec reward;
    FixedPointOptions algorithm;
    StartMeasure start = StartMeasure::zero;
    SimulationOptions mc;
};

/**
 * INI-style configuration with sections [grid], [model], [initial], [reward],
 * [discount], [algorithm], [mc] and `#` comments. Relative paths resolve
 * against base_dir. Throws ConfigError on malformed input and mfgstop::Error
 * when a value parses but fails validation.
 */
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mfgstop::cli
