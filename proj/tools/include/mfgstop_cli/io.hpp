#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfgstop/field.hpp"
#include "mfgstop/grid.hpp"
#include "mfgstop/mfg.hpp"

namespace mfgstop::cli {

/// Missing, unreadable or inconsistent artifact file.
class ArtifactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest text with 17 significant digits; parses back to the same double.
std::string format_double(double value);
double parse_number(std::string_view text);

/// `t,x,value` rows, time-major then space.
void write_grid_csv(const std::filesystem::path& path, const SpaceTimeGrid& grid, const Field& field);
/// Reads a file written by write_grid_csv and checks its coordinates against the grid.
Field read_grid_csv(const std::filesystem::path& path, const SpaceTimeGrid& grid);

/// `t,term,value` rows, one per slice and coupled term.
void write_moments_csv(const std::filesystem::path& path, const SpaceTimeGrid& grid,
                       const std::vector<std::vector<double>>& moments);
/// `iteration,F,epsilon,rho` rows.
void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace);

/// Two-column numeric CSV with a header row.
std::vector<std::pair<double, double>> read_pairs_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace mfgstop::cli
