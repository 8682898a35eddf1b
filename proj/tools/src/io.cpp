#include "mfgstop_cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mfgstop::cli {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("cannot read " + path.string());
    return in;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool same_coordinate(double a, double b) {
    return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b));
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ArtifactError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

void write_grid_csv(const std::filesystem::path& path, const SpaceTimeGrid& grid, const Field& field) {
    auto out = open_out(path);
    out << "t,x,value\n";
    for (std::size_t k = 0; k < field.slices(); ++k) {
        const std::string t = format_double(grid.time(k));
        for (std::size_t j = 0; j < field.nodes(); ++j) {
            out << t << ',' << format_double(grid.node(j)) << ',' << format_double(field(k, j)) << '\n';
        }
    }
}

Field read_grid_csv(const std::filesystem::path& path, const SpaceTimeGrid& grid) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,value", 0) != 0) {
        throw ArtifactError(path.string() + ": expected header t,x,value");
    }
    Field field = Field::on(grid);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != 3) throw ArtifactError(path.string() + ": expected 3 columns");
        if (row >= field.size()) throw ArtifactError(path.string() + ": too many rows for the grid");
        const std::size_t k = row / grid.nodes(), j = row % grid.nodes();
        if (!same_coordinate(parse_number(cells[0]), grid.time(k)) ||
            !same_coordinate(parse_number(cells[1]), grid.node(j))) {
            throw ArtifactError(path.string() + ": row " + std::to_string(row + 1) +
                                " does not match the grid coordinates");
        }
        field(k, j) = parse_number(cells[2]);
        ++row;
    }
    if (row != field.size()) throw ArtifactError(path.string() + ": too few rows for the grid");
    return field;
}

void write_moments_csv(const std::filesystem::path& path, const SpaceTimeGrid& grid,
                       const std::vector<std::vector<double>>& moments) {
    auto out = open_out(path);
    out << "t,term,value\n";
    for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
        for (std::size_t i = 0; i < moments.size(); ++i) {
            out << format_double(grid.time(k)) << ',' << i + 1 << ',' << format_double(moments[i][k]) << '\n';
        }
    }
}

void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace) {
    auto out = open_out(path);
    out << "iteration,F,epsilon,rho\n";
    for (const auto& rec : trace.records) {
        out << rec.iteration << ',' << format_double(rec.potential) << ','
            << format_double(rec.exploitability) << ',' << format_double(rec.rho) << '\n';
    }
}

std::vector<std::pair<double, double>> read_pairs_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != 2) throw ArtifactError(path.string() + ": expected 2 columns");
        rows.emplace_back(parse_number(cells[0]), parse_number(cells[1]));
    }
    return rows;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactError(path.string() + ": " + e.what());
    }
}

}  // namespace mfgstop::cli
