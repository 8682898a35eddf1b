#include "mfgstop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfgstop/error.hpp"
#include "mfgstop/field.hpp"

namespace mfgstop {

std::size_t SpaceTimeGrid::nearest_node(double x) const noexcept {
    const double pos = std::round((x - lo_) / dx_) - 1.0;
    const double clamped = std::clamp(pos, 0.0, static_cast<double>(nodes_ - 1));
    return static_cast<std::size_t>(clamped);
}

SpaceTimeGrid build_grid(double horizon, double lo, double hi, std::size_t time_steps,
                         std::size_t nodes) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorCode::NonPositiveHorizon, "T = " + std::to_string(horizon));
    }
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::EmptyDomain,
                    "a = " + std::to_string(lo) + ", b = " + std::to_string(hi));
    }
    if (time_steps < 1 || nodes < 2) {
        throw Error(ErrorCode::DegenerateGrid, "need K >= 1 and J >= 2");
    }
    SpaceTimeGrid grid;
    grid.horizon_ = horizon;
    grid.time_steps_ = time_steps;
    grid.dt_ = horizon / static_cast<double>(time_steps);
    grid.lo_ = lo;
    grid.hi_ = hi;
    grid.nodes_ = nodes;
    grid.dx_ = (hi - lo) / static_cast<double>(nodes + 1);
    return grid;
}

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

void require_shape(const Field& field, const SpaceTimeGrid& grid, const char* what) {
    if (!field.matches(grid)) {
        throw Error(ErrorCode::ShapeMismatch,
                    std::string(what) + " is " + std::to_string(field.slices()) + "x" +
                        std::to_string(field.nodes()) + ", grid expects " +
                        std::to_string(grid.time_nodes()) + "x" + std::to_string(grid.nodes()));
    }
}

void require_same_shape(const Field& lhs, const Field& rhs, const char* what) {
    if (!lhs.same_shape(rhs)) {
        throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": operand shapes differ");
    }
}

}  // namespace mfgstop
