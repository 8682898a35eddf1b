#pragma once

#include <cstddef>

namespace mfgstop {

/**
 * Uniform discretization of [0,T] x (a,b).
 *
 * Time nodes t_k = k*dt for k = 0..K. Space carries J interior nodes
 * x_j = a + (j+1)*dx for j = 0..J-1 (zero-based); the endpoints a and b are
 * absorbing boundary nodes and never carry mass.
 */
class SpaceTimeGrid {
public:
    SpaceTimeGrid() = default;

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t time_steps() const noexcept { return time_steps_; }
    [[nodiscard]] std::size_t time_nodes() const noexcept { return time_steps_ + 1; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] std::size_t nodes() const noexcept { return nodes_; }
    [[nodiscard]] double dx() const noexcept { return dx_; }

    [[nodiscard]] double time(std::size_t k) const noexcept {
        return static_cast<double>(k) * dt_;
    }
    [[nodiscard]] double node(std::size_t j) const noexcept {
        return lo_ + static_cast<double>(j + 1) * dx_;
    }

    /// Index of the interior node nearest to x, clamped to [0, J-1].
    [[nodiscard]] std::size_t nearest_node(double x) const noexcept;

    [[nodiscard]] bool operator==(const SpaceTimeGrid&) const = default;

    friend SpaceTimeGrid build_grid(double, double, double, std::size_t, std::size_t);

private:
    double horizon_ = 0.0;
    std::size_t time_steps_ = 0;
    double dt_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::size_t nodes_ = 0;
    double dx_ = 0.0;
};

/// Throws Error{NonPositiveHorizon | EmptyDomain | DegenerateGrid}.
SpaceTimeGrid build_grid(double horizon, double lo, double hi, std::size_t time_steps,
                         std::size_t nodes);

}  // namespace mfgstop
