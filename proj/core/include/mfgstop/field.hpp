#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfgstop/grid.hpp"

namespace mfgstop {

/// Dense (K+1) x J array of doubles, time-major.
class Field {
public:
    Field() = default;
    Field(std::size_t slices, std::size_t nodes, double fill = 0.0)
        : slices_(slices), nodes_(nodes), data_(slices * nodes, fill) {}

    static Field on(const SpaceTimeGrid& grid, double fill = 0.0) {
        return Field(grid.time_nodes(), grid.nodes(), fill);
    }

    [[nodiscard]] std::size_t slices() const noexcept { return slices_; }
    [[nodiscard]] std::size_t nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t k, std::size_t j) noexcept { return data_[k * nodes_ + j]; }
    double operator()(std::size_t k, std::size_t j) const noexcept {
        return data_[k * nodes_ + j];
    }

    std::span<double> slice(std::size_t k) noexcept { return {data_.data() + k * nodes_, nodes_}; }
    [[nodiscard]] std::span<const double> slice(std::size_t k) const noexcept {
        return {data_.data() + k * nodes_, nodes_};
    }

    std::span<double> values() noexcept { return data_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return data_; }

    [[nodiscard]] bool same_shape(const Field& other) const noexcept {
        return slices_ == other.slices_ && nodes_ == other.nodes_;
    }
    [[nodiscard]] bool matches(const SpaceTimeGrid& grid) const noexcept {
        return slices_ == grid.time_nodes() && nodes_ == grid.nodes();
    }

    [[nodiscard]] double max_abs() const noexcept;

    bool operator==(const Field&) const = default;

private:
    std::size_t slices_ = 0;
    std::size_t nodes_ = 0;
    std::vector<double> data_;
};

/// Throws ShapeMismatch unless `field` is (K+1) x J on `grid`.
void require_shape(const Field& field, const SpaceTimeGrid& grid, const char* what);
void require_same_shape(const Field& lhs, const Field& rhs, const char* what);

}  // namespace mfgstop
