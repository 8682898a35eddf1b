#include "mfgstop/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mfgstop/error.hpp"

namespace mfgstop {

void DiffusionModel::validate(const SpaceTimeGrid& grid) const {
    if (!(sigma_min > 0.0)) {
        throw Error(ErrorCode::EllipticityViolation, "sigma_min must be positive");
    }
    for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
        const double t = grid.time(k);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const double x = grid.node(j);
            const double mu = drift(t, x);
            const double sigma = volatility(t, x);
            if (!std::isfinite(mu) || !std::isfinite(sigma)) {
                throw Error(ErrorCode::InvalidCoefficient,
                            "non-finite coefficient at (" + std::to_string(t) + ", " +
                                std::to_string(x) + ")");
            }
            if (sigma < sigma_min) {
                throw Error(ErrorCode::EllipticityViolation,
                            "sigma(" + std::to_string(t) + ", " + std::to_string(x) +
                                ") = " + std::to_string(sigma) + " < sigma_min");
            }
        }
    }
}

double min_volatility(const DiffusionModel& model, const SpaceTimeGrid& grid) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            lo = std::min(lo, model.volatility(grid.time(k), grid.node(j)));
        }
    }
    return lo;
}

double InitialMeasure::total() const noexcept {
    return std::accumulate(mass.begin(), mass.end(), 0.0);
}

InitialMeasure InitialMeasure::from_masses(std::vector<double> masses) {
    for (double m : masses) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw Error(ErrorCode::InvalidMeasure, "initial masses must be finite and nonnegative");
        }
    }
    InitialMeasure m0{std::move(masses)};
    if (std::abs(m0.total() - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidMeasure, "initial mass sums to " + std::to_string(m0.total()));
    }
    return m0;
}

InitialMeasure InitialMeasure::uniform(const SpaceTimeGrid& grid) {
    return normalized(std::vector<double>(grid.nodes(), 1.0));
}

InitialMeasure InitialMeasure::atom(const SpaceTimeGrid& grid, double x0) {
    if (!(x0 > grid.lo() && x0 < grid.hi())) {
        throw Error(ErrorCode::InvalidMeasure, "atom outside the open domain");
    }
    std::vector<double> masses(grid.nodes(), 0.0);
    masses[grid.nearest_node(x0)] = 1.0;
    return InitialMeasure{std::move(masses)};
}

InitialMeasure InitialMeasure::normalized(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::InvalidMeasure, "initial weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidMeasure, "initial weights sum to zero");
    for (double& w : weights) w /= total;
    return InitialMeasure{std::move(weights)};
}

Tridiagonal discretize_generator(const DiffusionModel& model, const SpaceTimeGrid& grid,
                                 std::size_t k) {
    const std::size_t n = grid.nodes();
    const double t = grid.time(k);
    const double dx = grid.dx();
    Tridiagonal a(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.node(j);
        const double mu = model.drift(t, x);
        const double sigma = model.volatility(t, x);
        if (!(sigma >= model.sigma_min) || !(model.sigma_min > 0.0)) {
            throw Error(ErrorCode::EllipticityViolation,
                        "sigma(" + std::to_string(t) + ", " + std::to_string(x) + ") = " +
                            std::to_string(sigma));
        }
        const double diffusion = 0.5 * sigma * sigma / (dx * dx);
        a.lower[j] = diffusion + std::max(-mu, 0.0) / dx;
        a.upper[j] = diffusion + std::max(mu, 0.0) / dx;
        a.diag[j] = -(a.lower[j] + a.upper[j]);
    }
    return a;
}

TransitionOperator build_transition_operator(const DiffusionModel& model,
                                             const SpaceTimeGrid& grid) {
    const std::size_t count = model.time_homogeneous() ? 1 : grid.time_steps();
    std::vector<TransitionSlice> slices;
    slices.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        slices.push_back(build_transition(discretize_generator(model, grid, k), grid.dt()));
    }
    return TransitionOperator(std::move(slices), grid.time_steps());
}

TerminalRewardGrids sample_terminal_reward(const SpaceTimeFn& g, const SpaceTimeGrid& grid) {
    TerminalRewardGrids out{Field::on(grid), Field::on(grid), Field::on(grid), Field::on(grid)};
    for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
        const Jet time = g.time.jet(grid.time(k));
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const Jet space = g.space.jet(grid.node(j));
            out.g(k, j) = space.value * time.value;
            out.g_t(k, j) = space.value * time.d1;
            out.g_x(k, j) = space.d1 * time.value;
            out.g_xx(k, j) = space.d2 * time.value;
        }
    }
    return out;
}

Field fold_reward(const SpaceTimeGrid& grid, const DiffusionModel& model, const Field& running,
                  const TerminalRewardGrids& terminal, double discount_rate) {
    require_shape(running, grid, "running reward");
    require_shape(terminal.g, grid, "terminal g");
    require_shape(terminal.g_t, grid, "terminal g_t");
    require_shape(terminal.g_x, grid, "terminal g_x");
    require_shape(terminal.g_xx, grid, "terminal g_xx");

    Field f = Field::on(grid);
    for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
        const double t = grid.time(k);
        const double discount = std::exp(-discount_rate * t);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const double x = grid.node(j);
            const double sigma = model.volatility(t, x);
            const double lg = model.drift(t, x) * terminal.g_x(k, j) +
                              0.5 * sigma * sigma * terminal.g_xx(k, j);
            f(k, j) = discount * (running(k, j) - discount_rate * terminal.g(k, j) +
                                  terminal.g_t(k, j) + lg);
        }
    }
    return f;
}

}  // namespace mfgstop
