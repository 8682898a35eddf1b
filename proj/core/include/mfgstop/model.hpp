#pragma once

#include <cstddef>
#include <vector>

#include "mfgstop/coefficient.hpp"
#include "mfgstop/field.hpp"
#include "mfgstop/grid.hpp"
#include "mfgstop/transition.hpp"

namespace mfgstop {

/// dX = drift(t, X) dt + volatility(t, X) dW on the grid interval, killed at its ends.
struct DiffusionModel {
    SpaceTimeFn drift;
    SpaceTimeFn volatility;
    double sigma_min = 0.0;

    [[nodiscard]] bool time_homogeneous() const noexcept {
        return drift.time_homogeneous() && volatility.time_homogeneous();
    }

    /// Throws EllipticityViolation if volatility < sigma_min (or sigma_min <= 0) at some node,
    /// InvalidCoefficient if a coefficient is not finite on the grid.
    void validate(const SpaceTimeGrid& grid) const;
};

/// Smallest volatility over all grid nodes; the natural sigma_min.
double min_volatility(const DiffusionModel& model, const SpaceTimeGrid& grid);

/// Probability masses of the initial law at the interior nodes.
struct InitialMeasure {
    std::vector<double> mass;

    [[nodiscard]] double total() const noexcept;

    /// Throws InvalidMeasure unless masses are nonnegative and sum to 1 within 1e-12.
    static InitialMeasure from_masses(std::vector<double> masses);
    static InitialMeasure uniform(const SpaceTimeGrid& grid);
    /// Unit atom at the node nearest to x0. Throws InvalidMeasure if x0 is outside (a,b).
    static InitialMeasure atom(const SpaceTimeGrid& grid, double x0);
    /// Nonnegative weights rescaled to unit mass.
    static InitialMeasure normalized(std::vector<double> weights);
};

/**
 * Tridiagonal generator at time slice k: central second difference for the
 * diffusion term, upwind first difference for the drift. Coefficients are
 * sampled at t_k.
 */
Tridiagonal discretize_generator(const DiffusionModel& model, const SpaceTimeGrid& grid,
                                 std::size_t k);

/// Implicit-Euler transition operators P_k for k = 0..K-1.
TransitionOperator build_transition_operator(const DiffusionModel& model,
                                             const SpaceTimeGrid& grid);

/// A terminal reward g and its analytic partials sampled on the grid.
struct TerminalRewardGrids {
    Field g;
    Field g_t;
    Field g_x;
    Field g_xx;
};

/// Throws MissingDerivative if g has a tabulated factor.
TerminalRewardGrids sample_terminal_reward(const SpaceTimeFn& g, const SpaceTimeGrid& grid);

/// f = e^{-rho t} (f~ - rho g + g_t + drift g_x + volatility^2/2 g_xx), pointwise.
Field fold_reward(const SpaceTimeGrid& grid, const DiffusionModel& model, const Field& running,
                  const TerminalRewardGrids& terminal, double discount_rate);

}  // namespace mfgstop
