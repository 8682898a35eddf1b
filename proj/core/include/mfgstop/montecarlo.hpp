#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mfgstop/field.hpp"
#include "mfgstop/grid.hpp"
#include "mfgstop/measures.hpp"
#include "mfgstop/model.hpp"
#include "mfgstop/obstacle.hpp"

namespace mfgstop {

struct SimulationOptions {
    std::size_t n_paths = 100'000;
    std::uint64_t seed = 0;
    /// Kill a path that crossed the boundary between two monitoring dates with
    /// the Brownian-bridge crossing probability.
    bool bridge_correction = true;
};

struct PathCounts {
    std::size_t survived = 0;  // alive at T
    std::size_t stopped = 0;
    std::size_t absorbed = 0;
};

struct SimulationResult {
    /// Fraction of paths alive and unstopped at (t_k, nearest node x_j).
    MeasureFamily empirical;
    /// sqrt(p(1-p)/n) per cell.
    Field standard_error;
    std::vector<double> slice_totals;
    std::vector<double> slice_standard_errors;
    PathCounts counts;
};

/**
 * Euler-Maruyama paths started from m0 with the same dt as the grid. At each
 * slice a path stops if its node-snapped position is in {v = 0} (slices
 * k < K); survivors are tallied, then advanced one step and absorbed on
 * leaving (a, b). Each path draws from its own generator keyed by
 * (seed, path index), so results are reproducible bit for bit.
 */
SimulationResult simulate_paths(const DiffusionModel& model, const SpaceTimeGrid& grid,
                                const ValueFunction& v, const InitialMeasure& m0,
                                const SimulationOptions& options);

/// Same dynamics with no stopping (the killed diffusion).
SimulationResult simulate_unstopped_paths(const DiffusionModel& model, const SpaceTimeGrid& grid,
                                          const InitialMeasure& m0,
                                          const SimulationOptions& options);

struct SliceComparison {
    std::vector<double> z_scores;
    /// Fraction of slices with |z| <= 3.
    double fraction_within_3se = 0.0;
    /// max_k |empirical total - reference total|.
    double max_abs_difference = 0.0;
    /// dt * sum_k |empirical total - reference total|.
    double l1_difference = 0.0;
};

/**
 * Per-slice total-mass z-scores against a reference family. The standard
 * error uses the larger of the empirical and reference binomial variances.
 */
SliceComparison compare_slice_totals(const SimulationResult& sim, const MeasureFamily& reference,
                                     double dt, std::size_t n_paths);

}  // namespace mfgstop
