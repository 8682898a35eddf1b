#include "mfgstop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mfgstop/error.hpp"

namespace mfgstop {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SimulationResult simulate(const DiffusionModel& model, const SpaceTimeGrid& grid,
                          const ValueFunction* v, const InitialMeasure& m0,
                          const SimulationOptions& options) {
    if (options.n_paths == 0) throw Error(ErrorCode::InvalidMeasure, "n_paths must be positive");
    if (m0.mass.size() != grid.nodes()) throw Error(ErrorCode::ShapeMismatch, "initial law");
    if (v != nullptr && !v->values.matches(grid)) {
        throw Error(ErrorCode::ShapeMismatch, "value function does not match the grid");
    }

    const std::size_t steps = grid.time_steps();
    const double dt = grid.dt();
    const double sqrt_dt = std::sqrt(dt);
    const double lo = grid.lo(), hi = grid.hi();

    std::vector<std::uint64_t> tally(grid.time_nodes() * grid.nodes(), 0);
    PathCounts counts;
    std::discrete_distribution<std::size_t> start_node(m0.mass.begin(), m0.mass.end());

    for (std::size_t path = 0; path < options.n_paths; ++path) {
        std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(path)));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        double x = grid.node(start_node(rng));
        for (std::size_t k = 0; k <= steps; ++k) {
            const std::size_t j = grid.nearest_node(x);
            if (k == steps) {
                ++tally[k * grid.nodes() + j];
                ++counts.survived;
                break;
            }
            if (v != nullptr && v->stops(k, j)) {
                ++counts.stopped;
                break;
            }
            ++tally[k * grid.nodes() + j];

            const double t = grid.time(k);
            const double sigma = model.volatility(t, x);
            const double next = x + model.drift(t, x) * dt + sigma * sqrt_dt * normal(rng);
            bool exited = !(next > lo && next < hi);
            if (!exited && options.bridge_correction) {
                const double var = sigma * sigma * dt;
                const double p_lo = std::exp(-2.0 * (x - lo) * (next - lo) / var);
                const double p_hi = std::exp(-2.0 * (hi - x) * (hi - next) / var);
                exited = unit(rng) < 1.0 - (1.0 - p_lo) * (1.0 - p_hi);
            }
            if (exited) {
                ++counts.absorbed;
                break;
            }
            x = next;
        }
    }

    const double n = static_cast<double>(options.n_paths);
    SimulationResult out{MeasureFamily::zero(grid), Field::on(grid),
                         std::vector<double>(grid.time_nodes(), 0.0),
                         std::vector<double>(grid.time_nodes(), 0.0), counts};
    for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
        std::uint64_t alive_k = 0;
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const std::uint64_t c = tally[k * grid.nodes() + j];
            alive_k += c;
            const double p = static_cast<double>(c) / n;
            out.empirical.mass(k, j) = p;
            out.standard_error(k, j) = std::sqrt(p * (1.0 - p) / n);
        }
        const double p = static_cast<double>(alive_k) / n;
        out.slice_totals[k] = p;
        out.slice_standard_errors[k] = std::sqrt(p * (1.0 - p) / n);
    }
    return out;
}

}  // namespace

SimulationResult simulate_paths(const DiffusionModel& model, const SpaceTimeGrid& grid,
                                const ValueFunction& v, const InitialMeasure& m0,
                                const SimulationOptions& options) {
    return simulate(model, grid, &v, m0, options);
}

SimulationResult simulate_unstopped_paths(const DiffusionModel& model, const SpaceTimeGrid& grid,
                                          const InitialMeasure& m0,
                                          const SimulationOptions& options) {
    return simulate(model, grid, nullptr, m0, options);
}

SliceComparison compare_slice_totals(const SimulationResult& sim, const MeasureFamily& reference,
                                     double dt, std::size_t n_paths) {
    if (reference.slices() != sim.slice_totals.size()) {
        throw Error(ErrorCode::ShapeMismatch, "compare_slice_totals");
    }
    const double n = static_cast<double>(n_paths);
    SliceComparison cmp;
    std::size_t within = 0;
    for (std::size_t k = 0; k < reference.slices(); ++k) {
        const double ref = reference.slice_total(k);
        const double emp = sim.slice_totals[k];
        const double var = std::max(emp * (1.0 - emp), std::clamp(ref, 0.0, 1.0) * (1.0 - std::clamp(ref, 0.0, 1.0)));
        const double se = std::sqrt(var / n);
        const double diff = emp - ref;
        const double z = se > 0.0 ? diff / se : (std::abs(diff) <= 1e-12 ? 0.0 : INFINITY);
        cmp.z_scores.push_back(z);
        if (std::abs(z) <= 3.0) ++within;
        cmp.max_abs_difference = std::max(cmp.max_abs_difference, std::abs(diff));
        if (k + 1 < reference.slices()) cmp.l1_difference += dt * std::abs(diff);
    }
    cmp.fraction_within_3se = static_cast<double>(within) / static_cast<double>(reference.slices());
    return cmp;
}

}  // namespace mfgstop
