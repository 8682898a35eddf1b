#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mfgstop/field.hpp"
#include "mfgstop/forward.hpp"
#include "mfgstop/grid.hpp"
#include "mfgstop/measures.hpp"
#include "mfgstop/model.hpp"
#include "mfgstop/obstacle.hpp"
#include "mfgstop/reward.hpp"
#include "mfgstop/transition.hpp"

namespace mfgstop {

/// Everything a mean-field stopping game needs, validated and discretized.
struct MfgProblem {
    SpaceTimeGrid grid;
    DiffusionModel model;
    InitialMeasure initial;
    TransitionOperator transition;
    Reward reward;
};

/// Validates the model on the grid and builds the transition operator.
MfgProblem make_problem(const SpaceTimeGrid& grid, const DiffusionModel& model,
                        InitialMeasure initial, RewardSpec reward);

struct BestResponse {
    Field reward;          // f(., m)
    ValueFunction value;   // obstacle solution for f(., m)
    ForwardResult forward; // stopped measure m~ and its ledger
    double response_payoff = 0.0;  // pair(f, m~)
    double current_payoff = 0.0;   // pair(f, m)

    [[nodiscard]] double exploitability() const noexcept {
        return response_payoff - current_payoff;
    }
};

BestResponse best_response(const MfgProblem& problem, const MeasureFamily& m);

/// pair(f(m), best response) - pair(f(m), m).
double exploitability(const MfgProblem& problem, const MeasureFamily& m);

struct LineSearchResult {
    double rho = 0.0;
    bool closed_form = false;
};

/**
 * Maximizer of rho -> F(m + rho (target - m)) on [0, 1]. Quadratic
 * potentials use the exact vertex; others use golden-section search.
 * Ties resolve to the smaller rho. Throws NonConcaveDetected.
 */
LineSearchResult line_search(const Reward& reward, const MeasureFamily& m,
                             const MeasureFamily& target);

/// Golden-section search on [0,1] to the given interval width.
double golden_section_line_search(const Reward& reward, const MeasureFamily& m,
                                  const MeasureFamily& target, double width = 1e-10);

struct IterationRecord {
    std::size_t iteration = 0;
    double potential = 0.0;
    double exploitability = 0.0;
    double rho = 0.0;
    std::vector<std::vector<double>> moments;  // per coupled term
    double seconds = 0.0;
};

struct IterationTrace {
    double initial_potential = 0.0;
    double initial_exploitability = 0.0;
    std::vector<IterationRecord> records;
};

enum class SolveStatus { converged, max_iters_exceeded };

struct FixedPointOptions {
    std::size_t max_iters = 500;
    double eps_tol = 1e-6;
};

struct FixedPointResult {
    MeasureFamily m_star;
    BestResponse response;  // best response to m_star; response.value is v_star
    std::size_t iterations = 0;
    SolveStatus status = SolveStatus::converged;
    IterationTrace trace;

    [[nodiscard]] const ValueFunction& v_star() const noexcept { return response.value; }
    [[nodiscard]] double exploitability() const noexcept { return response.exploitability(); }
};

/**
 * Conditional-gradient fixed point for potential games: best response,
 * exact line search on the potential, convex update; stops once the
 * exploitability drops to eps_tol. On hitting max_iters the iterate with the
 * smallest exploitability is returned with status max_iters_exceeded.
 */
FixedPointResult fixed_point_solve(const MfgProblem& problem, const MeasureFamily& m_init,
                                   const FixedPointOptions& options = {});

struct EquilibriumComparison {
    double value_gap = 0.0;        // |<m0, v*> - <m0, v*'>|
    double moment_l1_distance = 0.0;  // sum_i sum_{k<K} dt |y_i,k - y'_i,k|
};

EquilibriumComparison compare_equilibria(const MfgProblem& problem, const FixedPointResult& a,
                                         const FixedPointResult& b);

}  // namespace mfgstop
