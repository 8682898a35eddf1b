#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mfgstop/field.hpp"
#include "mfgstop/grid.hpp"
#include "mfgstop/measures.hpp"
#include "mfgstop/model.hpp"
#include "mfgstop/transition.hpp"

namespace mfgstop {

struct EnumerationResult {
    double best_value = 0.0;
    /// K x J flags, time-major; 1 = stop at (k, j).
    std::vector<std::uint8_t> best_rule;
    std::uint64_t rules_examined = 0;
};

/**
 * Brute force over every pure Markov stopping rule on slices 0..K-1.
 * Throws InstanceTooLarge unless J*K <= 16 and 2^(J*K) <= limit.
 */
EnumerationResult enumerate_stopping_rules(const Field& reward,
                                           const TransitionOperator& transition,
                                           const InitialMeasure& m0, double dt,
                                           std::uint64_t limit = std::uint64_t{1} << 16);

struct LpOracleResult {
    double value = 0.0;
    MeasureFamily measure;
    std::size_t pivots = 0;
};

/**
 * max <f, m> over m >= 0, m^{(0)} <= m0, m^{(k+1)} <= P_k^T m^{(k)}, solved as
 * a dense LP. Throws InstanceTooLarge when J*K > 400.
 */
LpOracleResult lp_solve_small(const Field& reward, const TransitionOperator& transition,
                              const InitialMeasure& m0, double dt);

struct AuditResult {
    /// Smallest weak-form slack over the generated test functions.
    double worst_slack = 0.0;
    /// 1 + ||u||_inf of the test function attaining worst_slack.
    double worst_scale = 1.0;
    /// min over u of slack(u) / (1 + ||u||_inf).
    double worst_normalized = 0.0;
};

/**
 * Evaluates <m0, u^{(0)}> + sum_k <m^{(k)}, P_k u^{(k+1)} - u^{(k)}> for
 * n_functions random nonnegative test functions u. Admissible measures give
 * nonnegative slack for every u.
 */
AuditResult test_function_audit(const MeasureFamily& m, const InitialMeasure& m0,
                                const TransitionOperator& transition, const SpaceTimeGrid& grid,
                                std::size_t n_functions, std::uint64_t seed);

}  // namespace mfgstop
