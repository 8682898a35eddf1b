#include "mfgstop/lp_oracle.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "mfgstop/error.hpp"
#include "mfgstop/forward.hpp"
#include "mfgstop/simplex.hpp"
#include "mfgstop/test_functions.hpp"

namespace mfgstop {
namespace {

void require_oracle_shape(const Field& reward, const TransitionOperator& transition,
                          const InitialMeasure& m0) {
    if (reward.nodes() != transition.size() || reward.slices() != transition.steps() + 1 ||
        m0.mass.size() != transition.size()) {
        throw Error(ErrorCode::ShapeMismatch, "oracle inputs disagree in shape");
    }
}

}  // namespace

EnumerationResult enumerate_stopping_rules(const Field& reward,
                                           const TransitionOperator& transition,
                                           const InitialMeasure& m0, double dt,
                                           std::uint64_t limit) {
    require_oracle_shape(reward, transition, m0);
    const std::size_t n = transition.size();
    const std::size_t steps = transition.steps();
    const std::size_t bits = n * steps;
    if (bits > 16 || (std::uint64_t{1} << bits) > limit) {
        throw Error(ErrorCode::InstanceTooLarge,
                    "enumeration needs J*K <= 16, got " + std::to_string(bits));
    }

    std::vector<std::vector<double>> dense;  // P_k row-major
    for (std::size_t k = 0; k < steps; ++k) dense.push_back(transition.at(k).dense());

    EnumerationResult result;
    result.best_value = -std::numeric_limits<double>::infinity();
    std::vector<double> s(n), next(n);
    const std::uint64_t count = std::uint64_t{1} << bits;
    for (std::uint64_t rule = 0; rule < count; ++rule) {
        auto stops = [rule, n](std::size_t k, std::size_t j) {
            return ((rule >> (k * n + j)) & 1U) != 0;
        };
        double value = 0.0;
        for (std::size_t j = 0; j < n; ++j) s[j] = stops(0, j) ? 0.0 : m0.mass[j];
        for (std::size_t k = 0; k < steps; ++k) {
            for (std::size_t j = 0; j < n; ++j) value += dt * reward(k, j) * s[j];
            if (k + 1 == steps) break;
            const auto& p = dense[k];
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += p[i * n + j] * s[i];
                next[j] = stops(k + 1, j) ? 0.0 : acc;
            }
            s.swap(next);
        }
        if (value > result.best_value) {
            result.best_value = value;
            result.best_rule.assign(bits, 0);
            for (std::size_t b = 0; b < bits; ++b) result.best_rule[b] = (rule >> b) & 1U;
        }
    }
    result.rules_examined = count;
    return result;
}

LpOracleResult lp_solve_small(const Field& reward, const TransitionOperator& transition,
                              const InitialMeasure& m0, double dt) {
    require_oracle_shape(reward, transition, m0);
    const std::size_t n = transition.size();
    const std::size_t steps = transition.steps();
    if (n * steps > 400) {
        throw Error(ErrorCode::InstanceTooLarge,
                    "dense simplex needs J*K <= 400, got " + std::to_string(n * steps));
    }

    const std::size_t vars = (steps + 1) * n;
    DenseLp lp;
    lp.rows = vars;
    lp.cols = vars;
    lp.a.assign(vars * vars, 0.0);
    lp.b.assign(vars, 0.0);
    lp.c.assign(vars, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t j = 0; j < n; ++j) lp.c[k * n + j] = dt * reward(k, j);
    }
    for (std::size_t j = 0; j < n; ++j) {
        lp.at(j, j) = 1.0;
        lp.b[j] = m0.mass[j];
    }
    for (std::size_t k = 0; k < steps; ++k) {
        const auto p = transition.at(k).dense();
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = (k + 1) * n + j;
            lp.at(row, row) = 1.0;
            for (std::size_t i = 0; i < n; ++i) lp.at(row, k * n + i) -= p[i * n + j];
        }
    }

    const LpSolution sol = solve_dense_lp(lp);
    LpOracleResult out{sol.value, MeasureFamily{Field(steps + 1, n)}, sol.pivots};
    std::copy(sol.x.begin(), sol.x.end(), out.measure.mass.values().begin());
    return out;
}

AuditResult test_function_audit(const MeasureFamily& m, const InitialMeasure& m0,
                                const TransitionOperator& transition, const SpaceTimeGrid& grid,
                                std::size_t n_functions, std::uint64_t seed) {
    require_shape(m.mass, grid, "audited measure");
    std::mt19937_64 rng(seed);
    AuditResult result;
    result.worst_slack = std::numeric_limits<double>::infinity();
    result.worst_normalized = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_functions; ++i) {
        const Field u = random_nonnegative_test_function(grid, rng);
        const double slack = weak_form_pairing(m, m0, transition, u);
        const double scale = 1.0 + u.max_abs();
        if (slack / scale < result.worst_normalized) {
            result.worst_normalized = slack / scale;
            result.worst_slack = slack;
            result.worst_scale = scale;
        }
    }
    return result;
}

}  // namespace mfgstop
