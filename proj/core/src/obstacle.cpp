#include "mfgstop/obstacle.hpp"

#include <algorithm>
#include <cmath>

#include "mfgstop/error.hpp"

namespace mfgstop {

ValueFunction solve_vi(const Field& reward, const TransitionOperator& transition, double dt) {
    const std::size_t n = transition.size();
    const std::size_t steps = transition.steps();
    if (reward.nodes() != n || reward.slices() != steps + 1) {
        throw Error(ErrorCode::ShapeMismatch, "reward grid does not match the transition");
    }

    ValueFunction v{Field(steps + 1, n), {}, 0.0};
    std::vector<double> continuation(n);
    for (std::size_t k = steps; k-- > 0;) {
        transition.at(k).apply(v.values.slice(k + 1), continuation);
        const auto f = reward.slice(k);
        auto out = v.values.slice(k);
        for (std::size_t j = 0; j < n; ++j) out[j] = std::max(0.0, dt * f[j] + continuation[j]);
    }

    return classify_stopping(std::move(v.values));
}

ValueFunction classify_stopping(Field values) {
    ValueFunction v{std::move(values), {}, 0.0};
    v.tol_zero = 1e-12 * (1.0 + v.values.max_abs());
    v.stop_mask.resize(v.values.size());
    const auto vals = v.values.values();
    for (std::size_t i = 0; i < vals.size(); ++i) v.stop_mask[i] = vals[i] <= v.tol_zero ? 1 : 0;
    return v;
}

double value_at_initial(const ValueFunction& v, const InitialMeasure& m0) {
    if (m0.mass.size() != v.nodes()) throw Error(ErrorCode::ShapeMismatch, "value_at_initial");
    const auto v0 = v.values.slice(0);
    double total = 0.0;
    for (std::size_t j = 0; j < v0.size(); ++j) total += v0[j] * m0.mass[j];
    return total;
}

ComplementarityReport complementarity_report(const ValueFunction& v, const Field& reward,
                                             const MeasureFamily& m,
                                             const TransitionOperator& transition, double dt) {
    require_same_shape(v.values, reward, "complementarity_report reward");
    require_same_shape(v.values, m.mass, "complementarity_report measure");
    if (transition.size() != v.nodes() || transition.steps() + 1 != v.slices()) {
        throw Error(ErrorCode::ShapeMismatch, "complementarity_report transition");
    }
    const std::size_t n = v.nodes();
    const std::size_t steps = transition.steps();

    ComplementarityReport report;
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            if (v.stops(k, j)) report.stop_region_integral += dt * std::abs(reward(k, j)) * m.mass(k, j);
        }
    }

    // Slice K carries no objective weight, so only transitions into k+1 < K are tight.
    std::vector<double> pushed(n);
    for (std::size_t k = 0; k + 1 < steps; ++k) {
        transition.at(k).apply_transpose(m.mass.slice(k), pushed);
        for (std::size_t j = 0; j < n; ++j) {
            const bool interior_stencil = !v.stops(k + 1, j) && (j == 0 || !v.stops(k + 1, j - 1)) &&
                                          (j + 1 == n || !v.stops(k + 1, j + 1));
            if (!interior_stencil) continue;
            report.continuation_residual =
                std::max(report.continuation_residual, std::abs(m.mass(k + 1, j) - pushed[j]));
        }
    }
    return report;
}

}  // namespace mfgstop
