#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mfgstop/field.hpp"
#include "mfgstop/measures.hpp"
#include "mfgstop/model.hpp"
#include "mfgstop/transition.hpp"

namespace mfgstop {

/// Discrete obstacle-problem solution v >= 0 with its stopping region {v = 0}.
struct ValueFunction {
    Field values;
    std::vector<std::uint8_t> stop_mask;  // (K+1) x J, time-major
    double tol_zero = 0.0;

    [[nodiscard]] std::size_t slices() const noexcept { return values.slices(); }
    [[nodiscard]] std::size_t nodes() const noexcept { return values.nodes(); }
    [[nodiscard]] bool stops(std::size_t k, std::size_t j) const noexcept {
        return stop_mask[k * values.nodes() + j] != 0;
    }
};

/**
 * Backward recursion v^{(K)} = 0, v^{(k)} = max(0, dt f^{(k)} + P_k v^{(k+1)}).
 *
 * A node is classified STOP when v <= 1e-12 (1 + ||v||_inf); exact ties stop.
 */
ValueFunction solve_vi(const Field& reward, const TransitionOperator& transition, double dt);

/// Wraps a value grid with its STOP mask, using the same relative zero test as solve_vi.
ValueFunction classify_stopping(Field values);

/// <m0, v^{(0)}>.
double value_at_initial(const ValueFunction& v, const InitialMeasure& m0);

struct ComplementarityReport {
    /// sum over STOP nodes (k < K) of dt |f| m.
    double stop_region_integral = 0.0;
    /// max |m^{(k+1)} - P_k^T m^{(k)}| over continuation nodes whose stencil is in {v > 0}.
    double continuation_residual = 0.0;
};

ComplementarityReport complementarity_report(const ValueFunction& v, const Field& reward,
                                             const MeasureFamily& m,
                                             const TransitionOperator& transition, double dt);

}  // namespace mfgstop
