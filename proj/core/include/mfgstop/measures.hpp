#pragma once

#include <cstddef>
#include <vector>

#include "mfgstop/coefficient.hpp"
#include "mfgstop/field.hpp"
#include "mfgstop/grid.hpp"
#include "mfgstop/model.hpp"
#include "mfgstop/transition.hpp"

namespace mfgstop {

/// Nonnegative node masses m^{(k)}_j per time slice.
struct MeasureFamily {
    Field mass;

    static MeasureFamily zero(const SpaceTimeGrid& grid) { return {Field::on(grid)}; }

    [[nodiscard]] std::size_t slices() const noexcept { return mass.slices(); }
    [[nodiscard]] std::size_t nodes() const noexcept { return mass.nodes(); }
    [[nodiscard]] double slice_total(std::size_t k) const noexcept;

    bool operator==(const MeasureFamily&) const = default;
};

/// y_k = sum_j g(x_j) m^{(k)}_j.
struct MomentPath {
    std::vector<double> values;
};

struct AdmissibilityReport {
    bool admissible = true;
    /// Largest violation found (<= 0 when admissible).
    double worst_violation = 0.0;
    std::size_t worst_slice = 0;
    std::size_t worst_node = 0;
};

inline constexpr double kComputedAdmissibilityTol = 1e-10;
inline constexpr double kConstructedAdmissibilityTol = 1e-12;

/**
 * Survival-chain test: m >= 0, m^{(0)} <= m0 and m^{(k+1)} <= P_k^T m^{(k)}
 * componentwise, each within tol.
 */
AdmissibilityReport is_admissible(const MeasureFamily& m, const InitialMeasure& m0,
                                  const TransitionOperator& transition, double tol);

/// Law of the chain killed at the boundary with no stopping.
MeasureFamily all_continue_measure(const InitialMeasure& m0, const TransitionOperator& transition);

MomentPath moment(const MeasureFamily& m, const CoefficientFn& g, const SpaceTimeGrid& grid);

/// Left-endpoint pairing sum_{k<K} dt <f_k, m_k>; slice K is excluded.
double pair(const Field& f, const Field& m, double dt);
inline double pair(const Field& f, const MeasureFamily& m, double dt) {
    return pair(f, m.mass, dt);
}

/// (1 - rho) m1 + rho m2. Throws RhoOutOfRange unless 0 <= rho <= 1.
MeasureFamily convex_combine(const MeasureFamily& m1, const MeasureFamily& m2, double rho);

}  // namespace mfgstop
