#pragma once

#include <cstddef>
#include <vector>

#include "mfgstop/field.hpp"
#include "mfgstop/measures.hpp"
#include "mfgstop/model.hpp"
#include "mfgstop/obstacle.hpp"
#include "mfgstop/transition.hpp"

namespace mfgstop {

/// Where the initial mass went.
struct MassLedger {
    double initial = 0.0;
    /// stopped[k]: mass removed at slice k on entering {v = 0}, k = 0..K-1.
    std::vector<double> stopped;
    /// absorbed[k]: mass lost to the boundary during step k -> k+1.
    std::vector<double> absorbed;
    /// Mass present at slice K.
    double surviving = 0.0;

    [[nodiscard]] double total_stopped() const noexcept;
    [[nodiscard]] double total_absorbed() const noexcept;
    /// |initial - surviving - stopped - absorbed|.
    [[nodiscard]] double balance_error() const noexcept;
};

struct ForwardResult {
    MeasureFamily measure;
    MassLedger ledger;
};

/**
 * Law of the chain killed at the boundary and stopped on first entry into
 * {v = 0}: s^{(0)} = m0 on continuation nodes, s^{(k+1)} = P_k^T s^{(k)}
 * restricted to continuation nodes of slice k+1. Slice K is the terminal
 * slice and is not masked.
 */
ForwardResult stopped_forward_measure(const ValueFunction& v, const InitialMeasure& m0,
                                      const TransitionOperator& transition);

/**
 * Ledger of an arbitrary admissible family: mass missing from m^{(0)} or from
 * m^{(k+1)} relative to P_k^T m^{(k)} counts as stopped, the row-sum deficit
 * of each step as absorbed. Removal at slice K is booked with the last step.
 */
MassLedger account_mass(const MeasureFamily& m, const InitialMeasure& m0,
                        const TransitionOperator& transition);

/**
 * <m0, u^{(0)}> + sum_{k<K} <m^{(k)}, P_k u^{(k+1)} - u^{(k)}>.
 *
 * The bracket is dt times the scheme-consistent (d/dt + L) u: the forward
 * time difference plus A_k applied to P_k u^{(k+1)}. Nonnegative for every
 * u >= 0 exactly when m is admissible.
 */
double weak_form_pairing(const MeasureFamily& m, const InitialMeasure& m0,
                         const TransitionOperator& transition, const Field& u);

/// True if phi may serve as a test function supported in {v > 0}: zero on STOP
/// nodes, on their spatial neighbours, and on the two nodes next to the boundary.
bool supported_in_continuation(const Field& phi, const ValueFunction& v);

/// |weak_form_pairing(m, phi)|. Throws SupportViolation if phi leaves the continuation region.
double fokker_planck_residual(const MeasureFamily& m, const InitialMeasure& m0,
                              const ValueFunction& v, const TransitionOperator& transition,
                              const Field& phi);

}  // namespace mfgstop
