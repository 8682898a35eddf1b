#include "mfgstop/forward.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <numeric>

#include "mfgstop/error.hpp"

namespace mfgstop {

double MassLedger::total_stopped() const noexcept {
    return std::accumulate(stopped.begin(), stopped.end(), 0.0);
}

double MassLedger::total_absorbed() const noexcept {
    return std::accumulate(absorbed.begin(), absorbed.end(), 0.0);
}

double MassLedger::balance_error() const noexcept {
    return std::abs(initial - surviving - total_stopped() - total_absorbed());
}

ForwardResult stopped_forward_measure(const ValueFunction& v, const InitialMeasure& m0,
                                      const TransitionOperator& transition) {
    const std::size_t n = transition.size();
    const std::size_t steps = transition.steps();
    if (v.nodes() != n || v.slices() != steps + 1 || m0.mass.size() != n) {
        throw Error(ErrorCode::ShapeMismatch, "stopped_forward_measure");
    }

    ForwardResult out{MeasureFamily{Field(steps + 1, n)}, MassLedger{}};
    MassLedger& ledger = out.ledger;
    ledger.initial = m0.total();
    ledger.stopped.assign(steps, 0.0);
    ledger.absorbed.assign(steps, 0.0);

    auto s0 = out.measure.mass.slice(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (v.stops(0, j)) {
            ledger.stopped[0] += m0.mass[j];
        } else {
            s0[j] = m0.mass[j];
        }
    }

    for (std::size_t k = 0; k < steps; ++k) {
        const auto current = out.measure.mass.slice(k);
        auto next = out.measure.mass.slice(k + 1);
        transition.at(k).apply_transpose(current, next);
        const double before = std::accumulate(current.begin(), current.end(), 0.0);
        const double after = std::accumulate(next.begin(), next.end(), 0.0);
        ledger.absorbed[k] = before - after;
        if (k + 1 == steps) break;
        for (std::size_t j = 0; j < n; ++j) {
            if (v.stops(k + 1, j)) {
                ledger.stopped[k + 1] += next[j];
                next[j] = 0.0;
            }
        }
    }
    ledger.surviving = out.measure.slice_total(steps);
    return out;
}

MassLedger account_mass(const MeasureFamily& m, const InitialMeasure& m0,
                        const TransitionOperator& transition) {
    const std::size_t n = transition.size();
    const std::size_t steps = transition.steps();
    if (m.nodes() != n || m.slices() != steps + 1 || m0.mass.size() != n) {
        throw Error(ErrorCode::ShapeMismatch, "account_mass");
    }
    MassLedger ledger;
    ledger.initial = m0.total();
    ledger.stopped.assign(steps, 0.0);
    ledger.absorbed.assign(steps, 0.0);
    ledger.stopped[0] = ledger.initial - m.slice_total(0);
    std::vector<double> carried(n);
    for (std::size_t k = 0; k < steps; ++k) {
        transition.at(k).apply_transpose(m.mass.slice(k), carried);
        const double after = std::accumulate(carried.begin(), carried.end(), 0.0);
        ledger.absorbed[k] = m.slice_total(k) - after;
        ledger.stopped[std::min(k + 1, steps - 1)] += after - m.slice_total(k + 1);
    }
    ledger.surviving = m.slice_total(steps);
    return ledger;
}

double weak_form_pairing(const MeasureFamily& m, const InitialMeasure& m0,
                         const TransitionOperator& transition, const Field& u) {
    require_same_shape(m.mass, u, "weak_form_pairing");
    const std::size_t n = transition.size();
    if (m.nodes() != n || m0.mass.size() != n || m.slices() != transition.steps() + 1) {
        throw Error(ErrorCode::ShapeMismatch, "weak_form_pairing");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += m0.mass[j] * u(0, j);
    std::vector<double> expected(n);
    for (std::size_t k = 0; k < transition.steps(); ++k) {
        transition.at(k).apply(u.slice(k + 1), expected);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m.mass(k, j) * (expected[j] - u(k, j));
        total += s;
    }
    return total;
}

bool supported_in_continuation(const Field& phi, const ValueFunction& v) {
    if (!phi.same_shape(v.values)) return false;
    const std::size_t n = v.nodes();
    for (std::size_t k = 0; k < v.slices(); ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            if (phi(k, j) == 0.0) continue;
            if (j == 0 || j + 1 == n) return false;
            if (v.stops(k, j - 1) || v.stops(k, j) || v.stops(k, j + 1)) return false;
        }
    }
    return true;
}

double fokker_planck_residual(const MeasureFamily& m, const InitialMeasure& m0,
                              const ValueFunction& v, const TransitionOperator& transition,
                              const Field& phi) {
    require_same_shape(m.mass, phi, "fokker_planck_residual");
    if (!supported_in_continuation(phi, v)) {
        throw Error(ErrorCode::SupportViolation, "test function touches {v = 0} or its collar");
    }
    return std::abs(weak_form_pairing(m, m0, transition, phi));
}

}  // namespace mfgstop
