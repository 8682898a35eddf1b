#include "mfgstop/measures.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "mfgstop/error.hpp"

namespace mfgstop {
namespace {

void require_chain_shape(const MeasureFamily& m, const InitialMeasure& m0,
                         const TransitionOperator& transition) {
    if (m.nodes() != m0.mass.size() || m.nodes() != transition.size() ||
        m.slices() != transition.steps() + 1) {
        throw Error(ErrorCode::ShapeMismatch, "measure, initial law and transition disagree");
    }
}

}  // namespace

double MeasureFamily::slice_total(std::size_t k) const noexcept {
    const auto s = mass.slice(k);
    return std::accumulate(s.begin(), s.end(), 0.0);
}

AdmissibilityReport is_admissible(const MeasureFamily& m, const InitialMeasure& m0,
                                  const TransitionOperator& transition, double tol) {
    require_chain_shape(m, m0, transition);
    AdmissibilityReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();
    auto consider = [&](double violation, std::size_t k, std::size_t j) {
        if (violation > report.worst_violation) {
            report.worst_violation = violation;
            report.worst_slice = k;
            report.worst_node = j;
        }
    };

    const std::size_t n = m.nodes();
    for (std::size_t k = 0; k < m.slices(); ++k) {
        for (std::size_t j = 0; j < n; ++j) consider(-m.mass(k, j), k, j);
    }
    for (std::size_t j = 0; j < n; ++j) consider(m.mass(0, j) - m0.mass[j], 0, j);

    std::vector<double> pushed(n);
    for (std::size_t k = 0; k + 1 < m.slices(); ++k) {
        transition.at(k).apply_transpose(m.mass.slice(k), pushed);
        for (std::size_t j = 0; j < n; ++j) consider(m.mass(k + 1, j) - pushed[j], k + 1, j);
    }
    report.admissible = report.worst_violation <= tol;
    return report;
}

MeasureFamily all_continue_measure(const InitialMeasure& m0,
                                   const TransitionOperator& transition) {
    const std::size_t n = transition.size();
    if (m0.mass.size() != n) throw Error(ErrorCode::ShapeMismatch, "initial law size");
    MeasureFamily m{Field(transition.steps() + 1, n)};
    std::copy(m0.mass.begin(), m0.mass.end(), m.mass.slice(0).begin());
    for (std::size_t k = 0; k < transition.steps(); ++k) {
        transition.at(k).apply_transpose(m.mass.slice(k), m.mass.slice(k + 1));
    }
    return m;
}

MomentPath moment(const MeasureFamily& m, const CoefficientFn& g, const SpaceTimeGrid& grid) {
    require_shape(m.mass, grid, "measure");
    std::vector<double> gx(grid.nodes());
    for (std::size_t j = 0; j < grid.nodes(); ++j) gx[j] = g(grid.node(j));

    MomentPath path{std::vector<double>(m.slices(), 0.0)};
    std::vector<double> terms(grid.nodes());
    for (std::size_t k = 0; k < m.slices(); ++k) {
        const auto s = m.mass.slice(k);
        for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = gx[j] * s[j];
        // Descending magnitude order fixes the rounding independently of node order.
        std::sort(terms.begin(), terms.end(),
                  [](double a, double b) { return std::abs(a) > std::abs(b); });
        path.values[k] = std::accumulate(terms.begin(), terms.end(), 0.0);
    }
    return path;
}

double pair(const Field& f, const Field& m, double dt) {
    require_same_shape(f, m, "pair");
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < f.slices(); ++k) {
        const auto fs = f.slice(k);
        const auto ms = m.slice(k);
        double s = 0.0;
        for (std::size_t j = 0; j < fs.size(); ++j) s += fs[j] * ms[j];
        total += dt * s;
    }
    return total;
}

MeasureFamily convex_combine(const MeasureFamily& m1, const MeasureFamily& m2, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw Error(ErrorCode::RhoOutOfRange, "rho = " + std::to_string(rho));
    }
    require_same_shape(m1.mass, m2.mass, "convex_combine");
    MeasureFamily out{Field(m1.slices(), m1.nodes())};
    const auto a = m1.mass.values();
    const auto b = m2.mass.values();
    auto o = out.mass.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - rho) * a[i] + rho * b[i];
    return out;
}

}  // namespace mfgstop
