#include "mfgstop/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfgstop/error.hpp"

namespace mfgstop {

LpSolution solve_dense_lp(const DenseLp& lp, std::size_t max_pivots) {
    const std::size_t m = lp.rows;
    const std::size_t n = lp.cols;
    if (lp.a.size() != m * n || lp.b.size() != m || lp.c.size() != n) {
        throw Error(ErrorCode::ShapeMismatch, "dense LP dimensions");
    }
    for (double bi : lp.b) {
        if (bi < 0.0) throw Error(ErrorCode::ShapeMismatch, "dense LP needs b >= 0");
    }

    // Columns: n structural, m slack, then the right-hand side.
    const std::size_t width = n + m + 1;
    std::vector<double> tab(m * width, 0.0);
    std::vector<double> reduced(n + m + 1, 0.0);  // c_j - z_j; last entry is -objective
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) tab[i * width + j] = lp.a[i * n + j];
        tab[i * width + n + i] = 1.0;
        tab[i * width + n + m] = lp.b[i];
        basis[i] = n + i;
    }
    for (std::size_t j = 0; j < n; ++j) reduced[j] = lp.c[j];

    constexpr double kEps = 1e-12;
    LpSolution sol;
    for (;;) {
        // Bland: lowest-index improving column.
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (reduced[j] > kEps) {
                enter = j;
                break;
            }
        }
        if (enter == width) break;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double coef = tab[i * width + enter];
            if (coef <= kEps) continue;
            const double ratio = tab[i * width + n + m] / coef;
            if (leave == m || ratio < best_ratio - kEps) {
                best_ratio = ratio;
                leave = i;
            } else if (ratio <= best_ratio + kEps && basis[i] < basis[leave]) {
                best_ratio = std::min(best_ratio, ratio);
                leave = i;
            }
        }
        if (leave == m) throw Error(ErrorCode::UnboundedLp, "objective is unbounded");
        if (++sol.pivots > max_pivots) {
            throw Error(ErrorCode::SimplexIterationLimit,
                        "no optimum after " + std::to_string(max_pivots) + " pivots");
        }

        double* prow = &tab[leave * width];
        const double inv = 1.0 / prow[enter];
        for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
        prow[enter] = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            double* row = &tab[i * width];
            const double factor = row[enter];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) row[j] -= factor * prow[j];
            row[enter] = 0.0;
        }
        const double factor = reduced[enter];
        for (std::size_t j = 0; j < width; ++j) reduced[j] -= factor * prow[j];
        reduced[enter] = 0.0;
        basis[leave] = enter;
    }

    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) sol.x[basis[i]] = std::max(0.0, tab[i * width + n + m]);
    }
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.value += lp.c[j] * sol.x[j];
    return sol;
}

}  // namespace mfgstop
