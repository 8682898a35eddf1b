#pragma once

#include <cstddef>
#include <vector>

namespace mfgstop {

/**
 * max c^T x  s.t.  A x <= b,  x >= 0,  with b >= 0.
 *
 * A is rows x cols, row-major. The slack basis is feasible at the origin so no
 * phase one is needed.
 */
struct DenseLp {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

struct LpSolution {
    double value = 0.0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

/// Tableau simplex with Bland's rule. Throws SimplexIterationLimit, UnboundedLp.
LpSolution solve_dense_lp(const DenseLp& lp, std::size_t max_pivots = 1'000'000);

}  // namespace mfgstop
