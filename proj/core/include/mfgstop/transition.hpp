#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfgstop {

/**
 * Tridiagonal n x n matrix. Row j reads lower[j]*u[j-1] + diag[j]*u[j] + upper[j]*u[j+1].
 *
 * lower[0] and upper[n-1] hold the couplings to the two boundary nodes. They
 * are kept for inspection but are not part of the matrix: boundary values are
 * zero under absorption.
 */
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    Tridiagonal() = default;
    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
    /// Row sum of the interior matrix (boundary couplings dropped).
    [[nodiscard]] double row_sum(std::size_t j) const noexcept;
    /// y = this * u.
    [[nodiscard]] std::vector<double> multiply(std::span<const double> u) const;
};

/**
 * One step of the killed chain: P = (I - dt*A)^{-1} held in factored form.
 *
 * P is never formed densely on the hot path; apply() and apply_transpose()
 * each cost one Thomas solve. Construction certifies that I - dt*A is an
 * M-matrix, which makes every entry of P nonnegative, and that P*1 <= 1.
 */
class TransitionSlice {
public:
    /// Throws SingularSystem if I - dt*A is not a nonsingular M-matrix.
    TransitionSlice(const Tridiagonal& generator, double dt);

    [[nodiscard]] std::size_t size() const noexcept { return resolvent_.size(); }
    [[nodiscard]] const Tridiagonal& resolvent_matrix() const noexcept { return resolvent_; }

    /// out = P * u  (backward / expectation direction).
    void apply(std::span<const double> u, std::span<double> out) const;
    /// out = P^T * m  (forward / mass direction).
    void apply_transpose(std::span<const double> m, std::span<double> out) const;

    [[nodiscard]] std::vector<double> apply(std::span<const double> u) const;
    [[nodiscard]] std::vector<double> apply_transpose(std::span<const double> m) const;

    /// Column j of P, i.e. P * e_j.
    [[nodiscard]] std::vector<double> column(std::size_t j) const;
    /// Row-major dense copy of P. For oracles and small checks only.
    [[nodiscard]] std::vector<double> dense() const;
    /// P * 1; one minus this is the one-step absorption probability.
    [[nodiscard]] const std::vector<double>& row_sums() const noexcept { return row_sums_; }

private:
    struct Factor {
        std::vector<double> sub;    // sub-diagonal of the factored matrix
        std::vector<double> sup_n;  // normalized super-diagonal c'_j
        std::vector<double> pivot;  // b_j - a_j c'_{j-1}
    };
    static Factor factor(std::span<const double> sub, std::span<const double> diag,
                         std::span<const double> sup);
    static void solve(const Factor& f, std::span<const double> rhs, std::span<double> out);

    Tridiagonal resolvent_;  // I - dt*A
    Factor forward_;         // factors of I - dt*A
    Factor adjoint_;         // factors of (I - dt*A)^T
    std::vector<double> row_sums_;
};

/// P_k for k = 0..K-1. Time-homogeneous operators store a single slice.
class TransitionOperator {
public:
    TransitionOperator(std::vector<TransitionSlice> slices, std::size_t steps);

    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] std::size_t size() const noexcept { return slices_.front().size(); }
    [[nodiscard]] bool time_homogeneous() const noexcept { return slices_.size() == 1; }
    [[nodiscard]] const TransitionSlice& at(std::size_t k) const noexcept {
        return slices_.size() == 1 ? slices_.front() : slices_[k];
    }

private:
    std::vector<TransitionSlice> slices_;
    std::size_t steps_;
};

/// P = (I - dt*A)^{-1} for one generator slice.
TransitionSlice build_transition(const Tridiagonal& generator, double dt);

}  // namespace mfgstop
