#include "mfgstop/transition.hpp"

#include <cmath>
#include <string>

#include "mfgstop/error.hpp"

namespace mfgstop {

double Tridiagonal::row_sum(std::size_t j) const noexcept {
    double s = diag[j];
    if (j > 0) s += lower[j];
    if (j + 1 < size()) s += upper[j];
    return s;
}

std::vector<double> Tridiagonal::multiply(std::span<const double> u) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = diag[j] * u[j];
        if (j > 0) s += lower[j] * u[j - 1];
        if (j + 1 < n) s += upper[j] * u[j + 1];
        y[j] = s;
    }
    return y;
}

TransitionSlice::Factor TransitionSlice::factor(std::span<const double> sub,
                                                std::span<const double> diag,
                                                std::span<const double> sup) {
    const std::size_t n = diag.size();
    Factor f{std::vector<double>(sub.begin(), sub.end()), std::vector<double>(n, 0.0),
             std::vector<double>(n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) {
        const double p = diag[j] - (j > 0 ? sub[j] * f.sup_n[j - 1] : 0.0);
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw Error(ErrorCode::SingularSystem, "non-positive pivot at row " + std::to_string(j));
        }
        f.pivot[j] = p;
        f.sup_n[j] = (j + 1 < n) ? sup[j] / p : 0.0;
    }
    return f;
}

void TransitionSlice::solve(const Factor& f, std::span<const double> rhs, std::span<double> out) {
    const std::size_t n = f.pivot.size();
    out[0] = rhs[0] / f.pivot[0];
    for (std::size_t j = 1; j < n; ++j) out[j] = (rhs[j] - f.sub[j] * out[j - 1]) / f.pivot[j];
    for (std::size_t j = n - 1; j-- > 0;) out[j] -= f.sup_n[j] * out[j + 1];
}

TransitionSlice::TransitionSlice(const Tridiagonal& generator, double dt) {
    const std::size_t n = generator.size();
    if (n == 0 || generator.lower.size() != n || generator.upper.size() != n) {
        throw Error(ErrorCode::ShapeMismatch, "generator bands have inconsistent sizes");
    }
    if (!(dt > 0.0)) throw Error(ErrorCode::SingularSystem, "dt must be positive");

    resolvent_ = Tridiagonal(n);
    for (std::size_t j = 0; j < n; ++j) {
        resolvent_.lower[j] = -dt * generator.lower[j];
        resolvent_.diag[j] = 1.0 - dt * generator.diag[j];
        resolvent_.upper[j] = -dt * generator.upper[j];
    }
    // M-matrix certificate: positive diagonal, nonpositive off-diagonals and
    // weak row diagonal dominance. Together with the positive pivots below this
    // gives an entrywise nonnegative inverse.
    for (std::size_t j = 0; j < n; ++j) {
        const double off_l = j > 0 ? resolvent_.lower[j] : 0.0;
        const double off_u = j + 1 < n ? resolvent_.upper[j] : 0.0;
        if (off_l > 0.0 || off_u > 0.0 || resolvent_.diag[j] + off_l + off_u < 0.0) {
            throw Error(ErrorCode::SingularSystem,
                        "I - dt*A is not an M-matrix at row " + std::to_string(j));
        }
    }

    std::vector<double> sub(n, 0.0), sup(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        sub[j] = j > 0 ? resolvent_.lower[j] : 0.0;
        sup[j] = j + 1 < n ? resolvent_.upper[j] : 0.0;
    }
    forward_ = factor(sub, resolvent_.diag, sup);

    // Transpose: sub'_j = sup_{j-1}, sup'_j = sub_{j+1}.
    std::vector<double> sub_t(n, 0.0), sup_t(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        sub_t[j] = j > 0 ? sup[j - 1] : 0.0;
        sup_t[j] = j + 1 < n ? sub[j + 1] : 0.0;
    }
    adjoint_ = factor(sub_t, resolvent_.diag, sup_t);

    row_sums_ = apply(std::vector<double>(n, 1.0));
    for (std::size_t j = 0; j < n; ++j) {
        if (row_sums_[j] > 1.0 + 1e-12 || row_sums_[j] < 0.0) {
            throw Error(ErrorCode::SingularSystem,
                        "row " + std::to_string(j) + " of P sums to " + std::to_string(row_sums_[j]));
        }
    }
}

void TransitionSlice::apply(std::span<const double> u, std::span<double> out) const {
    if (u.size() != size() || out.size() != size()) {
        throw Error(ErrorCode::ShapeMismatch, "TransitionSlice::apply");
    }
    solve(forward_, u, out);
}

void TransitionSlice::apply_transpose(std::span<const double> m, std::span<double> out) const {
    if (m.size() != size() || out.size() != size()) {
        throw Error(ErrorCode::ShapeMismatch, "TransitionSlice::apply_transpose");
    }
    solve(adjoint_, m, out);
}

std::vector<double> TransitionSlice::apply(std::span<const double> u) const {
    std::vector<double> out(size());
    apply(u, out);
    return out;
}

std::vector<double> TransitionSlice::apply_transpose(std::span<const double> m) const {
    std::vector<double> out(size());
    apply_transpose(m, out);
    return out;
}

std::vector<double> TransitionSlice::column(std::size_t j) const {
    std::vector<double> e(size(), 0.0);
    e[j] = 1.0;
    return apply(e);
}

std::vector<double> TransitionSlice::dense() const {
    const std::size_t n = size();
    std::vector<double> p(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto col = column(j);
        for (std::size_t i = 0; i < n; ++i) p[i * n + j] = col[i];
    }
    return p;
}

TransitionOperator::TransitionOperator(std::vector<TransitionSlice> slices, std::size_t steps)
    : slices_(std::move(slices)), steps_(steps) {
    if (slices_.empty() || steps_ == 0 || (slices_.size() != 1 && slices_.size() != steps_)) {
        throw Error(ErrorCode::ShapeMismatch, "transition operator needs 1 or K slices");
    }
    for (const auto& s : slices_) {
        if (s.size() != slices_.front().size()) {
            throw Error(ErrorCode::ShapeMismatch, "transition slices differ in size");
        }
    }
}

TransitionSlice build_transition(const Tridiagonal& generator, double dt) {
    return TransitionSlice(generator, dt);
}

}  // namespace mfgstop
