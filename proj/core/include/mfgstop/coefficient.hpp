#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace mfgstop {

/// Value and first two derivatives of a scalar function at a point.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/**
 * Univariate coefficient from a small analytic catalog.
 *
 *   constant       {c}                   c
 *   affine         {c0, c1}              c0 + c1*s
 *   polynomial     {c0, c1, ..., cn}     sum_i c_i s^i
 *   gaussian_bump  {amp, center, width}  amp * exp(-(s-center)^2 / (2 width^2))
 *   cosine_bump    {amp, center, half}   amp * (1 + cos(pi (s-center)/half)) / 2 on |s-center| < half
 *   tabulated      {s0, v0, s1, v1, ...} piecewise-linear, constant extrapolation
 *
 * Every kind except `tabulated` has analytic first and second derivatives.
 */
class CoefficientFn {
public:
    enum class Kind { constant, affine, polynomial, gaussian_bump, cosine_bump, tabulated };

    CoefficientFn() : CoefficientFn(Kind::constant, {0.0}) {}
    /// Throws InvalidCoefficient on a malformed parameter list.
    CoefficientFn(Kind kind, std::vector<double> params);

    static CoefficientFn constant(double c) { return {Kind::constant, {c}}; }
    static CoefficientFn affine(double c0, double c1) { return {Kind::affine, {c0, c1}}; }
    static CoefficientFn polynomial(std::vector<double> coeffs) {
        return {Kind::polynomial, std::move(coeffs)};
    }
    static CoefficientFn gaussian_bump(double amp, double center, double width) {
        return {Kind::gaussian_bump, {amp, center, width}};
    }
    static CoefficientFn cosine_bump(double amp, double center, double half_width) {
        return {Kind::cosine_bump, {amp, center, half_width}};
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<double>& params() const noexcept { return params_; }

    [[nodiscard]] double operator()(double s) const;
    /// Throws MissingDerivative for `tabulated`.
    [[nodiscard]] Jet jet(double s) const;

    [[nodiscard]] bool has_derivatives() const noexcept { return kind_ != Kind::tabulated; }
    [[nodiscard]] bool is_constant() const noexcept;

    bool operator==(const CoefficientFn&) const = default;

private:
    Kind kind_;
    std::vector<double> params_;
};

std::string_view to_string(CoefficientFn::Kind kind) noexcept;
std::optional<CoefficientFn::Kind> parse_coefficient_kind(std::string_view name) noexcept;

/// Separable space-time coefficient c(t, x) = space(x) * time(t).
struct SpaceTimeFn {
    CoefficientFn space = CoefficientFn::constant(0.0);
    CoefficientFn time = CoefficientFn::constant(1.0);

    [[nodiscard]] double operator()(double t, double x) const { return space(x) * time(t); }
    [[nodiscard]] bool time_homogeneous() const noexcept { return time.is_constant(); }

    /// Analytic partials.
    [[nodiscard]] double dt(double t, double x) const;
    [[nodiscard]] double dx(double t, double x) const;
    [[nodiscard]] double dxx(double t, double x) const;

    bool operator==(const SpaceTimeFn&) const = default;
};

}  // namespace mfgstop
