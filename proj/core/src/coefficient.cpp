#include "mfgstop/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mfgstop/error.hpp"

namespace mfgstop {
namespace {

std::size_t expected_params(CoefficientFn::Kind kind) {
    switch (kind) {
        case CoefficientFn::Kind::constant: return 1;
        case CoefficientFn::Kind::affine: return 2;
        case CoefficientFn::Kind::gaussian_bump:
        case CoefficientFn::Kind::cosine_bump: return 3;
        default: return 0;
    }
}

}  // namespace

CoefficientFn::CoefficientFn(Kind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
    for (double p : params_) {
        if (!std::isfinite(p)) throw Error(ErrorCode::InvalidCoefficient, "non-finite parameter");
    }
    const std::string name(to_string(kind_));
    if (const std::size_t n = expected_params(kind_); n != 0 && params_.size() != n) {
        throw Error(ErrorCode::InvalidCoefficient,
                    name + " takes " + std::to_string(n) + " parameters, got " +
                        std::to_string(params_.size()));
    }
    switch (kind_) {
        case Kind::polynomial:
            if (params_.empty()) throw Error(ErrorCode::InvalidCoefficient, "empty polynomial");
            break;
        case Kind::gaussian_bump:
        case Kind::cosine_bump:
            if (!(params_[2] > 0.0)) {
                throw Error(ErrorCode::InvalidCoefficient, name + " width must be positive");
            }
            break;
        case Kind::tabulated:
            if (params_.size() < 2 || params_.size() % 2 != 0) {
                throw Error(ErrorCode::InvalidCoefficient, "tabulated needs (s, v) pairs");
            }
            for (std::size_t i = 2; i < params_.size(); i += 2) {
                if (!(params_[i] > params_[i - 2])) {
                    throw Error(ErrorCode::InvalidCoefficient,
                                "tabulated abscissae must increase strictly");
                }
            }
            break;
        default: break;
    }
}

bool CoefficientFn::is_constant() const noexcept {
    switch (kind_) {
        case Kind::constant: return true;
        case Kind::affine: return params_[1] == 0.0;
        case Kind::polynomial:
            return std::all_of(params_.begin() + 1, params_.end(), [](double c) { return c == 0.0; });
        case Kind::gaussian_bump:
        case Kind::cosine_bump: return params_[0] == 0.0;
        case Kind::tabulated: {
            for (std::size_t i = 3; i < params_.size(); i += 2) {
                if (params_[i] != params_[1]) return false;
            }
            return true;
        }
    }
    return false;
}

double CoefficientFn::operator()(double s) const {
    if (kind_ != Kind::tabulated) return jet(s).value;
    const std::size_t n = params_.size() / 2;
    if (s <= params_[0]) return params_[1];
    if (s >= params_[2 * (n - 1)]) return params_[2 * n - 1];
    std::size_t i = 1;
    while (params_[2 * i] < s) ++i;
    const double s0 = params_[2 * (i - 1)], v0 = params_[2 * (i - 1) + 1];
    const double s1 = params_[2 * i], v1 = params_[2 * i + 1];
    return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
}

Jet CoefficientFn::jet(double s) const {
    switch (kind_) {
        case Kind::constant: return {params_[0], 0.0, 0.0};
        case Kind::affine: return {params_[0] + params_[1] * s, params_[1], 0.0};
        case Kind::polynomial: {
            // Horner for p, p', p''.
            Jet j;
            for (auto it = params_.rbegin(); it != params_.rend(); ++it) {
                j.d2 = j.d2 * s + 2.0 * j.d1;
                j.d1 = j.d1 * s + j.value;
                j.value = j.value * s + *it;
            }
            return j;
        }
        case Kind::gaussian_bump: {
            const double amp = params_[0], z = (s - params_[1]) / params_[2];
            const double w2 = params_[2] * params_[2];
            const double e = amp * std::exp(-0.5 * z * z);
            return {e, -e * z / params_[2], e * (z * z - 1.0) / w2};
        }
        case Kind::cosine_bump: {
            const double amp = params_[0], half = params_[2];
            const double u = (s - params_[1]) / half;
            if (std::abs(u) >= 1.0) return {0.0, 0.0, 0.0};
            const double w = std::numbers::pi / half;
            const double arg = std::numbers::pi * u;
            return {0.5 * amp * (1.0 + std::cos(arg)), -0.5 * amp * w * std::sin(arg),
                    -0.5 * amp * w * w * std::cos(arg)};
        }
        case Kind::tabulated:
            throw Error(ErrorCode::MissingDerivative, "tabulated coefficient has no analytic jet");
    }
    return {};
}

std::string_view to_string(CoefficientFn::Kind kind) noexcept {
    switch (kind) {
        case CoefficientFn::Kind::constant: return "constant";
        case CoefficientFn::Kind::affine: return "affine";
        case CoefficientFn::Kind::polynomial: return "polynomial";
        case CoefficientFn::Kind::gaussian_bump: return "gaussian_bump";
        case CoefficientFn::Kind::cosine_bump: return "cosine_bump";
        case CoefficientFn::Kind::tabulated: return "tabulated";
    }
    return "unknown";
}

std::optional<CoefficientFn::Kind> parse_coefficient_kind(std::string_view name) noexcept {
    using K = CoefficientFn::Kind;
    for (K k : {K::constant, K::affine, K::polynomial, K::gaussian_bump, K::cosine_bump,
                K::tabulated}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

double SpaceTimeFn::dt(double t, double x) const { return space(x) * time.jet(t).d1; }
double SpaceTimeFn::dx(double t, double x) const { return space.jet(x).d1 * time(t); }
double SpaceTimeFn::dxx(double t, double x) const { return space.jet(x).d2 * time(t); }

}  // namespace mfgstop
