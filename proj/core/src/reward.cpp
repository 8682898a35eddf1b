#include "mfgstop/reward.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mfgstop/error.hpp"

namespace mfgstop {

double FBarFn::operator()(double t, double y) const {
    if (kind == Kind::custom) return custom_value(t, y);
    const double tau = time_modulation(t);
    switch (kind) {
        case Kind::linear_decreasing: return p0 + tau - p1 * y;
        case Kind::exponential: return p0 * std::exp(-p1 * y) + tau;
        case Kind::saturating: return p0 / (1.0 + std::max(y, 0.0)) + p1 + tau;
        case Kind::custom: break;
    }
    return 0.0;
}

double FBarFn::antiderivative(double t, double y) const {
    if (kind == Kind::custom) {
        if (!custom_antiderivative) {
            throw Error(ErrorCode::MissingAntiderivative, "custom fbar has no antiderivative");
        }
        return custom_antiderivative(t, y);
    }
    const double tau = time_modulation(t);
    switch (kind) {
        case Kind::linear_decreasing: return (p0 + tau) * y - 0.5 * p1 * y * y;
        case Kind::exponential:
            return (p1 == 0.0 ? p0 * y : -p0 * std::expm1(-p1 * y) / p1) + tau * y;
        case Kind::saturating:
            // c/(1+y) integrates to c*ln(1+y) for y >= 0; below zero fbar is flat at c + d.
            return p0 * (y >= 0.0 ? std::log1p(y) : y) + (p1 + tau) * y;
        case Kind::custom: break;
    }
    return 0.0;
}

double FBarFn::increment(double t, double y, double dy) const {
    if (kind == Kind::custom) return antiderivative(t, y + dy) - antiderivative(t, y);
    const double tau = time_modulation(t);
    switch (kind) {
        case Kind::linear_decreasing: return dy * (p0 + tau - p1 * (y + 0.5 * dy));
        case Kind::exponential:
            if (p1 == 0.0) return (p0 + tau) * dy;
            return -p0 * std::exp(-p1 * y) * std::expm1(-p1 * dy) / p1 + tau * dy;
        case Kind::saturating:
            if (y >= 0.0 && y + dy >= 0.0) return p0 * std::log1p(dy / (1.0 + y)) + (p1 + tau) * dy;
            return antiderivative(t, y + dy) - antiderivative(t, y);
        case Kind::custom: break;
    }
    return 0.0;
}

std::optional<double> FBarFn::constant_slope() const noexcept {
    if (kind == Kind::linear_decreasing) return p1;
    return std::nullopt;
}

void FBarFn::validate() const {
    if (kind == Kind::custom) {
        if (!custom_value) throw Error(ErrorCode::InvalidReward, "custom fbar without a value");
        return;
    }
    if (!std::isfinite(p0) || !std::isfinite(p1)) {
        throw Error(ErrorCode::InvalidReward, "non-finite fbar parameter");
    }
    switch (kind) {
        case Kind::linear_decreasing:
            if (p1 < 0.0) throw Error(ErrorCode::InvalidReward, "linear fbar needs b >= 0");
            break;
        case Kind::exponential:
            if (p0 < 0.0 || p1 < 0.0) {
                throw Error(ErrorCode::InvalidReward, "exponential fbar needs c, lambda >= 0");
            }
            break;
        case Kind::saturating:
            if (p0 < 0.0) throw Error(ErrorCode::InvalidReward, "saturating fbar needs c >= 0");
            break;
        case Kind::custom: break;
    }
}

std::string_view to_string(FBarFn::Kind kind) noexcept {
    switch (kind) {
        case FBarFn::Kind::linear_decreasing: return "linear_decreasing";
        case FBarFn::Kind::exponential: return "exponential";
        case FBarFn::Kind::saturating: return "saturating";
        case FBarFn::Kind::custom: return "custom";
    }
    return "unknown";
}

std::optional<FBarFn::Kind> parse_fbar_kind(std::string_view name) noexcept {
    using K = FBarFn::Kind;
    for (K k : {K::linear_decreasing, K::exponential, K::saturating}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

Reward::Reward(RewardSpec spec, const SpaceTimeGrid& grid, double initial_mass)
    : spec_(std::move(spec)), grid_(grid) {
    if (!std::isfinite(spec_.discount_rate)) {
        throw Error(ErrorCode::InvalidReward, "discount rate must be finite");
    }
    if (spec_.offset.size() != 0) require_shape(spec_.offset, grid_, "reward offset");

    for (std::size_t i = 0; i < spec_.terms.size(); ++i) {
        const RewardTerm& term = spec_.terms[i];
        term.fbar.validate();
        if (!term.g.has_derivatives()) {
            throw Error(ErrorCode::InvalidReward, "coupling g must have analytic derivatives");
        }
        std::vector<double> gx(grid_.nodes());
        double g_max = 0.0;
        for (std::size_t j = 0; j < gx.size(); ++j) {
            gx[j] = term.g(grid_.node(j));
            if (!std::isfinite(gx[j])) throw Error(ErrorCode::InvalidReward, "g not finite");
            g_max = std::max(g_max, std::abs(gx[j]));
        }
        if (g_max == 0.0) {
            warnings_.push_back("term " + std::to_string(i + 1) +
                                ": g vanishes on the grid, the term is a constant reward");
        }
        y_max_.push_back(g_max * initial_mass);
        g_values_.push_back(std::move(gx));
    }

    weight_.resize(grid_.time_nodes());
    for (std::size_t k = 0; k < weight_.size(); ++k) {
        weight_[k] = std::exp(-spec_.discount_rate * grid_.time(k));
    }

    static_part_ = Field::on(grid_);
    for (std::size_t k = 0; k < grid_.time_nodes(); ++k) {
        for (std::size_t j = 0; j < grid_.nodes(); ++j) {
            double v = spec_.h ? weight_[k] * (*spec_.h)(grid_.time(k), grid_.node(j)) : 0.0;
            if (spec_.offset.size() != 0) v += spec_.offset(k, j);
            static_part_(k, j) = v;
        }
    }
}

bool Reward::all_linear() const noexcept {
    return std::all_of(spec_.terms.begin(), spec_.terms.end(),
                       [](const RewardTerm& t) { return t.fbar.constant_slope().has_value(); });
}

std::vector<std::vector<double>> Reward::moments(const MeasureFamily& m) const {
    std::vector<std::vector<double>> out;
    out.reserve(term_count());
    for (std::size_t i = 0; i < term_count(); ++i) {
        auto y = moment(m, spec_.terms[i].g, grid_).values;
        const double bound = y_max_[i] * (1.0 + 1e-9) + 1e-12;
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (std::abs(y[k]) > bound) {
                throw Error(ErrorCode::MomentOutOfRange,
                            "term " + std::to_string(i + 1) + " slice " + std::to_string(k) +
                                ": |y| = " + std::to_string(std::abs(y[k])) + " exceeds " +
                                std::to_string(y_max_[i]));
            }
        }
        out.push_back(std::move(y));
    }
    return out;
}

Field evaluate_reward(const Reward& reward, const MeasureFamily& m) {
    const SpaceTimeGrid& grid = reward.grid();
    require_shape(m.mass, grid, "measure");
    const auto y = reward.moments(m);
    Field f = reward.static_part();
    for (std::size_t i = 0; i < reward.term_count(); ++i) {
        const FBarFn& fbar = reward.spec().terms[i].fbar;
        const auto gx = reward.g_values(i);
        for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
            const double level = reward.time_weight(k) * fbar(grid.time(k), y[i][k]);
            auto row = f.slice(k);
            for (std::size_t j = 0; j < row.size(); ++j) row[j] += level * gx[j];
        }
    }
    return f;
}

double potential_value(const Reward& reward, const MeasureFamily& m) {
    const SpaceTimeGrid& grid = reward.grid();
    require_shape(m.mass, grid, "measure");
    for (const auto& term : reward.spec().terms) {
        if (!term.fbar.has_antiderivative()) {
            throw Error(ErrorCode::MissingAntiderivative, "potential needs every Fbar");
        }
    }
    const auto y = reward.moments(m);
    double total = pair(reward.static_part(), m, grid.dt());
    for (std::size_t i = 0; i < reward.term_count(); ++i) {
        const FBarFn& fbar = reward.spec().terms[i].fbar;
        for (std::size_t k = 0; k < grid.time_steps(); ++k) {
            total += grid.dt() * reward.time_weight(k) * fbar.antiderivative(grid.time(k), y[i][k]);
        }
    }
    return total;
}

double directional_gain(const Reward& reward, const MeasureFamily& m,
                        const MeasureFamily& target) {
    require_same_shape(m.mass, target.mass, "directional_gain");
    const Field f = evaluate_reward(reward, m);
    const double dt = reward.grid().dt();
    return pair(f, target, dt) - pair(f, m, dt);
}

AntimonotonicityResult antimonotonicity_check(const RewardSpec& spec, double horizon,
                                              double y_max, std::size_t samples,
                                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> time(0.0, horizon);
    std::uniform_real_distribution<double> level(-y_max, y_max);
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        const FBarFn& fbar = spec.terms[i].fbar;
        for (std::size_t s = 0; s < samples; ++s) {
            const double t = time(rng);
            const double y1 = level(rng);
            const double y2 = level(rng);
            const double product = (fbar(t, y1) - fbar(t, y2)) * (y1 - y2);
            if (product > 1e-12) {
                return {false, AntimonotonicityWitness{i, t, y1, y2, product}};
            }
        }
    }
    return {true, std::nullopt};
}

PotentialSegment::PotentialSegment(const Reward& reward, const MeasureFamily& m,
                                   const MeasureFamily& target)
    : reward_(&reward) {
    require_same_shape(m.mass, target.mass, "PotentialSegment");
    base_ = reward.moments(m);
    const auto tip = reward.moments(target);
    delta_.resize(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i) {
        delta_[i].resize(base_[i].size());
        for (std::size_t k = 0; k < base_[i].size(); ++k) delta_[i][k] = tip[i][k] - base_[i][k];
    }
    const double dt = reward.grid().dt();
    static_base_ = pair(reward.static_part(), m, dt);
    static_delta_ = pair(reward.static_part(), target, dt) - static_base_;
}

double PotentialSegment::operator()(double rho) const {
    const SpaceTimeGrid& grid = reward_->grid();
    double total = static_base_ + rho * static_delta_;
    for (std::size_t i = 0; i < base_.size(); ++i) {
        const FBarFn& fbar = reward_->spec().terms[i].fbar;
        for (std::size_t k = 0; k < grid.time_steps(); ++k) {
            const double y = base_[i][k] + rho * delta_[i][k];
            total += grid.dt() * reward_->time_weight(k) * fbar.antiderivative(grid.time(k), y);
        }
    }
    return total;
}

double PotentialSegment::difference(double from, double to) const {
    const SpaceTimeGrid& grid = reward_->grid();
    const double step = to - from;
    double total = step * static_delta_;
    for (std::size_t i = 0; i < base_.size(); ++i) {
        const FBarFn& fbar = reward_->spec().terms[i].fbar;
        for (std::size_t k = 0; k < grid.time_steps(); ++k) {
            total += grid.dt() * reward_->time_weight(k) *
                     fbar.increment(grid.time(k), base_[i][k] + from * delta_[i][k],
                                    step * delta_[i][k]);
        }
    }
    return total;
}

double PotentialSegment::slope_at_zero() const {
    const SpaceTimeGrid& grid = reward_->grid();
    double slope = static_delta_;
    for (std::size_t i = 0; i < base_.size(); ++i) {
        const FBarFn& fbar = reward_->spec().terms[i].fbar;
        for (std::size_t k = 0; k < grid.time_steps(); ++k) {
            slope += grid.dt() * reward_->time_weight(k) * fbar(grid.time(k), base_[i][k]) *
                     delta_[i][k];
        }
    }
    return slope;
}

std::optional<double> PotentialSegment::curvature() const {
    if (!reward_->all_linear()) return std::nullopt;
    const SpaceTimeGrid& grid = reward_->grid();
    double curv = 0.0;
    for (std::size_t i = 0; i < base_.size(); ++i) {
        const double b = *reward_->spec().terms[i].fbar.constant_slope();
        for (std::size_t k = 0; k < grid.time_steps(); ++k) {
            curv -= grid.dt() * reward_->time_weight(k) * b * delta_[i][k] * delta_[i][k];
        }
    }
    return curv;
}

}  // namespace mfgstop
