#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfgstop/coefficient.hpp"
#include "mfgstop/field.hpp"
#include "mfgstop/grid.hpp"
#include "mfgstop/measures.hpp"

namespace mfgstop {

/**
 * Aggregate response fbar(t, y), decreasing in the moment y.
 *
 *   linear_decreasing {a, b}       a + tau(t) - b*y                     b >= 0
 *   exponential       {c, lambda}  c*exp(-lambda*y) + tau(t)            c, lambda >= 0
 *   saturating        {c, d}       c/(1 + max(y,0)) + d + tau(t)        c >= 0
 *   custom            user callables; antiderivative optional
 *
 * tau is the additive time modulation (zero by default). Every catalog kind
 * has a closed-form antiderivative Fbar in y with Fbar(t, 0) = 0.
 */
struct FBarFn {
    enum class Kind { linear_decreasing, exponential, saturating, custom };

    Kind kind = Kind::linear_decreasing;
    double p0 = 0.0;
    double p1 = 0.0;
    CoefficientFn time_modulation = CoefficientFn::constant(0.0);
    std::function<double(double, double)> custom_value;
    std::function<double(double, double)> custom_antiderivative;

    static FBarFn linear(double a, double b) { return make(Kind::linear_decreasing, a, b); }
    static FBarFn exponential(double c, double lambda) { return make(Kind::exponential, c, lambda); }
    static FBarFn saturating(double c, double d) { return make(Kind::saturating, c, d); }
    static FBarFn make(Kind kind, double p0, double p1) {
        FBarFn f;
        f.kind = kind;
        f.p0 = p0;
        f.p1 = p1;
        return f;
    }

    [[nodiscard]] double operator()(double t, double y) const;
    /// Throws MissingAntiderivative for a custom kind without one.
    [[nodiscard]] double antiderivative(double t, double y) const;
    /// Fbar(t, y + dy) - Fbar(t, y) without cancellation for the catalog kinds.
    [[nodiscard]] double increment(double t, double y, double dy) const;
    [[nodiscard]] bool has_antiderivative() const noexcept {
        return kind != Kind::custom || static_cast<bool>(custom_antiderivative);
    }
    /// -d^2 Fbar/dy^2 when it is constant in y (the linear kind), else nullopt.
    [[nodiscard]] std::optional<double> constant_slope() const noexcept;

    /// Throws InvalidReward unless the catalog parameters make fbar decreasing in y.
    void validate() const;
};

std::string_view to_string(FBarFn::Kind kind) noexcept;
std::optional<FBarFn::Kind> parse_fbar_kind(std::string_view name) noexcept;

struct RewardTerm {
    FBarFn fbar;
    CoefficientFn g;
};

/**
 * f(t, x, m) = e^{-rho t} (sum_i fbar_i(t, g_i * m_t) g_i(x) + h(t, x)) + offset(t, x).
 *
 * `offset` is an m-independent grid, typically the folded terminal-reward
 * contribution; an empty Field means zero.
 */
struct RewardSpec {
    std::vector<RewardTerm> terms;
    std::optional<SpaceTimeFn> h;
    double discount_rate = 0.0;
    Field offset;
};

/// A RewardSpec validated and sampled on a grid.
class Reward {
public:
    /// Throws InvalidReward / ShapeMismatch. initial_mass fixes the moment bound.
    Reward(RewardSpec spec, const SpaceTimeGrid& grid, double initial_mass = 1.0);

    [[nodiscard]] const RewardSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const SpaceTimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t term_count() const noexcept { return spec_.terms.size(); }
    [[nodiscard]] double moment_bound(std::size_t term) const { return y_max_.at(term); }
    [[nodiscard]] std::span<const double> g_values(std::size_t term) const {
        return g_values_.at(term);
    }
    [[nodiscard]] double time_weight(std::size_t k) const { return weight_.at(k); }
    /// e^{-rho t} h + offset on the grid.
    [[nodiscard]] const Field& static_part() const noexcept { return static_part_; }
    [[nodiscard]] bool all_linear() const noexcept;
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Moments y_i,k for each term. Throws MomentOutOfRange beyond the bound.
    [[nodiscard]] std::vector<std::vector<double>> moments(const MeasureFamily& m) const;

private:
    RewardSpec spec_;
    SpaceTimeGrid grid_;
    std::vector<double> y_max_;
    std::vector<std::vector<double>> g_values_;
    std::vector<double> weight_;
    Field static_part_;
    std::vector<std::string> warnings_;
};

Field evaluate_reward(const Reward& reward, const MeasureFamily& m);

/// F(m) = sum_i sum_{k<K} dt e^{-rho t_k} Fbar_i(t_k, y_i,k) + pair(static part, m).
double potential_value(const Reward& reward, const MeasureFamily& m);

/// <f(m), target - m> under the left-endpoint pairing; dF/drho at rho = 0.
double directional_gain(const Reward& reward, const MeasureFamily& m, const MeasureFamily& target);

struct AntimonotonicityWitness {
    std::size_t term = 0;
    double t = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    double product = 0.0;
};

struct AntimonotonicityResult {
    bool ok = true;
    std::optional<AntimonotonicityWitness> witness;
};

/// Samples (fbar(t,y1) - fbar(t,y2)) (y1 - y2) <= 1e-12 on [0,T] x [-y_max, y_max]^2.
AntimonotonicityResult antimonotonicity_check(const RewardSpec& spec, double horizon,
                                              double y_max, std::size_t samples,
                                              std::uint64_t seed);

/**
 * phi(rho) = F(m + rho (target - m)) evaluated through the moment paths,
 * which are affine in rho.
 */
class PotentialSegment {
public:
    PotentialSegment(const Reward& reward, const MeasureFamily& m, const MeasureFamily& target);

    [[nodiscard]] double operator()(double rho) const;
    /// phi(to) - phi(from), summed from per-slice increments so the rounding
    /// error scales with |to - from| rather than with |phi|.
    [[nodiscard]] double difference(double from, double to) const;
    [[nodiscard]] double gain(double rho) const { return difference(0.0, rho); }
    [[nodiscard]] double slope_at_zero() const;
    /// phi'' when every term is linear (phi is then quadratic), else nullopt.
    [[nodiscard]] std::optional<double> curvature() const;

private:
    const Reward* reward_;
    std::vector<std::vector<double>> base_;
    std::vector<std::vector<double>> delta_;
    double static_base_ = 0.0;
    double static_delta_ = 0.0;
};

}  // namespace mfgstop
