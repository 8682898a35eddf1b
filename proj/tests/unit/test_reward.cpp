#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mfgstop/error.hpp"
#include "mfgstop/forward.hpp"
#include "mfgstop/obstacle.hpp"
#include "mfgstop/reward.hpp"
#include "support/instances.hpp"

namespace mfgstop {
namespace {

using testing::random_instance;

RewardSpec single_term(FBarFn fbar, CoefficientFn g = CoefficientFn::constant(1.0)) {
    RewardSpec spec;
    spec.terms.push_back({std::move(fbar), std::move(g)});
    return spec;
}

MeasureFamily random_admissible(const testing::Instance& inst, std::mt19937_64& rng) {
    const auto v = solve_vi(testing::random_field(inst.grid, rng), inst.transition, inst.grid.dt());
    return stopped_forward_measure(v, inst.m0, inst.transition).measure;
}

std::vector<FBarFn> catalog() {
    FBarFn modulated = FBarFn::linear(1.0, 0.8);
    modulated.time_modulation = CoefficientFn::affine(0.0, -0.5);
    return {FBarFn::linear(1.0, 2.0), FBarFn::exponential(1.5, 2.0), FBarFn::exponential(0.7, 0.0),
            FBarFn::saturating(2.0, -0.4), modulated};
}

TEST(EvaluateReward, Decoupled) {
    const auto inst = random_instance(4, 6, 1);
    const Reward reward(single_term(FBarFn::linear(1.0, 0.0)), inst.grid);
    const auto m = all_continue_measure(inst.m0, inst.transition);
    const Field f = evaluate_reward(reward, m);
    for (double v : f.values()) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(EvaluateReward, HalfMassSlices) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 2, 2);
    const Reward reward(single_term(FBarFn::linear(1.0, 1.0)), grid);
    MeasureFamily m{Field::on(grid, 0.25)};
    const Field f = evaluate_reward(reward, m);
    for (double v : f.values()) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(EvaluateReward, SaturatingAtZero) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 3, 4);
    const Reward reward(single_term(FBarFn::saturating(2.0, 0.0)), grid);
    const Field f = evaluate_reward(reward, MeasureFamily::zero(grid));
    for (double v : f.values()) EXPECT_DOUBLE_EQ(v, 2.0);
}

TEST(EvaluateReward, AddsDiscountedHAndOffset) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 2, 3);
    RewardSpec spec = single_term(FBarFn::linear(1.0, 0.0), CoefficientFn::affine(0.0, 1.0));
    spec.h = SpaceTimeFn{CoefficientFn::constant(2.0)};
    spec.discount_rate = 0.5;
    spec.offset = Field::on(grid, 0.1);
    const Reward reward(spec, grid);
    const Field f = evaluate_reward(reward, MeasureFamily::zero(grid));
    for (std::size_t k = 0; k <= 2; ++k) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double w = std::exp(-0.5 * grid.time(k));
            EXPECT_NEAR(f(k, j), w * (grid.node(j) + 2.0) + 0.1, 1e-15);
        }
    }
}

TEST(EvaluateReward, MomentOutOfRange) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 2, 2);
    const Reward reward(single_term(FBarFn::linear(1.0, 1.0)), grid);
    MeasureFamily m{Field::on(grid, 0.75)};
    try {
        (void)evaluate_reward(reward, m);
        FAIL() << "expected MomentOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MomentOutOfRange);
    }
}

TEST(RewardValidation, RejectsIncreasingAndTabulated) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 2, 2);
    EXPECT_THROW(Reward(single_term(FBarFn::linear(1.0, -0.5)), grid), Error);
    EXPECT_THROW(Reward(single_term(FBarFn::exponential(-1.0, 1.0)), grid), Error);
    EXPECT_THROW(Reward(single_term(FBarFn::saturating(-1.0, 0.0)), grid), Error);
    const CoefficientFn tab(CoefficientFn::Kind::tabulated, {0.0, 1.0, 1.0, 2.0});
    EXPECT_THROW(Reward(single_term(FBarFn::linear(1.0, 1.0), tab), grid), Error);
}

TEST(RewardValidation, VanishingCouplingWarns) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 2, 2);
    const Reward reward(single_term(FBarFn::linear(1.0, 1.0), CoefficientFn::constant(0.0)), grid);
    EXPECT_EQ(reward.warnings().size(), 1u);
}

TEST(Antimonotonicity, Examples) {
    EXPECT_TRUE(antimonotonicity_check(single_term(FBarFn::linear(1.0, 0.5)), 1.0, 2.0, 1000, 1).ok);
    EXPECT_TRUE(antimonotonicity_check(single_term(FBarFn::exponential(1.0, 2.0)), 1.0, 2.0, 1000, 1).ok);
    const auto bad = antimonotonicity_check(single_term(FBarFn::linear(1.0, -0.5)), 1.0, 2.0, 1000, 1);
    ASSERT_FALSE(bad.ok);
    ASSERT_TRUE(bad.witness.has_value());
    EXPECT_GT(bad.witness->product, 0.0);
    EXPECT_NEAR(bad.witness->product, 0.5 * std::pow(bad.witness->y1 - bad.witness->y2, 2), 1e-12);
}

TEST(Antimonotonicity, CatalogPasses) {
    for (const auto& fbar : catalog()) {
        EXPECT_TRUE(antimonotonicity_check(single_term(fbar), 2.0, 3.0, 2000, 7).ok);
    }
}

TEST(Potential, ZeroMeasure) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 4, 5);
    for (const auto& fbar : catalog()) {
        EXPECT_EQ(potential_value(Reward(single_term(fbar), grid), MeasureFamily::zero(grid)), 0.0);
    }
}

TEST(Potential, TwoSliceHandCheck) {
    const auto grid = build_grid(2.0, 0.0, 1.0, 2, 2);  // dt = 1
    const Reward reward(single_term(FBarFn::linear(1.0, 1.0)), grid);
    MeasureFamily m = MeasureFamily::zero(grid);
    m.mass(0, 0) = 0.2;
    m.mass(0, 1) = 0.3;
    m.mass(1, 0) = 0.25;
    EXPECT_DOUBLE_EQ(potential_value(reward, m), 0.59375);
}

TEST(Potential, MissingAntiderivative) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 2, 2);
    FBarFn custom;
    custom.kind = FBarFn::Kind::custom;
    custom.custom_value = [](double, double y) { return 1.0 - y; };
    const Reward reward(single_term(custom), grid);
    EXPECT_NO_THROW((void)evaluate_reward(reward, MeasureFamily::zero(grid)));
    try {
        (void)potential_value(reward, MeasureFamily::zero(grid));
        FAIL() << "expected MissingAntiderivative";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingAntiderivative);
    }
}

TEST(FBar, AntiderivativeMatchesCentralDifference) {
    for (const auto& fbar : catalog()) {
        for (double t : {0.0, 0.4, 1.0}) {
            EXPECT_EQ(fbar.antiderivative(t, 0.0), 0.0);
            for (double y = -1.0; y <= 2.0; y += 0.125) {
                if (fbar.kind == FBarFn::Kind::saturating && std::abs(y) < 1e-3) continue;  // kink
                const double h = 1e-5;
                const double fd = (fbar.antiderivative(t, y + h) - fbar.antiderivative(t, y - h)) / (2 * h);
                EXPECT_NEAR(fd, fbar(t, y), 1e-6 * (1.0 + std::abs(fbar(t, y))));
            }
        }
    }
}

class RewardProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RewardProperties, GradientConsistency) {
    const auto inst = random_instance(15, 20, GetParam());
    std::mt19937_64 rng(GetParam() + 100);
    const auto m = random_admissible(inst, rng);
    const auto target = random_admissible(inst, rng);
    for (const auto& fbar : catalog()) {
        RewardSpec spec = single_term(fbar, CoefficientFn::polynomial({0.5, 0.3, -0.2}));
        spec.h = SpaceTimeFn{CoefficientFn::gaussian_bump(0.4, 0.0, 0.5)};
        spec.discount_rate = 0.3;
        const Reward reward(spec, inst.grid);
        // Direction toward target; central differences at rho = 1/2.
        const auto mid = convex_combine(m, target, 0.5);
        const double gain = directional_gain(reward, mid, target);
        const PotentialSegment seg(reward, m, target);
        const double exact = 2.0 * gain;  // target - mid = (target - m) / 2
        for (double eps : {1e-4, 1e-5, 1e-6}) {
            const double fd = (seg(0.5 + eps) - seg(0.5 - eps)) / (2 * eps);
            EXPECT_NEAR(fd, exact, 1e-6 * (1.0 + std::abs(exact))) << to_string(fbar.kind) << " eps " << eps;
        }
        EXPECT_NEAR(seg.slope_at_zero(), directional_gain(reward, m, target), 1e-12);
        EXPECT_NEAR(seg(0.0), potential_value(reward, m), 1e-12);
        EXPECT_NEAR(seg(1.0), potential_value(reward, target), 1e-12);
    }
}

TEST_P(RewardProperties, ConcavityAlongSegments) {
    const auto inst = random_instance(15, 20, GetParam());
    std::mt19937_64 rng(GetParam() + 200);
    const auto m1 = random_admissible(inst, rng);
    const auto m2 = random_admissible(inst, rng);
    for (const auto& fbar : catalog()) {
        const Reward reward(single_term(fbar, CoefficientFn::affine(1.0, 0.5)), inst.grid);
        const double f1 = potential_value(reward, m1), f2 = potential_value(reward, m2);
        for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double mix = potential_value(reward, convex_combine(m1, m2, rho));
            EXPECT_GE(mix, (1 - rho) * f1 + rho * f2 - 1e-10);
        }
    }
}

TEST_P(RewardProperties, AntimonotonePairing) {
    const auto inst = random_instance(15, 20, GetParam());
    std::mt19937_64 rng(GetParam() + 300);
    const auto m1 = random_admissible(inst, rng);
    const auto m2 = random_admissible(inst, rng);
    for (const auto& fbar : catalog()) {
        const Reward reward(single_term(fbar, CoefficientFn::cosine_bump(1.0, 0.0, 1.0)), inst.grid);
        const auto y1 = reward.moments(m1)[0], y2 = reward.moments(m2)[0];
        double acc = 0.0;
        for (std::size_t k = 0; k < inst.grid.time_steps(); ++k) {
            const double t = inst.grid.time(k);
            acc += inst.grid.dt() * (fbar(t, y1[k]) - fbar(t, y2[k])) * (y1[k] - y2[k]);
        }
        EXPECT_LE(acc, 1e-10);
    }
}

TEST_P(RewardProperties, DecoupledGainIsPairDifference) {
    const auto inst = random_instance(10, 12, GetParam());
    std::mt19937_64 rng(GetParam() + 400);
    const auto m = random_admissible(inst, rng);
    const auto target = random_admissible(inst, rng);
    const Reward reward(single_term(FBarFn::linear(0.7, 0.0), CoefficientFn::affine(0.2, 1.0)), inst.grid);
    const Field f = evaluate_reward(reward, MeasureFamily::zero(inst.grid));
    const double dt = inst.grid.dt();
    EXPECT_NEAR(directional_gain(reward, m, target), pair(f, target, dt) - pair(f, m, dt), 1e-14);
    EXPECT_EQ(directional_gain(reward, m, m), 0.0);
}

INSTANTIATE_TEST_SUITE_P(RandomInstances, RewardProperties, ::testing::Range<std::uint64_t>(1, 11));

TEST(PotentialSegment, CurvatureOnlyForLinear) {
    const auto inst = random_instance(6, 8, 3);
    std::mt19937_64 rng(3);
    const auto m = random_admissible(inst, rng);
    const auto t = random_admissible(inst, rng);
    const Reward lin(single_term(FBarFn::linear(1.0, 2.0)), inst.grid);
    const PotentialSegment seg(lin, m, t);
    ASSERT_TRUE(seg.curvature().has_value());
    const double h = 1e-3;
    EXPECT_NEAR(*seg.curvature(), (seg(0.5 + h) - 2 * seg(0.5) + seg(0.5 - h)) / (h * h), 1e-6);
    EXPECT_LE(*seg.curvature(), 0.0);
    const Reward expo(single_term(FBarFn::exponential(1.0, 2.0)), inst.grid);
    EXPECT_FALSE(PotentialSegment(expo, m, t).curvature().has_value());
}

}  // namespace
}  // namespace mfgstop
