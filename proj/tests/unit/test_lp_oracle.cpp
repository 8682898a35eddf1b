#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mfgstop/error.hpp"
#include "mfgstop/forward.hpp"
#include "mfgstop/lp_oracle.hpp"
#include "mfgstop/obstacle.hpp"
#include "mfgstop/simplex.hpp"
#include "mfgstop/test_functions.hpp"
#include "support/instances.hpp"

namespace mfgstop {
namespace {

using testing::random_instance;

TEST(Simplex, TextbookProblem) {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
    DenseLp lp{3, 2, std::vector<double>(6, 0.0), {4, 12, 18}, {3, 5}};
    lp.at(0, 0) = 1;
    lp.at(1, 1) = 2;
    lp.at(2, 0) = 3;
    lp.at(2, 1) = 2;
    const auto sol = solve_dense_lp(lp);
    EXPECT_NEAR(sol.value, 36.0, 1e-12);
    EXPECT_NEAR(sol.x[0], 2.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 6.0, 1e-12);
}

TEST(Simplex, Degenerate) {
    // Beale's cycling example terminates under Bland's rule; optimum 5/4.
    DenseLp lp{3, 4, std::vector<double>(12, 0.0), {0, 0, 1}, {0.75, -20, 0.5, -6}};
    const double rows[3][4] = {{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) lp.at(i, j) = rows[i][j];
    }
    EXPECT_NEAR(solve_dense_lp(lp).value, 1.25, 1e-12);
}

TEST(Simplex, UnboundedAndIterationLimit) {
    DenseLp lp{1, 2, {1.0, -1.0}, {1.0}, {0.0, 1.0}};
    try {
        (void)solve_dense_lp(lp);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnboundedLp);
    }
    DenseLp two{1, 1, {1.0}, {1.0}, {1.0}};
    try {
        (void)solve_dense_lp(two, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SimplexIterationLimit);
    }
}

TEST(Enumeration, NegativeRewardStopsEverywhere) {
    const auto inst = random_instance(3, 4, 1);
    const auto r = enumerate_stopping_rules(Field::on(inst.grid, -1.0), inst.transition, inst.m0,
                                            inst.grid.dt());
    EXPECT_EQ(r.best_value, 0.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(r.best_rule[j], 1);
    EXPECT_EQ(r.rules_examined, 1u << 12);
}

TEST(Enumeration, PositiveRewardContinues) {
    const auto inst = random_instance(3, 4, 2);
    const Field f = Field::on(inst.grid, 1.0);
    const auto r = enumerate_stopping_rules(f, inst.transition, inst.m0, inst.grid.dt());
    const double expect = pair(f, all_continue_measure(inst.m0, inst.transition), inst.grid.dt());
    EXPECT_NEAR(r.best_value, expect, 1e-14);
    for (auto s : r.best_rule) EXPECT_EQ(s, 0);
}

TEST(Enumeration, TooLarge) {
    const auto inst = random_instance(3, 6, 3);
    try {
        (void)enumerate_stopping_rules(inst.reward, inst.transition, inst.m0, inst.grid.dt());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InstanceTooLarge);
    }
    const auto big = random_instance(21, 20, 3);
    EXPECT_THROW(lp_solve_small(big.reward, big.transition, big.m0, big.grid.dt()), Error);
}

TEST(LpSolveSmall, ZeroReward) {
    const auto inst = random_instance(3, 4, 4);
    const auto r = lp_solve_small(Field::on(inst.grid), inst.transition, inst.m0, inst.grid.dt());
    EXPECT_EQ(r.value, 0.0);
}

class TinyOracles : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(TinyOracles, TripleAgreement) {
    const auto inst = random_instance(3, 3, GetParam());
    const double dt = inst.grid.dt();
    const double dp = value_at_initial(solve_vi(inst.reward, inst.transition, dt), inst.m0);
    const auto en = enumerate_stopping_rules(inst.reward, inst.transition, inst.m0, dt);
    const auto lp = lp_solve_small(inst.reward, inst.transition, inst.m0, dt);
    EXPECT_NEAR(en.best_value, dp, 1e-12);
    EXPECT_NEAR(lp.value, en.best_value, 1e-12);
    EXPECT_TRUE(is_admissible(lp.measure, inst.m0, inst.transition, kComputedAdmissibilityTol).admissible);
}

INSTANTIATE_TEST_SUITE_P(RandomInstances, TinyOracles, ::testing::Range<std::uint64_t>(1, 31));

class SmallLp : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SmallLp, MatchesDualAndIsComplementary) {
    const auto inst = random_instance(10, 10, GetParam());
    const double dt = inst.grid.dt();
    const auto v = solve_vi(inst.reward, inst.transition, dt);
    const auto lp = lp_solve_small(inst.reward, inst.transition, inst.m0, dt);
    const double dual = value_at_initial(v, inst.m0);
    EXPECT_NEAR(lp.value, dual, 1e-9);
    EXPECT_NEAR(pair(inst.reward, lp.measure, dt), lp.value, 1e-9);
    EXPECT_TRUE(is_admissible(lp.measure, inst.m0, inst.transition, kComputedAdmissibilityTol).admissible);
    const auto comp = complementarity_report(v, inst.reward, lp.measure, inst.transition, dt);
    EXPECT_LE(comp.stop_region_integral, 1e-8);
    EXPECT_LE(comp.continuation_residual, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(RandomInstances, SmallLp, ::testing::Range<std::uint64_t>(1, 6));

TEST(Audit, ZeroMeasureSlackIsInitialTerm) {
    const auto inst = random_instance(8, 12, 5);
    const auto r = test_function_audit(MeasureFamily::zero(inst.grid), inst.m0, inst.transition,
                                       inst.grid, 50, 5);
    EXPECT_GE(r.worst_slack, 0.0);
}

TEST(Audit, ForwardMeasuresPass) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = random_instance(12, 18, seed);
        const auto v = solve_vi(inst.reward, inst.transition, inst.grid.dt());
        const auto m = stopped_forward_measure(v, inst.m0, inst.transition).measure;
        const auto r = test_function_audit(m, inst.m0, inst.transition, inst.grid, 100, seed);
        EXPECT_GE(r.worst_slack, -1e-9 * r.worst_scale);
        const auto bar = all_continue_measure(inst.m0, inst.transition);
        EXPECT_GE(test_function_audit(bar, inst.m0, inst.transition, inst.grid, 100, seed).worst_slack,
                  -1e-9);
    }
}

TEST(Audit, AllContinueSlackIsTerminalExpectation) {
    const auto inst = random_instance(12, 18, 77);
    const auto bar = all_continue_measure(inst.m0, inst.transition);
    std::mt19937_64 rng(77);
    const Field u = random_nonnegative_test_function(inst.grid, rng);
    double terminal = 0.0;
    for (std::size_t j = 0; j < 18; ++j) terminal += bar.mass(12, j) * u(12, j);
    EXPECT_NEAR(weak_form_pairing(bar, inst.m0, inst.transition, u), terminal, 1e-13);
    EXPECT_GE(terminal, 0.0);
}

TEST(Audit, DetectsInflatedNode) {
    // Inflate one interior node of an all-continue family by 50%; with enough
    // random bumps the audit must find a negative slack for every seed.
    const auto grid = build_grid(1.0, 0.0, 1.0, 10, 15);
    const auto p = build_transition_operator(testing::constant_model(0.0, 0.4), grid);
    const auto m0 = InitialMeasure::uniform(grid);
    auto m = all_continue_measure(m0, p);
    m.mass(5, 7) *= 1.5;
    int detected = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        if (test_function_audit(m, m0, p, grid, 100, seed).worst_slack < 0.0) ++detected;
    }
    EXPECT_EQ(detected, 100);
}

}  // namespace
}  // namespace mfgstop
