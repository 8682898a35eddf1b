#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mfgstop/error.hpp"
#include "mfgstop/forward.hpp"
#include "mfgstop/measures.hpp"
#include "mfgstop/obstacle.hpp"
#include "mfgstop/test_functions.hpp"
#include "support/instances.hpp"

namespace mfgstop {
namespace {

using testing::random_instance;

TEST(StoppedForward, NoStoppingEqualsAllContinue) {
    const auto inst = random_instance(8, 10, 1);
    const auto v = solve_vi(Field::on(inst.grid, 5.0), inst.transition, inst.grid.dt());
    const auto out = stopped_forward_measure(v, inst.m0, inst.transition);
    EXPECT_EQ(out.measure, all_continue_measure(inst.m0, inst.transition));
    EXPECT_EQ(out.ledger.total_stopped(), 0.0);
}

TEST(StoppedForward, ImmediateExit) {
    const auto inst = random_instance(8, 10, 2);
    const auto v = solve_vi(Field::on(inst.grid, -1.0), inst.transition, inst.grid.dt());
    const auto out = stopped_forward_measure(v, inst.m0, inst.transition);
    for (double x : out.measure.mass.values()) EXPECT_EQ(x, 0.0);
    EXPECT_NEAR(out.ledger.stopped[0], 1.0, 1e-15);
    EXPECT_EQ(out.ledger.total_absorbed(), 0.0);
    EXPECT_EQ(out.ledger.surviving, 0.0);
}

TEST(FokkerPlanck, ZeroTestFunction) {
    const auto inst = random_instance(8, 10, 3);
    const auto v = solve_vi(inst.reward, inst.transition, inst.grid.dt());
    const auto m = stopped_forward_measure(v, inst.m0, inst.transition).measure;
    EXPECT_EQ(fokker_planck_residual(m, inst.m0, v, inst.transition, Field::on(inst.grid)), 0.0);
}

TEST(FokkerPlanck, RejectsTestFunctionOnStopRegion) {
    const auto inst = random_instance(8, 10, 4);
    const auto v = solve_vi(Field::on(inst.grid, -1.0), inst.transition, inst.grid.dt());
    const auto m = stopped_forward_measure(v, inst.m0, inst.transition).measure;
    Field phi = Field::on(inst.grid);
    phi(2, 5) = 1.0;
    try {
        (void)fokker_planck_residual(m, inst.m0, v, inst.transition, phi);
        FAIL() << "expected SupportViolation";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SupportViolation);
    }
}

TEST(FokkerPlanck, DetectsDeletedMass) {
    const auto grid = build_grid(1.0, 0.0, 1.0, 20, 30);
    const auto model = testing::constant_model(0.1, 0.4);
    const auto p = build_transition_operator(model, grid);
    const auto m0 = InitialMeasure::uniform(grid);
    const auto v = solve_vi(Field::on(grid, 1.0), p, grid.dt());
    auto m = stopped_forward_measure(v, m0, p).measure;
    const std::size_t k = 10, j = 15;
    m.mass(k, j) *= 0.9;
    const Field phi = product_test_function(grid, CoefficientFn::gaussian_bump(1.0, grid.time(k), 0.1),
                                            CoefficientFn::gaussian_bump(1.0, grid.node(j), 0.1));
    const Field clipped = clip_to_continuation(phi, v);
    EXPECT_GT(fokker_planck_residual(m, m0, v, p, clipped), 1e-6);
}

class ForwardProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ForwardProperties, LedgerDualityAndSupport) {
    const auto inst = random_instance(15, 25, GetParam());
    const double dt = inst.grid.dt();
    const auto v = solve_vi(inst.reward, inst.transition, dt);
    const auto out = stopped_forward_measure(v, inst.m0, inst.transition);
    const auto& m = out.measure;

    EXPECT_NEAR(out.ledger.initial, 1.0, 1e-12);
    EXPECT_LE(out.ledger.balance_error(), 1e-12);

    const double value = value_at_initial(v, inst.m0);
    EXPECT_NEAR(pair(inst.reward, m, dt), value, 1e-10 * (1.0 + std::abs(value)));

    const auto report = is_admissible(m, inst.m0, inst.transition, kComputedAdmissibilityTol);
    EXPECT_TRUE(report.admissible);

    const auto bar = all_continue_measure(inst.m0, inst.transition);
    for (std::size_t k = 0; k < inst.grid.time_steps(); ++k) {
        for (std::size_t j = 0; j < inst.grid.nodes(); ++j) {
            EXPECT_LE(m.mass(k, j), bar.mass(k, j) + 1e-12);
            if (v.stops(k, j)) EXPECT_EQ(m.mass(k, j), 0.0);
        }
    }

    const auto comp = complementarity_report(v, inst.reward, m, inst.transition, dt);
    EXPECT_LE(comp.stop_region_integral, 1e-10);
    EXPECT_LE(comp.continuation_residual, 1e-10);
}

TEST_P(ForwardProperties, AccountMassMatchesForwardLedger) {
    const auto inst = random_instance(15, 25, GetParam());
    const auto v = solve_vi(inst.reward, inst.transition, inst.grid.dt());
    const auto out = stopped_forward_measure(v, inst.m0, inst.transition);
    const auto booked = account_mass(out.measure, inst.m0, inst.transition);
    EXPECT_NEAR(booked.initial, out.ledger.initial, 1e-15);
    EXPECT_NEAR(booked.surviving, out.ledger.surviving, 1e-15);
    ASSERT_EQ(booked.stopped.size(), out.ledger.stopped.size());
    ASSERT_EQ(booked.absorbed.size(), out.ledger.absorbed.size());
    for (std::size_t k = 0; k < booked.stopped.size(); ++k) {
        EXPECT_NEAR(booked.stopped[k], out.ledger.stopped[k], 1e-13) << "slice " << k;
        EXPECT_NEAR(booked.absorbed[k], out.ledger.absorbed[k], 1e-13) << "slice " << k;
    }

    // Any admissible family balances, including mixtures that are not forward measures.
    const auto bar = all_continue_measure(inst.m0, inst.transition);
    const auto mix = account_mass(convex_combine(out.measure, bar, 0.3), inst.m0, inst.transition);
    EXPECT_LE(mix.balance_error(), 1e-12);
    for (double x : mix.stopped) EXPECT_GE(x, -1e-13);
}

TEST_P(ForwardProperties, FokkerPlanckIdentity) {
    const auto inst = random_instance(15, 25, GetParam());
    const auto v = solve_vi(inst.reward, inst.transition, inst.grid.dt());
    const auto m = stopped_forward_measure(v, inst.m0, inst.transition).measure;
    std::mt19937_64 rng(GetParam() + 17);
    for (int trial = 0; trial < 10; ++trial) {
        const Field phi = random_continuation_test_function(inst.grid, v, rng);
        ASSERT_TRUE(supported_in_continuation(phi, v));
        const double r = fokker_planck_residual(m, inst.m0, v, inst.transition, phi);
        EXPECT_LE(r, 1e-9 * phi.max_abs() + 1e-300);
    }
}

INSTANTIATE_TEST_SUITE_P(RandomInstances, ForwardProperties, ::testing::Range<std::uint64_t>(1, 21));

TEST(WeakForm, AdjointIdentityForAllContinue) {
    // For the all-continue chain the pairing telescopes to <m^K, u^K> for every u.
    const auto inst = random_instance(10, 14, 9);
    const auto m = all_continue_measure(inst.m0, inst.transition);
    std::mt19937_64 rng(9);
    const Field u = testing::random_field(inst.grid, rng);
    double terminal = 0.0;
    for (std::size_t j = 0; j < 14; ++j) terminal += m.mass(10, j) * u(10, j);
    EXPECT_NEAR(weak_form_pairing(m, inst.m0, inst.transition, u), terminal, 1e-13);
}

}  // namespace
}  // namespace mfgstop
