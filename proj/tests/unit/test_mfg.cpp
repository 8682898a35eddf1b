#include <gtest/gtest.h>

#include <cmath>
#include <ostream>
#include <random>

#include "mfgstop/error.hpp"
#include "mfgstop/lp_oracle.hpp"
#include "mfgstop/mfg.hpp"
#include "support/instances.hpp"

namespace mfgstop {
namespace {

using testing::constant_model;

RewardSpec single_term(FBarFn fbar, CoefficientFn g = CoefficientFn::constant(1.0)) {
    RewardSpec spec;
    spec.terms.push_back({std::move(fbar), std::move(g)});
    return spec;
}

MfgProblem congestion(std::size_t k, std::size_t j, FBarFn fbar = FBarFn::linear(1.0, 2.0)) {
    const auto grid = build_grid(1.0, 0.0, 1.0, k, j);
    return make_problem(grid, constant_model(0.0, 0.5), InitialMeasure::uniform(grid),
                        single_term(std::move(fbar)));
}

FBarFn shifted(FBarFn fbar, double tau) {
    fbar.time_modulation = CoefficientFn::constant(tau);
    return fbar;
}

MeasureFamily random_forward(const MfgProblem& p, std::mt19937_64& rng) {
    const auto v = solve_vi(testing::random_field(p.grid, rng), p.transition, p.grid.dt());
    return stopped_forward_measure(v, p.initial, p.transition).measure;
}

TEST(BestResponse, DecoupledIgnoresMeasure) {
    const auto p = congestion(10, 12, FBarFn::linear(0.5, 0.0));
    std::mt19937_64 rng(1);
    const auto a = best_response(p, MeasureFamily::zero(p.grid));
    const auto b = best_response(p, random_forward(p, rng));
    EXPECT_EQ(a.forward.measure, b.forward.measure);
}

TEST(BestResponse, StrongCongestionStopsImmediately) {
    // f = 0.5 - 10 y < 0 at full mass: every agent leaves at once.
    const auto p = congestion(10, 12, FBarFn::linear(0.5, 10.0));
    const auto bar = all_continue_measure(p.initial, p.transition);
    const auto r = best_response(p, bar);
    for (double x : r.reward.slice(0)) EXPECT_LT(x, 0.0);
    bool all_negative = true;
    for (std::size_t k = 0; k < p.grid.time_steps(); ++k) {
        for (double x : r.reward.slice(k)) all_negative = all_negative && x < 0.0;
    }
    ASSERT_TRUE(all_negative);
    for (double x : r.forward.measure.mass.values()) EXPECT_EQ(x, 0.0);
}

TEST(BestResponse, MatchesLpOracle) {
    const auto p = congestion(8, 10, FBarFn::exponential(1.0, 3.0));
    std::mt19937_64 rng(2);
    const auto m = random_forward(p, rng);
    const auto r = best_response(p, m);
    const auto lp = lp_solve_small(r.reward, p.transition, p.initial, p.grid.dt());
    EXPECT_NEAR(r.response_payoff, lp.value, 1e-9);
}

TEST(Exploitability, PositiveWhenDeviationPays) {
    const auto p = congestion(10, 12);
    EXPECT_GT(exploitability(p, MeasureFamily::zero(p.grid)), 0.0);
}

TEST(LineSearch, DecoupledIsBang) {
    const auto p = congestion(10, 12, FBarFn::linear(0.5, 0.0));
    const auto zero = MeasureFamily::zero(p.grid);
    const auto bar = all_continue_measure(p.initial, p.transition);
    EXPECT_EQ(line_search(p.reward, zero, bar).rho, 1.0);
    EXPECT_EQ(line_search(p.reward, bar, zero).rho, 0.0);
}

TEST(LineSearch, ZeroDirectionPicksZero) {
    const auto bar = all_continue_measure(congestion(10, 12).initial, congestion(10, 12).transition);
    for (auto fbar : {FBarFn::linear(1.0, 2.0), FBarFn::exponential(1.0, 2.0)}) {
        const auto p = congestion(10, 12, fbar);
        EXPECT_EQ(line_search(p.reward, bar, bar).rho, 0.0);
    }
}

TEST(LineSearch, ClosedFormMatchesGoldenSection) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        const double b = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
        const auto p = congestion(12, 15, FBarFn::linear(1.0, b));
        const auto m = random_forward(p, rng);
        const auto target = random_forward(p, rng);
        const auto closed = line_search(p.reward, m, target);
        EXPECT_TRUE(closed.closed_form);
        EXPECT_NEAR(closed.rho, golden_section_line_search(p.reward, m, target), 1e-8);
    }
}

TEST(LineSearch, NonConcaveDetected) {
    FBarFn increasing;
    increasing.kind = FBarFn::Kind::custom;
    increasing.custom_value = [](double, double y) { return 10.0 * y; };
    increasing.custom_antiderivative = [](double, double y) { return 5.0 * y * y; };
    const auto p = congestion(10, 12, increasing);
    const auto zero = MeasureFamily::zero(p.grid);
    const auto bar = all_continue_measure(p.initial, p.transition);
    try {
        (void)line_search(p.reward, zero, bar);
        FAIL() << "expected NonConcaveDetected";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonConcaveDetected);
    }
}

TEST(FixedPoint, DecoupledConvergesInOneIteration) {
    const auto p = congestion(20, 20, FBarFn::linear(0.5, 0.0));
    const auto r = fixed_point_solve(p, MeasureFamily::zero(p.grid));
    EXPECT_EQ(r.status, SolveStatus::converged);
    EXPECT_EQ(r.iterations, 1u);
    ASSERT_EQ(r.trace.records.size(), 1u);
    EXPECT_EQ(r.trace.records[0].rho, 1.0);
    EXPECT_NEAR(r.exploitability(), 0.0, 1e-12);
}

TEST(FixedPoint, RejectsInadmissibleStart) {
    const auto p = congestion(10, 10);
    MeasureFamily m{Field::on(p.grid, 0.2)};
    EXPECT_THROW(fixed_point_solve(p, m), Error);
}

TEST(FixedPoint, ReportsIterationLimit) {
    const auto p = congestion(30, 30, shifted(FBarFn::exponential(1.0, 4.0), -0.4));
    const auto r = fixed_point_solve(p, MeasureFamily::zero(p.grid), {1, 1e-14});
    EXPECT_EQ(r.status, SolveStatus::max_iters_exceeded);
    EXPECT_GT(r.exploitability(), 1e-14);
}

struct CatalogCase {
    const char* name;
    FBarFn fbar;
};

void PrintTo(const CatalogCase& c, std::ostream* os) { *os << c.name; }

class FixedPointCatalog : public ::testing::TestWithParam<CatalogCase> {};

TEST_P(FixedPointCatalog, ConvergedEquilibriumProperties) {
    const auto p = congestion(30, 30, GetParam().fbar);
    const auto zero = MeasureFamily::zero(p.grid);
    const auto bar = all_continue_measure(p.initial, p.transition);
    const auto a = fixed_point_solve(p, zero);
    const auto b = fixed_point_solve(p, bar);
    const double dt = p.grid.dt();
    for (const auto* run : {&a, &b}) {
        ASSERT_EQ(run->status, SolveStatus::converged);
        EXPECT_LE(run->exploitability(), 1e-6);
        double previous = run->trace.initial_potential;
        for (const auto& rec : run->trace.records) {
            EXPECT_GE(rec.potential, previous - 1e-12);
            EXPECT_GE(rec.exploitability, -1e-10);
            previous = rec.potential;
        }
        EXPECT_TRUE(is_admissible(run->m_star, p.initial, p.transition, kComputedAdmissibilityTol).admissible);

        const Field f = evaluate_reward(p.reward, run->m_star);
        const double value = value_at_initial(run->v_star(), p.initial);
        EXPECT_NEAR(value, run->response.response_payoff, 1e-10 * (1 + std::abs(value)));
        EXPECT_NEAR(value, pair(f, run->m_star, dt), 1e-6);
        EXPECT_LE(directional_gain(p.reward, run->m_star, run->response.forward.measure), 1e-6);
    }
    const auto cmp = compare_equilibria(p, a, b);
    EXPECT_LE(cmp.value_gap, 1e-6);
    EXPECT_LE(cmp.moment_l1_distance, 1e-4);

    std::mt19937_64 rng(99);
    const double best = potential_value(p.reward, a.m_star);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = convex_combine(random_forward(p, rng), random_forward(p, rng),
                                      std::uniform_real_distribution<double>(0, 1)(rng));
        EXPECT_GE(best, potential_value(p.reward, m) - 1e-6);
    }
}

TEST_P(FixedPointCatalog, ComplementarityAtTightTolerance) {
    // Frank-Wolfe closes the gap at rate 1/n and both residuals shrink with it,
    // so the equilibrium conditions are checked on a tightly converged iterate.
    const auto p = congestion(30, 30, GetParam().fbar);
    const auto run = fixed_point_solve(p, MeasureFamily::zero(p.grid), {200000, 5e-9});
    ASSERT_EQ(run.status, SolveStatus::converged);
    const Field f = evaluate_reward(p.reward, run.m_star);
    const auto comp = complementarity_report(run.v_star(), f, run.m_star, p.transition, p.grid.dt());
    EXPECT_LE(comp.stop_region_integral, 1e-7);
    EXPECT_LE(comp.continuation_residual, 1e-7);
}

INSTANTIATE_TEST_SUITE_P(
    Catalog, FixedPointCatalog,
    ::testing::Values(CatalogCase{"linear", FBarFn::linear(1.0, 2.0)},
                      CatalogCase{"exponential", shifted(FBarFn::exponential(1.0, 3.0), -0.4)},
                      CatalogCase{"saturating", FBarFn::saturating(1.5, -0.8)}),
    [](const auto& info) { return std::string(info.param.name); });

}  // namespace
}  // namespace mfgstop
