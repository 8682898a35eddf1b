#include "mfgstop/mfg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mfgstop/error.hpp"

namespace mfgstop {

MfgProblem make_problem(const SpaceTimeGrid& grid, const DiffusionModel& model,
                        InitialMeasure initial, RewardSpec reward) {
    model.validate(grid);
    if (initial.mass.size() != grid.nodes()) {
        throw Error(ErrorCode::ShapeMismatch, "initial law does not match the grid");
    }
    const double mass = initial.total();
    return MfgProblem{grid, model, std::move(initial), build_transition_operator(model, grid),
                      Reward(std::move(reward), grid, mass)};
}

BestResponse best_response(const MfgProblem& problem, const MeasureFamily& m) {
    const double dt = problem.grid.dt();
    BestResponse br;
    br.reward = evaluate_reward(problem.reward, m);
    br.value = solve_vi(br.reward, problem.transition, dt);
    br.forward = stopped_forward_measure(br.value, problem.initial, problem.transition);
    br.response_payoff = pair(br.reward, br.forward.measure, dt);
    br.current_payoff = pair(br.reward, m, dt);
    return br;
}

double exploitability(const MfgProblem& problem, const MeasureFamily& m) {
    return best_response(problem, m).exploitability();
}

double golden_section_line_search(const Reward& reward, const MeasureFamily& m,
                                  const MeasureFamily& target, double width) {
    const PotentialSegment phi(reward, m, target);
    constexpr double inv_golden = 0.6180339887498949;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - inv_golden * (hi - lo), x2 = lo + inv_golden * (hi - lo);
    // Interior points are compared through phi(x2) - phi(x1) directly, which
    // resolves the maximizer far below the square root of machine epsilon.
    while (hi - lo > width) {
        if (phi.difference(x1, x2) <= 0.0) {
            hi = x2;
            x2 = x1;
            x1 = hi - inv_golden * (hi - lo);
        } else {
            lo = x1;
            x1 = x2;
            x2 = lo + inv_golden * (hi - lo);
        }
    }
    const double mid = 0.5 * (lo + hi);
    // The bracket never reaches the endpoints exactly; compare against them.
    double best = phi.gain(mid) > 0.0 ? mid : 0.0;
    if (phi.difference(best, 1.0) > 0.0) best = 1.0;
    return best;
}

LineSearchResult line_search(const Reward& reward, const MeasureFamily& m,
                             const MeasureFamily& target) {
    const PotentialSegment phi(reward, m, target);
    if (const auto curvature = phi.curvature()) {
        const double slope = phi.slope_at_zero();
        double rho = 0.0;
        if (slope > 0.0) rho = *curvature < 0.0 ? std::min(1.0, -slope / *curvature) : 1.0;
        return {rho, true};
    }

    constexpr double kConcavitySlack = 1e-8;
    const double p[5] = {0.0, phi.gain(0.25), phi.gain(0.5), phi.gain(0.75), phi.gain(1.0)};
    const bool concave = p[2] >= 0.5 * (p[0] + p[4]) - kConcavitySlack &&
                         p[1] >= 0.5 * (p[0] + p[2]) - kConcavitySlack &&
                         p[3] >= 0.5 * (p[2] + p[4]) - kConcavitySlack;
    if (!concave) {
        throw Error(ErrorCode::NonConcaveDetected, "potential is not concave along the segment");
    }
    return {golden_section_line_search(reward, m, target), false};
}

FixedPointResult fixed_point_solve(const MfgProblem& problem, const MeasureFamily& m_init,
                                   const FixedPointOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const auto admissible = is_admissible(m_init, problem.initial, problem.transition,
                                          kComputedAdmissibilityTol);
    if (!admissible.admissible) {
        throw Error(ErrorCode::InvalidMeasure, "initial iterate is not admissible");
    }

    FixedPointResult result;
    result.m_star = m_init;
    result.response = best_response(problem, m_init);
    result.trace.initial_potential = potential_value(problem.reward, m_init);
    result.trace.initial_exploitability = result.response.exploitability();

    MeasureFamily m = m_init;
    BestResponse br = result.response;
    double best_eps = br.exploitability();
    result.status = best_eps <= options.eps_tol ? SolveStatus::converged
                                                : SolveStatus::max_iters_exceeded;

    for (std::size_t it = 1; it <= options.max_iters && best_eps > options.eps_tol; ++it) {
        const LineSearchResult step = line_search(problem.reward, m, br.forward.measure);
        m = convex_combine(m, br.forward.measure, step.rho);
        br = best_response(problem, m);

        IterationRecord record;
        record.iteration = it;
        record.potential = potential_value(problem.reward, m);
        record.exploitability = br.exploitability();
        record.rho = step.rho;
        record.moments = problem.reward.moments(m);
        record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.trace.records.push_back(std::move(record));
        result.iterations = it;

        if (br.exploitability() < best_eps) {
            best_eps = br.exploitability();
            result.m_star = m;
            result.response = br;
        }
        if (best_eps <= options.eps_tol) result.status = SolveStatus::converged;
    }
    return result;
}

EquilibriumComparison compare_equilibria(const MfgProblem& problem, const FixedPointResult& a,
                                         const FixedPointResult& b) {
    EquilibriumComparison cmp;
    cmp.value_gap = std::abs(value_at_initial(a.v_star(), problem.initial) -
                             value_at_initial(b.v_star(), problem.initial));
    const auto ya = problem.reward.moments(a.m_star);
    const auto yb = problem.reward.moments(b.m_star);
    for (std::size_t i = 0; i < ya.size(); ++i) {
        for (std::size_t k = 0; k < problem.grid.time_steps(); ++k) {
            cmp.moment_l1_distance += problem.grid.dt() * std::abs(ya[i][k] - yb[i][k]);
        }
    }
    return cmp;
}

}  // namespace mfgstop
