#include "mfgstop_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "mfgstop/error.hpp"
#include "mfgstop/forward.hpp"
#include "mfgstop/lp_oracle.hpp"
#include "mfgstop/mfg.hpp"
#include "mfgstop/montecarlo.hpp"
#include "mfgstop/obstacle.hpp"
#include "mfgstop/test_functions.hpp"
#include "mfgstop_cli/config.hpp"
#include "mfgstop_cli/io.hpp"

namespace mfgstop::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::size_t kAuditFunctions = 100;
constexpr std::size_t kFokkerPlanckFunctions = 10;

ExitCode classify(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularSystem:
        case ErrorCode::SimplexIterationLimit:
        case ErrorCode::NonConcaveDetected:
        case ErrorCode::UnboundedLp:
            return ExitCode::solver;
        default:
            return ExitCode::validation;
    }
}

MfgProblem problem_from(const RunConfig& cfg) {
    return make_problem(cfg.grid, cfg.model, cfg.initial, cfg.reward);
}

ordered_json ledger_json(const MassLedger& ledger) {
    return ordered_json{{"initial", ledger.initial},
                        {"surviving", ledger.surviving},
                        {"stopped_total", ledger.total_stopped()},
                        {"absorbed_total", ledger.total_absorbed()},
                        {"balance_error", ledger.balance_error()},
                        {"stopped", ledger.stopped},
                        {"absorbed", ledger.absorbed}};
}

ordered_json summary_json(double value, std::size_t iterations, double exploitability,
                          double duality_gap, const MassLedger& ledger) {
    return ordered_json{{"value", value},
                        {"iterations", iterations},
                        {"exploitability", exploitability},
                        {"duality_gap", duality_gap},
                        {"stopped_mass", ledger.total_stopped()},
                        {"absorbed_mass", ledger.total_absorbed()},
                        {"surviving_mass", ledger.surviving}};
}

void write_manifest(const fs::path& out, const std::string& command) {
    write_json(out / "manifest.json", ordered_json{{"command", command}});
}

ExitCode solve_stop(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const MfgProblem problem = problem_from(cfg);
    const BestResponse br = best_response(problem, MeasureFamily::zero(problem.grid));
    const double value = value_at_initial(br.value, problem.initial);
    const MeasureFamily& m = br.forward.measure;
    const double payoff = pair(br.reward, m, problem.grid.dt());

    write_grid_csv(out / "value.csv", problem.grid, br.value.values);
    write_grid_csv(out / "measure.csv", problem.grid, m.mass);
    write_json(out / "ledger.json", ledger_json(br.forward.ledger));
    write_json(out / "summary.json", summary_json(value, 0, exploitability(problem, m),
                                                  std::abs(value - payoff), br.forward.ledger));
    write_manifest(out, "solve-stop");
    log << "value " << format_double(value) << ", stopped mass "
        << format_double(br.forward.ledger.total_stopped()) << '\n';
    return ExitCode::ok;
}

ExitCode solve_mfg(const RunConfig& cfg, const fs::path& out, std::ostream& log, std::ostream& err) {
    const MfgProblem problem = problem_from(cfg);
    const MeasureFamily start = cfg.start == StartMeasure::zero
                                    ? MeasureFamily::zero(problem.grid)
                                    : all_continue_measure(problem.initial, problem.transition);
    const FixedPointResult result = fixed_point_solve(problem, start, cfg.algorithm);

    const double value = value_at_initial(result.v_star(), problem.initial);
    const double payoff = pair(result.response.reward, result.m_star, problem.grid.dt());
    const MassLedger ledger = account_mass(result.m_star, problem.initial, problem.transition);

    write_grid_csv(out / "measure.csv", problem.grid, result.m_star.mass);
    write_grid_csv(out / "value.csv", problem.grid, result.v_star().values);
    write_moments_csv(out / "moments.csv", problem.grid, problem.reward.moments(result.m_star));
    write_trace_csv(out / "trace.csv", result.trace);
    write_json(out / "ledger.json", ledger_json(ledger));
    write_json(out / "summary.json", summary_json(value, result.iterations, result.exploitability(),
                                                  std::abs(value - payoff), ledger));
    write_manifest(out, "solve-mfg");

    log << "iterations " << result.iterations << ", exploitability "
        << format_double(result.exploitability()) << ", value " << format_double(value) << '\n';
    if (result.status != SolveStatus::converged) {
        err << "error: exploitability " << format_double(result.exploitability()) << " above eps_tol "
            << format_double(cfg.algorithm.eps_tol) << " after " << result.iterations
            << " iterations\n";
        return ExitCode::solver;
    }
    return ExitCode::ok;
}

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

std::string read_command(const fs::path& out) {
    const auto manifest = read_json(out / "manifest.json");
    if (!manifest.contains("command") || !manifest["command"].is_string()) {
        throw ArtifactError("manifest.json: missing command");
    }
    return manifest["command"].get<std::string>();
}

/// Smallest positive value over slices 0..K-1 where phi is nonzero (or all continuation nodes).
double min_positive_value(const ValueFunction& v, const Field* phi) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < v.slices(); ++k) {
        for (std::size_t j = 0; j < v.nodes(); ++j) {
            if (v.stops(k, j) || (phi && (*phi)(k, j) == 0.0)) continue;
            lo = std::min(lo, v.values(k, j));
        }
    }
    return lo;
}

/// Sum over stop nodes of m^k_j (P_k v^{k+1})_j. On a stop node dt|f| = s + P v with
/// obstacle slack s >= 0, and the slack-weighted mass is bounded by the duality gap,
/// so this term is the part of the stop-region integral the gap does not control.
double stop_region_carry(const ValueFunction& v, const MeasureFamily& m,
                         const TransitionOperator& transition) {
    std::vector<double> carried(v.nodes());
    double total = 0.0;
    for (std::size_t k = 0; k < transition.steps(); ++k) {
        transition.at(k).apply(v.values.slice(k + 1), carried);
        for (std::size_t j = 0; j < v.nodes(); ++j) {
            if (v.stops(k, j)) total += m.mass(k, j) * carried[j];
        }
    }
    return total;
}

ExitCode verify(const RunConfig& cfg, const fs::path& out, std::uint64_t seed, std::ostream& log,
                std::ostream& err) {
    const std::string command = read_command(out);
    if (command != "solve-stop" && command != "solve-mfg") {
        throw ArtifactError("manifest.json: unknown command '" + command + "'");
    }
    const bool equilibrium = command == "solve-mfg";
    const MfgProblem problem = problem_from(cfg);
    const SpaceTimeGrid& grid = problem.grid;
    const double dt = grid.dt();
    const MeasureFamily m{read_grid_csv(out / "measure.csv", grid)};
    const ValueFunction v = classify_stopping(read_grid_csv(out / "value.csv", grid));

    std::vector<Check> checks;
    auto add = [&](std::string name, double measured, double tolerance) {
        checks.push_back({std::move(name), measured <= tolerance, measured, tolerance});
    };

    const auto adm = is_admissible(m, problem.initial, problem.transition, kComputedAdmissibilityTol);
    add("admissibility", std::max(adm.worst_violation, 0.0), kComputedAdmissibilityTol);
    const auto audit = test_function_audit(m, problem.initial, problem.transition, grid,
                                           kAuditFunctions, seed);
    add("test_function_audit", std::max(-audit.worst_normalized, 0.0), 1e-9);

    if (!adm.admissible) {
        // The reward is undefined off the admissible set; the remaining checks cannot run.
        checks.push_back({"reward_evaluation", false, 0.0, 0.0});
    } else {
        const Field f = equilibrium ? evaluate_reward(problem.reward, m)
                                    : evaluate_reward(problem.reward, MeasureFamily::zero(grid));
        const ValueFunction fresh = solve_vi(f, problem.transition, dt);
        double diff = 0.0;
        for (std::size_t i = 0; i < fresh.values.size(); ++i) {
            diff = std::max(diff, std::abs(fresh.values.values()[i] - v.values.values()[i]));
        }
        add("value_function", diff, 1e-9 * (1.0 + fresh.values.max_abs()));

        const double value = value_at_initial(v, problem.initial);
        const double scale = 1.0 + std::abs(value);
        const double eps = pair(f, stopped_forward_measure(fresh, problem.initial, problem.transition).measure, dt) -
                           pair(f, m, dt);
        const double eps_allowed = equilibrium ? cfg.algorithm.eps_tol : 1e-10 * scale;
        add("exploitability", eps, eps_allowed);
        const double eps_pos = std::max(eps, 0.0);
        add("duality_gap", std::abs(value - pair(f, m, dt)), eps_allowed + 1e-10 * scale);

        const double mass = m.slice_total(0);
        const auto comp = complementarity_report(v, f, m, problem.transition, dt);
        add("stop_region_integral", comp.stop_region_integral,
            1e-8 * (1.0 + mass) + eps_pos + stop_region_carry(v, m, problem.transition));
        const double v_floor = min_positive_value(v, nullptr);
        add("continuation_residual", comp.continuation_residual,
            1e-8 * (1.0 + mass) + (std::isfinite(v_floor) ? eps_pos / v_floor : 0.0));

        std::mt19937_64 rng(seed);
        double worst_ratio = 0.0;
        for (std::size_t i = 0; i < kFokkerPlanckFunctions; ++i) {
            const Field phi = random_continuation_test_function(grid, v, rng);
            const double norm = phi.max_abs();
            if (norm == 0.0) continue;
            const double floor = min_positive_value(v, &phi);
            const double allowed = norm * (1e-9 + eps_pos / floor);
            const double r = fokker_planck_residual(m, problem.initial, v, problem.transition, phi);
            worst_ratio = std::max(worst_ratio, r / allowed);
        }
        add("fokker_planck_residual", worst_ratio, 1.0);
    }

    bool all_pass = true;
    ordered_json report = ordered_json::array();
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.measured)
            << " <= " << format_double(c.tolerance) << '\n';
        report.push_back({{"check", c.name}, {"pass", c.pass}, {"measured", c.measured},
                          {"tolerance", c.tolerance}});
    }
    write_json(out / "verify.json", report);
    if (!all_pass) {
        err << "error: verification failed\n";
        return ExitCode::verification;
    }
    return ExitCode::ok;
}

ExitCode mc_check(const RunConfig& cfg, const fs::path& out, std::uint64_t seed, std::ostream& log,
                  std::ostream& err) {
    const MfgProblem problem = problem_from(cfg);
    const SpaceTimeGrid& grid = problem.grid;
    const ValueFunction v = classify_stopping(read_grid_csv(out / "value.csv", grid));
    const auto reference = stopped_forward_measure(v, problem.initial, problem.transition).measure;
    SimulationOptions opts = cfg.mc;
    opts.seed = seed;
    const auto sim = simulate_paths(problem.model, grid, v, problem.initial, opts);
    const auto cmp = compare_slice_totals(sim, reference, grid.dt(), opts.n_paths);

    {
        std::ostringstream csv;
        csv << "t,empirical,reference,standard_error,z\n";
        for (std::size_t k = 0; k < grid.time_nodes(); ++k) {
            csv << format_double(grid.time(k)) << ',' << format_double(sim.slice_totals[k]) << ','
                << format_double(reference.slice_total(k)) << ','
                << format_double(sim.slice_standard_errors[k]) << ',' << format_double(cmp.z_scores[k])
                << '\n';
        }
        std::ofstream file(out / "mc.csv", std::ios::binary);
        if (!file) throw ArtifactError("cannot write mc.csv");
        file << csv.str();
    }
    write_json(out / "mc.json", ordered_json{{"n_paths", opts.n_paths},
                                             {"seed", opts.seed},
                                             {"fraction_within_3se", cmp.fraction_within_3se},
                                             {"max_abs_difference", cmp.max_abs_difference},
                                             {"l1_difference", cmp.l1_difference},
                                             {"survived", sim.counts.survived},
                                             {"stopped", sim.counts.stopped},
                                             {"absorbed", sim.counts.absorbed}});
    log << "slices within 3 SE: " << format_double(cmp.fraction_within_3se)
        << ", max |difference| " << format_double(cmp.max_abs_difference) << '\n';
    if (cmp.fraction_within_3se < 0.95) {
        err << "error: fewer than 95% of slices within 3 standard errors\n";
        return ExitCode::verification;
    }
    return ExitCode::ok;
}

}  // namespace

ExitCode run_command(const CommandOptions& options, std::ostream& log, std::ostream& err) {
    std::ostringstream sink;
    std::ostream& progress = options.quiet ? static_cast<std::ostream&>(sink) : log;

    RunConfig cfg;
    try {
        cfg = load_config(options.config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ExitCode::config_parse;
    } catch (const ArtifactError& e) {
        err << "config error: " << e.what() << '\n';
        return ExitCode::config_parse;
    } catch (const Error& e) {
        err << "validation error: " << e.what() << '\n';
        return ExitCode::validation;
    }
    const std::uint64_t seed = options.seed.value_or(cfg.mc.seed);

    try {
        fs::create_directories(options.out);
        if (options.command == "solve-stop") return solve_stop(cfg, options.out, progress);
        if (options.command == "solve-mfg") return solve_mfg(cfg, options.out, progress, err);
        if (options.command == "verify") return verify(cfg, options.out, seed, progress, err);
        if (options.command == "mc-check") return mc_check(cfg, options.out, seed, progress, err);
        err << "unknown command '" << options.command << "'\n";
        return ExitCode::config_parse;
    } catch (const ArtifactError& e) {
        err << "artifact error: " << e.what() << '\n';
        return ExitCode::verification;
    } catch (const Error& e) {
        const ExitCode code = classify(e.code());
        err << (code == ExitCode::solver ? "solver error: " : "validation error: ") << e.what() << '\n';
        return code;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::config_parse;
    }
}

}  // namespace mfgstop::cli
