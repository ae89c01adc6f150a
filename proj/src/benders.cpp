#include "rmrcpsp/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace rmrcpsp {

namespace {

std::string num2(const char* stem, int a, int b) {
    return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

} // namespace

MasterBuild build_master(const Instance& inst, const std::vector<CutRecord>& cuts,
                         const BuildOptions& options) {
    MasterBuild build;
    mip::MipModel& model = build.model;
    const int v = inst.num_activities();
    const int sink = inst.sink();
    const double big_n = static_cast<double>(upper_bound_N(inst));
    ExtendedRelation base = transitive_closure(inst.precedences, v);

    build.eta = model.add_variable("eta", 0.0, mip::kInfinity, false);
    build.s.resize(static_cast<size_t>(v));
    for (int i = 0; i < v; ++i)
        build.s[static_cast<size_t>(i)] =
            model.add_variable("S_" + std::to_string(i), 0.0, mip::kInfinity, false);
    build.first_stage = add_first_stage_block(model, inst, options);

    model.set_objective(mip::ObjectiveSense::Minimize, {{build.eta, 1.0}});
    model.objective_integral = true;

    model.add_constraint("eta_bound",
                         {{build.eta, 1.0}, {build.s[static_cast<size_t>(sink)], -1.0}},
                         mip::Sense::GreaterEqual, 0.0);
    model.add_constraint("start0", {{build.s[0], 1.0}}, mip::Sense::Equal, 0.0);

    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            if (i == j) continue;
            if (options.reductions && base.before(j, i)) continue;
            const auto& modes = inst.activities[static_cast<size_t>(i)].modes;
            int yv = build.first_stage.y[static_cast<size_t>(i)][static_cast<size_t>(j)];
            auto emit = [&](const std::string& name,
                            std::vector<std::pair<int, double>> dur_terms) {
                std::vector<std::pair<int, double>> terms;
                terms.emplace_back(build.s[static_cast<size_t>(j)], 1.0);
                terms.emplace_back(build.s[static_cast<size_t>(i)], -1.0);
                for (auto t : dur_terms) terms.emplace_back(t.first, -t.second);
                terms.emplace_back(yv, -big_n);
                model.add_constraint(name, std::move(terms), mip::Sense::GreaterEqual, -big_n);
            };
            if (options.aggregate_bigm) {
                std::vector<std::pair<int, double>> dur;
                for (size_t m = 0; m < modes.size(); ++m) {
                    double d = static_cast<double>(modes[m].nominal_duration);
                    if (d != 0.0)
                        dur.emplace_back(build.first_stage.x[static_cast<size_t>(i)][m], d);
                }
                emit(num2("prec", i, j) + "_0", std::move(dur));
            } else {
                for (size_t m = 0; m < modes.size(); ++m) {
                    std::vector<std::pair<int, double>> dur;
                    double d = static_cast<double>(modes[m].nominal_duration);
                    if (d != 0.0)
                        dur.emplace_back(build.first_stage.x[static_cast<size_t>(i)][m], d);
                    emit(num2("prec", i, j) + "_" + std::to_string(m), std::move(dur));
                }
            }
        }

    for (size_t t = 0; t < cuts.size(); ++t) {
        CutConstraint cut = build_cut(cuts[t], build.first_stage, build.eta);
        model.add_constraint("cut_" + std::to_string(t + 1), std::move(cut.terms),
                             mip::Sense::GreaterEqual, cut.rhs);
    }
    return build;
}

CutConstraint build_cut(const CutRecord& record, const FirstStageVars& vars, int eta_var) {
    CutConstraint cut;
    const double slope = static_cast<double>(record.subproblem_value - record.lb_at_generation);
    const double path_len = static_cast<double>(record.path.size());

    std::vector<std::pair<int, double>> terms;
    terms.emplace_back(eta_var, 3.0);
    auto accumulate = [&](int var, double coef) {
        for (auto& t : terms)
            if (t.first == var) {
                t.second += coef;
                return;
            }
        terms.emplace_back(var, coef);
    };
    for (auto [i, j] : record.path) {
        accumulate(vars.y[static_cast<size_t>(i)][static_cast<size_t>(j)], -4.0 * slope);
        accumulate(vars.x[static_cast<size_t>(i)][static_cast<size_t>(record.modes[i])],
                   -4.0 * slope);
        accumulate(vars.x[static_cast<size_t>(j)][static_cast<size_t>(record.modes[j])],
                   -4.0 * slope);
    }
    cut.terms = std::move(terms);
    cut.rhs = 3.0 * static_cast<double>(record.lb_at_generation) - 3.0 * slope * (path_len - 1.0) -
              9.0 * slope * path_len;
    return cut;
}

mip::MipModel build_subproblem_milp(const Instance& inst, const FirstStageSolution& solution,
                                    BudgetGamma gamma) {
    mip::MipModel model;
    const int v = inst.num_activities();
    const int sink = inst.sink();
    const ExtendedRelation& rel = solution.relation;

    std::vector<std::vector<int>> alpha(static_cast<size_t>(v),
                                        std::vector<int>(static_cast<size_t>(v), -1));
    std::vector<std::vector<int>> w(static_cast<size_t>(v),
                                    std::vector<int>(static_cast<size_t>(v), -1));
    std::vector<int> xi(static_cast<size_t>(v), -1);
    std::vector<std::pair<int, double>> objective;

    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            if (!rel.before(i, j)) continue;
            alpha[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                model.add_variable(num2("alpha", i, j), 0.0, 1.0, true);
            w[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                model.add_variable(num2("w", i, j), 0.0, mip::kInfinity, false);
            const Mode& mode = chosen_mode(inst, solution.modes, i);
            if (mode.nominal_duration != 0)
                objective.emplace_back(alpha[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                       static_cast<double>(mode.nominal_duration));
            if (mode.max_deviation != 0)
                objective.emplace_back(w[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                       static_cast<double>(mode.max_deviation));
        }
    for (int i = 0; i < v; ++i)
        xi[static_cast<size_t>(i)] = model.add_variable("xi_" + std::to_string(i), 0.0, 1.0, false);

    model.set_objective(mip::ObjectiveSense::Maximize, std::move(objective));
    model.objective_integral = true;

    std::vector<std::pair<int, double>> into_sink;
    for (int i = 0; i < v; ++i)
        if (alpha[static_cast<size_t>(i)][static_cast<size_t>(sink)] >= 0)
            into_sink.emplace_back(alpha[static_cast<size_t>(i)][static_cast<size_t>(sink)], 1.0);
    model.add_constraint("sink_inflow", std::move(into_sink), mip::Sense::Equal, 1.0);
    std::vector<std::pair<int, double>> out_of_source;
    for (int j = 0; j < v; ++j)
        if (alpha[0][static_cast<size_t>(j)] >= 0)
            out_of_source.emplace_back(alpha[0][static_cast<size_t>(j)], 1.0);
    model.add_constraint("source_outflow", std::move(out_of_source), mip::Sense::Equal, 1.0);

    for (int i = 1; i < v; ++i) {
        if (i == sink) continue;
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < v; ++j) {
            if (alpha[static_cast<size_t>(i)][static_cast<size_t>(j)] >= 0)
                terms.emplace_back(alpha[static_cast<size_t>(i)][static_cast<size_t>(j)], 1.0);
            if (alpha[static_cast<size_t>(j)][static_cast<size_t>(i)] >= 0)
                terms.emplace_back(alpha[static_cast<size_t>(j)][static_cast<size_t>(i)], -1.0);
        }
        model.add_constraint("balance_" + std::to_string(i), std::move(terms), mip::Sense::Equal,
                             0.0);
    }

    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            if (w[static_cast<size_t>(i)][static_cast<size_t>(j)] < 0) continue;
            model.add_constraint(
                num2("w_xi", i, j),
                {{w[static_cast<size_t>(i)][static_cast<size_t>(j)], 1.0},
                 {xi[static_cast<size_t>(i)], -1.0}},
                mip::Sense::LessEqual, 0.0);
            model.add_constraint(
                num2("w_alpha", i, j),
                {{w[static_cast<size_t>(i)][static_cast<size_t>(j)], 1.0},
                 {alpha[static_cast<size_t>(i)][static_cast<size_t>(j)], -1.0}},
                mip::Sense::LessEqual, 0.0);
        }

    std::vector<std::pair<int, double>> budget;
    for (int i = 0; i < v; ++i) budget.emplace_back(xi[static_cast<size_t>(i)], 1.0);
    model.add_constraint("budget", std::move(budget), mip::Sense::LessEqual,
                         static_cast<double>(gamma.value));
    return model;
}

WorstCaseResult solve_subproblem(const Instance& inst, const FirstStageSolution& solution,
                                 BudgetGamma gamma, SubproblemEngine engine,
                                 mip::SolverBackend* backend) {
    WorstCaseResult dp = worst_case_longest_path(inst, solution.modes, solution.relation, gamma);
    if (engine == SubproblemEngine::Dp) return dp;
    if (backend == nullptr) throw std::invalid_argument("milp subproblem engine needs a backend");
    mip::MipModel model = build_subproblem_milp(inst, solution, gamma);
    mip::SolveOutcome outcome = mip::solve(model, *backend, 7200.0);
    if (outcome.status != mip::SolveStatus::Optimal)
        throw std::runtime_error("subproblem MILP did not solve to optimality: " +
                                 outcome.message);
    if (std::llround(outcome.objective) != dp.makespan)
        throw std::runtime_error("subproblem engines disagree: dp=" +
                                 std::to_string(dp.makespan) +
                                 " milp=" + std::to_string(outcome.objective));
    return dp;
}

namespace {

std::vector<std::pair<int, int>> path_edges(const std::vector<int>& path) {
    std::vector<std::pair<int, int>> edges;
    for (size_t p = 0; p + 1 < path.size(); ++p) edges.emplace_back(path[p], path[p + 1]);
    return edges;
}

} // namespace

BendersResult run_benders(const Instance& inst, BudgetGamma gamma, mip::SolverBackend& backend,
                          const BendersOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    BendersResult result;
    BendersState& state = result.state;
    state.lower_bound = -std::numeric_limits<double>::infinity();
    state.upper_bound = std::numeric_limits<double>::infinity();

    bool have_incumbent = false;
    bool failed = false;
    std::optional<std::vector<double>> warm;

    for (int t = 1; t <= options.max_iterations; ++t) {
        if (state.upper_bound <= state.lower_bound) break;

        double remaining = options.time_limit_s - elapsed();
        if (remaining <= 0) break;
        MasterBuild master = build_master(inst, state.cuts, options.build);
        auto master_started = std::chrono::steady_clock::now();
        mip::SolveOutcome master_outcome =
            mip::solve(master.model, backend, remaining, options.warm_start ? warm : std::nullopt);
        double master_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - master_started)
                .count();

        if (master_outcome.status == mip::SolveStatus::Infeasible) {
            failed = true;
            result.outcome.message = "master infeasible on a valid instance: model bug";
            break;
        }
        if (!master_outcome.has_solution()) {
            failed = true;
            result.outcome.message = "master solve failed: " + master_outcome.message;
            break;
        }

        // A time-limited master yields only its dual bound as a valid LB.
        Time eta = static_cast<Time>(std::llround(master_outcome.objective));
        Time master_lb = master_outcome.status == mip::SolveStatus::Optimal
                             ? eta
                             : static_cast<Time>(std::ceil(master_outcome.best_bound - 1e-6));
        state.lower_bound = std::max(state.lower_bound, static_cast<double>(master_lb));

        FirstStageSolution proposal =
            extract_first_stage(inst, master.first_stage, master_outcome.values);

        IterationRecord rec;
        rec.t = t;
        rec.eta = eta;
        rec.modes = proposal.modes;
        rec.master_seconds = master_seconds;

        if (have_incumbent && state.lower_bound >= state.upper_bound) {
            // Final-iteration skip: the master already matches the incumbent.
            rec.lb = static_cast<Time>(state.lower_bound);
            rec.ub = static_cast<Time>(state.upper_bound);
            rec.ub_finite = true;
            state.trace.push_back(std::move(rec));
            break;
        }

        auto sub_started = std::chrono::steady_clock::now();
        WorstCaseResult worst =
            solve_subproblem(inst, proposal, gamma, options.engine, &backend);
        rec.subproblem_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - sub_started).count();

        if (static_cast<double>(worst.makespan) < state.upper_bound) {
            state.upper_bound = static_cast<double>(worst.makespan);
            result.incumbent = proposal;
            result.worst = worst;
            have_incumbent = true;
            if (options.warm_start) {
                // The incumbent with eta lifted to its true worst case stays
                // feasible for every later cut; the raw master optimum does not.
                warm = master_outcome.values;
                (*warm)[static_cast<size_t>(master.eta)] = static_cast<double>(worst.makespan);
            }
        }

        CutRecord cut;
        cut.path = path_edges(worst.critical_path);
        cut.modes = proposal.modes;
        cut.subproblem_value = worst.makespan;
        cut.lb_at_generation = static_cast<Time>(state.lower_bound);
        state.cuts.push_back(cut);
        state.iterations = t;

        rec.lb = static_cast<Time>(state.lower_bound);
        rec.ub = static_cast<Time>(state.upper_bound);
        rec.ub_finite = true;
        rec.subproblem_value = worst.makespan;
        rec.path = worst.critical_path;
        state.trace.push_back(std::move(rec));
    }

    result.outcome.wall_seconds = elapsed();
    if (failed) {
        result.outcome.status = mip::SolveStatus::Error;
    } else if (have_incumbent && state.upper_bound <= state.lower_bound) {
        result.outcome.status = mip::SolveStatus::Optimal;
    } else if (have_incumbent) {
        result.outcome.status = mip::SolveStatus::Feasible;
        result.outcome.message = "time limit reached";
    } else {
        result.outcome.status = mip::SolveStatus::Error;
        if (result.outcome.message.empty())
            result.outcome.message = "no incumbent before the time limit";
    }
    if (have_incumbent) {
        result.outcome.objective = state.upper_bound;
        result.outcome.best_bound = std::isfinite(state.lower_bound)
                                        ? state.lower_bound
                                        : result.outcome.objective;
    }
    return result;
}

std::string trace_to_csv(const Instance& inst, const BendersState& state) {
    std::ostringstream out;
    out << "t,LB,UB,eta,V,modes,path,master_seconds,subproblem_seconds\n";
    for (const IterationRecord& rec : state.trace) {
        out << rec.t << ',' << rec.lb << ',';
        if (rec.ub_finite)
            out << rec.ub;
        else
            out << "inf";
        out << ',' << rec.eta << ',';
        if (rec.subproblem_value) out << *rec.subproblem_value;
        out << ',' << '"';
        for (int i = 1; i <= inst.n; ++i) {
            if (i > 1) out << ',';
            out << rec.modes[i] + 1;
        }
        out << '"' << ',';
        for (size_t p = 0; p < rec.path.size(); ++p) {
            if (p > 0) out << "->";
            out << rec.path[p];
        }
        out << ',' << rec.master_seconds << ',' << rec.subproblem_seconds << '\n';
    }
    return out.str();
}

} // namespace rmrcpsp
