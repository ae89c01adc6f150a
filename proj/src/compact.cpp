#include "rmrcpsp/compact.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace rmrcpsp {

namespace {

std::string idx2(const char* stem, int a, int b) {
    return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b);
}
std::string idx3(const char* stem, int a, int b, int c) {
    return idx2(stem, a, b) + "_" + std::to_string(c);
}
std::string idx4(const char* stem, int a, int b, int c, int d) {
    return idx3(stem, a, b, c) + "_" + std::to_string(d);
}

// Flow profile: real activities offer/need at most their largest per-mode
// request, while the dummies hand out and collect the full resource pool.
int flow_profile(const Instance& inst, int i, int k) {
    if (inst.is_dummy(i)) return inst.renewable_caps[static_cast<size_t>(k)];
    int best = 0;
    for (const Mode& m : inst.activities[static_cast<size_t>(i)].modes)
        best = std::max(best, m.renewable_req[static_cast<size_t>(k)]);
    return best;
}

int flow_cap(const Instance& inst, int i, int j, int k) {
    return std::min(flow_profile(inst, i, k), flow_profile(inst, j, k));
}

} // namespace

FirstStageVars add_first_stage_block(mip::MipModel& model, const Instance& inst,
                                     const BuildOptions& options) {
    const int v = inst.num_activities();
    const int sink = inst.sink();
    const int nr = inst.num_renewable();
    ExtendedRelation base = transitive_closure(inst.precedences, v);

    std::vector<char> in_e(static_cast<size_t>(v) * static_cast<size_t>(v), 0);
    for (auto [a, b] : inst.precedences)
        in_e[static_cast<size_t>(a) * static_cast<size_t>(v) + static_cast<size_t>(b)] = 1;
    auto is_edge = [&](int i, int j) {
        return in_e[static_cast<size_t>(i) * static_cast<size_t>(v) + static_cast<size_t>(j)] != 0;
    };

    // y fixings: the diagonal is structurally 0 except the sink pair, which
    // carries the level-linking rows; E is pinned to 1. Under reductions the
    // whole base closure (and its mirror) is pinned as well, which the
    // transitivity rows would force anyway.
    // -1 = free, otherwise the pinned value.
    auto y_fixed = [&](int i, int j) -> int {
        if (i == j) return i == sink ? 1 : 0;
        if (is_edge(i, j)) return 1;
        if (options.reductions) {
            if (base.before(i, j)) return 1;
            if (base.before(j, i)) return 0;
        }
        return -1;
    };

    FirstStageVars vars;
    vars.y.assign(static_cast<size_t>(v), std::vector<int>(static_cast<size_t>(v), -1));
    vars.x.assign(static_cast<size_t>(v), {});
    vars.f.assign(static_cast<size_t>(v),
                  std::vector<std::vector<int>>(static_cast<size_t>(v),
                                                std::vector<int>(static_cast<size_t>(nr), -1)));

    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            int fix = y_fixed(i, j);
            double lo = fix < 0 ? 0.0 : static_cast<double>(fix);
            double hi = fix < 0 ? 1.0 : static_cast<double>(fix);
            vars.y[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                model.add_variable(idx2("y", i, j), lo, hi, true);
        }
    for (int i = 0; i < v; ++i) {
        const auto& modes = inst.activities[static_cast<size_t>(i)].modes;
        for (size_t m = 0; m < modes.size(); ++m)
            vars.x[static_cast<size_t>(i)].push_back(
                model.add_variable(idx2("x", i, static_cast<int>(m)), 0.0, 1.0, true));
    }
    for (int i = 0; i < v; ++i) {
        if (i == sink) continue;
        for (int j = 1; j < v; ++j) {
            if (j == i) continue;
            if (options.reductions && base.before(j, i)) continue; // y_ij pinned 0
            for (int k = 0; k < nr; ++k)
                vars.f[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] =
                    model.add_variable(idx3("f", i, j, k), 0.0, mip::kInfinity, false);
        }
    }

    // Antisymmetry, i < j.
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j) {
            if (options.reductions && (y_fixed(i, j) >= 0 || y_fixed(j, i) >= 0)) continue;
            model.add_constraint(
                idx2("asym", i, j),
                {{vars.y[static_cast<size_t>(i)][static_cast<size_t>(j)], 1.0},
                 {vars.y[static_cast<size_t>(j)][static_cast<size_t>(i)], 1.0}},
                mip::Sense::LessEqual, 1.0);
        }

    // Transitivity y_ij >= y_ip + y_pj - 1 for pairwise distinct (i,p,j). The
    // printed equality would force y_ij = -1 whenever both antecedents are 0,
    // so only the binding direction is generated.
    for (int i = 0; i < v; ++i)
        for (int p = 0; p < v; ++p)
            for (int j = 0; j < v; ++j) {
                if (i == j || i == p || p == j) continue;
                if (options.reductions) {
                    if (y_fixed(i, p) == 0 || y_fixed(p, j) == 0) continue; // rhs <= 0
                    if (y_fixed(i, j) == 1) continue;                        // lhs pinned 1
                }
                model.add_constraint(
                    idx3("trans", i, p, j),
                    {{vars.y[static_cast<size_t>(i)][static_cast<size_t>(j)], 1.0},
                     {vars.y[static_cast<size_t>(i)][static_cast<size_t>(p)], -1.0},
                     {vars.y[static_cast<size_t>(p)][static_cast<size_t>(j)], -1.0}},
                    mip::Sense::GreaterEqual, -1.0);
            }

    // Flow capacity f_ijk <= P_ijk y_ij.
    for (int i = 0; i < v; ++i) {
        if (i == sink) continue;
        for (int j = 1; j < v; ++j) {
            if (j == i) continue;
            for (int k = 0; k < nr; ++k) {
                int fv = vars.f[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
                if (fv < 0) continue;
                model.add_constraint(
                    idx3("fcap", i, j, k),
                    {{fv, 1.0},
                     {vars.y[static_cast<size_t>(i)][static_cast<size_t>(j)],
                      -static_cast<double>(flow_cap(inst, i, j, k))}},
                    mip::Sense::LessEqual, 0.0);
            }
        }
    }

    // Conservation: inflow of j equals the chosen-mode requirement, and
    // likewise for outflow of i; dummies move the whole pool.
    auto requirement_terms = [&](int i, int k, double scale,
                                 std::vector<std::pair<int, double>>& terms, double& rhs) {
        if (inst.is_dummy(i)) {
            rhs += scale * inst.renewable_caps[static_cast<size_t>(k)];
            return;
        }
        const auto& modes = inst.activities[static_cast<size_t>(i)].modes;
        for (size_t m = 0; m < modes.size(); ++m) {
            int req = modes[m].renewable_req[static_cast<size_t>(k)];
            if (req != 0)
                terms.emplace_back(vars.x[static_cast<size_t>(i)][m],
                                   -scale * static_cast<double>(req));
        }
    };
    for (int j = 1; j < v; ++j)
        for (int k = 0; k < nr; ++k) {
            std::vector<std::pair<int, double>> terms;
            double rhs = 0.0;
            for (int i = 0; i < v; ++i) {
                if (i == sink || i == j) continue;
                int fv = vars.f[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
                if (fv >= 0) terms.emplace_back(fv, 1.0);
            }
            requirement_terms(j, k, 1.0, terms, rhs);
            model.add_constraint(idx2("fin", j, k), std::move(terms), mip::Sense::Equal, rhs);
        }
    for (int i = 0; i < v; ++i) {
        if (i == sink) continue;
        for (int k = 0; k < nr; ++k) {
            std::vector<std::pair<int, double>> terms;
            double rhs = 0.0;
            for (int j = 1; j < v; ++j) {
                if (j == i) continue;
                int fv = vars.f[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
                if (fv >= 0) terms.emplace_back(fv, 1.0);
            }
            requirement_terms(i, k, 1.0, terms, rhs);
            model.add_constraint(idx2("fout", i, k), std::move(terms), mip::Sense::Equal, rhs);
        }
    }

    // One mode per activity; project-wide non-renewable budgets.
    for (int i = 0; i < v; ++i) {
        std::vector<std::pair<int, double>> terms;
        for (int xv : vars.x[static_cast<size_t>(i)]) terms.emplace_back(xv, 1.0);
        model.add_constraint(idx2("mode", i, 0), std::move(terms), mip::Sense::Equal, 1.0);
    }
    for (int k = 0; k < inst.num_nonrenewable(); ++k) {
        std::vector<std::pair<int, double>> terms;
        for (int i = 0; i < v; ++i) {
            const auto& modes = inst.activities[static_cast<size_t>(i)].modes;
            for (size_t m = 0; m < modes.size(); ++m) {
                int req = modes[m].nonrenewable_req[static_cast<size_t>(k)];
                if (req != 0)
                    terms.emplace_back(vars.x[static_cast<size_t>(i)][m],
                                       static_cast<double>(req));
            }
        }
        model.add_constraint(idx2("nonren", k, 0), std::move(terms), mip::Sense::LessEqual,
                             static_cast<double>(inst.nonrenewable_caps[static_cast<size_t>(k)]));
    }

    return vars;
}

namespace {

// Large-duration rows shared by the compact model (per level) and the
// Benders master (single level): S_to - S_from >= d x - N (1 - y_ij).
void add_bigm_rows(mip::MipModel& model, const Instance& inst, const FirstStageVars& vars,
                   const BuildOptions& options, const char* stem, int i, int j, int s_from,
                   int s_to, int level, bool deviated, double big_n) {
    const auto& modes = inst.activities[static_cast<size_t>(i)].modes;
    int yv = vars.y[static_cast<size_t>(i)][static_cast<size_t>(j)];

    auto emit = [&](const std::string& name, const std::vector<std::pair<int, double>>& dur_terms,
                    double dur_const) {
        std::vector<std::pair<int, double>> terms;
        if (s_to != s_from) {
            terms.emplace_back(s_to, 1.0);
            terms.emplace_back(s_from, -1.0);
        }
        for (auto t : dur_terms) terms.emplace_back(t.first, -t.second);
        terms.emplace_back(yv, -big_n);
        if (terms.empty()) return;
        model.add_constraint(name, std::move(terms), mip::Sense::GreaterEqual,
                             dur_const - big_n);
    };

    if (options.aggregate_bigm) {
        std::vector<std::pair<int, double>> dur;
        for (size_t m = 0; m < modes.size(); ++m) {
            double d = static_cast<double>(deviated ? modes[m].worst_case_duration()
                                                    : modes[m].nominal_duration);
            if (d != 0.0) dur.emplace_back(vars.x[static_cast<size_t>(i)][m], d);
        }
        emit(idx4(stem, i, j, 0, level), dur, 0.0);
        return;
    }
    for (size_t m = 0; m < modes.size(); ++m) {
        double d = static_cast<double>(deviated ? modes[m].worst_case_duration()
                                                : modes[m].nominal_duration);
        std::vector<std::pair<int, double>> dur;
        if (d != 0.0) dur.emplace_back(vars.x[static_cast<size_t>(i)][m], d);
        emit(idx4(stem, i, j, static_cast<int>(m), level), dur, 0.0);
    }
}

} // namespace

CompactBuild build_compact(const Instance& inst, BudgetGamma gamma, const BuildOptions& options) {
    CompactBuild build;
    mip::MipModel& model = build.model;
    const int v = inst.num_activities();
    const int sink = inst.sink();
    const int levels = gamma.value + 1;
    const double big_n = static_cast<double>(upper_bound_N(inst));
    ExtendedRelation base = transitive_closure(inst.precedences, v);

    build.s.assign(static_cast<size_t>(v), std::vector<int>(static_cast<size_t>(levels), -1));
    for (int i = 0; i < v; ++i)
        for (int g = 0; g < levels; ++g)
            build.s[static_cast<size_t>(i)][static_cast<size_t>(g)] =
                model.add_variable(idx2("S", i, g), 0.0, mip::kInfinity, false);
    build.first_stage = add_first_stage_block(model, inst, options);
    const FirstStageVars& vars = build.first_stage;

    model.set_objective(mip::ObjectiveSense::Minimize,
                        {{build.s[static_cast<size_t>(sink)][static_cast<size_t>(gamma.value)],
                          1.0}});
    model.objective_integral = true;

    model.add_constraint("start0", {{build.s[0][0], 1.0}}, mip::Sense::Equal, 0.0);

    auto skip_pair = [&](int i, int j) {
        if (i == j) return i != sink;
        return options.reductions && base.before(j, i);
    };

    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            if (skip_pair(i, j)) continue;
            for (int g = 0; g < levels; ++g)
                add_bigm_rows(model, inst, vars, options, "prec", i, j,
                              build.s[static_cast<size_t>(i)][static_cast<size_t>(g)],
                              build.s[static_cast<size_t>(j)][static_cast<size_t>(g)], g, false,
                              big_n);
            for (int g = 0; g + 1 < levels; ++g)
                add_bigm_rows(model, inst, vars, options, "dev", i, j,
                              build.s[static_cast<size_t>(i)][static_cast<size_t>(g)],
                              build.s[static_cast<size_t>(j)][static_cast<size_t>(g + 1)], g, true,
                              big_n);
        }

    return build;
}

FirstStageSolution extract_first_stage(const Instance& inst, const FirstStageVars& vars,
                                       const std::vector<double>& values) {
    const int v = inst.num_activities();
    const int sink = inst.sink();
    FirstStageSolution out;

    out.modes.mode.assign(static_cast<size_t>(v), 0);
    for (int i = 0; i < v; ++i) {
        int chosen = -1;
        double best = 0.5;
        for (size_t m = 0; m < vars.x[static_cast<size_t>(i)].size(); ++m) {
            double val = values[static_cast<size_t>(vars.x[static_cast<size_t>(i)][m])];
            if (val > best) {
                best = val;
                chosen = static_cast<int>(m);
            }
        }
        if (chosen < 0)
            throw ExtractionError("no mode selected for activity " + std::to_string(i));
        out.modes[i] = chosen;
    }

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            if (i == j) continue;
            int yv = vars.y[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (yv >= 0 && values[static_cast<size_t>(yv)] > 0.5) edges.emplace_back(i, j);
        }
    ExtendedRelation rounded(v);
    for (auto [i, j] : edges) rounded.set(i, j);
    ExtendedRelation closed;
    try {
        closed = transitive_closure(edges, v);
    } catch (const CycleError& err) {
        throw ExtractionError(std::string("rounded selection is cyclic: ") + err.what());
    }
    if (!(closed == rounded))
        throw ExtractionError("rounded selection is not transitively closed");
    for (auto [a, b] : inst.precedences)
        if (!rounded.before(a, b)) throw ExtractionError("rounded selection lost a base edge");
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j)
            if (rounded.before(i, j) && rounded.before(j, i))
                throw ExtractionError("rounded selection is not antisymmetric");
    out.relation = rounded;

    const int nr = inst.num_renewable();
    out.flows.assign(static_cast<size_t>(v),
                     std::vector<std::vector<double>>(
                         static_cast<size_t>(v), std::vector<double>(static_cast<size_t>(nr), 0.0)));
    for (int i = 0; i < v; ++i) {
        if (i == sink) continue;
        for (int j = 1; j < v; ++j) {
            if (i == j) continue;
            for (int k = 0; k < nr; ++k) {
                int fv = vars.f[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
                if (fv < 0) continue;
                double val = values[static_cast<size_t>(fv)];
                out.flows[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] =
                    std::abs(val) < 1e-9 ? 0.0 : val;
            }
        }
    }
    return out;
}

CompactResult solve_compact(const Instance& inst, BudgetGamma gamma,
                            mip::SolverBackend& backend, double time_limit_s,
                            const BuildOptions& options) {
    CompactBuild build = build_compact(inst, gamma, options);
    CompactResult result;
    result.outcome = mip::solve(build.model, backend, time_limit_s);
    if (!result.outcome.has_solution()) {
        if (result.outcome.status == mip::SolveStatus::Infeasible)
            result.outcome.message =
                "compact model infeasible on a valid instance: model bug; " +
                result.outcome.message;
        return result;
    }
    result.solution = extract_first_stage(inst, build.first_stage, result.outcome.values);
    result.worst =
        worst_case_longest_path(inst, result.solution.modes, result.solution.relation, gamma);
    if (result.outcome.status == mip::SolveStatus::Optimal &&
        std::abs(static_cast<double>(result.worst.makespan) - result.outcome.objective) > 1e-6)
        throw ExtractionError("model objective " + std::to_string(result.outcome.objective) +
                              " disagrees with the re-evaluated worst case " +
                              std::to_string(result.worst.makespan));
    return result;
}

std::string solution_to_json(const Instance& inst, const FirstStageSolution& solution,
                             const WorstCaseResult& worst, const mip::SolveOutcome& outcome,
                             const std::string& method, int gamma) {
    nlohmann::ordered_json j;
    j["instance"] = inst.name;
    j["method"] = method;
    j["gamma"] = gamma;
    j["status"] = mip::to_string(outcome.status);
    j["worst_case_makespan"] = worst.makespan;
    j["modes"] = solution.modes.mode;
    ExtendedRelation base = transitive_closure(inst.precedences, inst.num_activities());
    j["selection"] = nlohmann::ordered_json::array();
    for (auto [a, b] : solution.relation.edges())
        if (!base.before(a, b)) j["selection"].push_back({a, b});
    j["flows"] = nlohmann::ordered_json::array();
    for (int i = 0; i < inst.num_activities(); ++i)
        for (int jj = 0; jj < inst.num_activities(); ++jj)
            for (int k = 0; k < inst.num_renewable(); ++k) {
                double val = solution.flows[static_cast<size_t>(i)][static_cast<size_t>(jj)]
                                           [static_cast<size_t>(k)];
                if (val != 0.0) j["flows"].push_back({i, jj, k, val});
            }
    j["delayed"] = nlohmann::ordered_json::array();
    for (int i = 0; i < inst.num_activities(); ++i)
        if (worst.delayed[static_cast<size_t>(i)]) j["delayed"].push_back(i);
    j["critical_path"] = worst.critical_path;
    j["objective"] = outcome.objective;
    j["bound"] = outcome.best_bound;
    j["wall_seconds"] = outcome.wall_seconds;
    return j.dump(2) + "\n";
}

} // namespace rmrcpsp
