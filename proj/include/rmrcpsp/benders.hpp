#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmrcpsp/compact.hpp"
#include "rmrcpsp/instance.hpp"
#include "rmrcpsp/mip/solve.hpp"
#include "rmrcpsp/network.hpp"

namespace rmrcpsp {

struct CutRecord {
    std::vector<std::pair<int, int>> path; // edge list of pi*, source to sink
    ModeVector modes;                      // mode snapshot m*
    Time subproblem_value = 0;             // V*
    Time lb_at_generation = 0;             // LB when the cut was produced
};

struct IterationRecord {
    int t = 0;
    Time lb = 0;
    Time ub = 0;
    bool ub_finite = false;
    Time eta = 0;
    std::optional<Time> subproblem_value; // empty on the final skipped iteration
    ModeVector modes;
    std::vector<int> path; // activity sequence; empty when skipped
    double master_seconds = 0.0;
    double subproblem_seconds = 0.0;
};

struct BendersState {
    double lower_bound = 0.0; // -inf before the first master solve
    double upper_bound = 0.0; // +inf before the first subproblem
    int iterations = 0;       // completed iterations (cut added)
    std::vector<CutRecord> cuts;
    std::vector<IterationRecord> trace;
};

enum class SubproblemEngine { Dp, Milp };

struct BendersOptions {
    SubproblemEngine engine = SubproblemEngine::Dp;
    double time_limit_s = 7200.0;
    bool warm_start = true;
    int max_iterations = 100000;
    BuildOptions build;
};

struct MasterBuild {
    mip::MipModel model;
    FirstStageVars first_stage;
    std::vector<int> s; // single-level start times
    int eta = -1;
};

/// Single-level master: min eta subject to eta >= S_{n+1}, the nominal
/// big-M precedence rows, the shared first-stage block and the optimality
/// cuts accumulated so far. With no cuts this is the nominal problem.
MasterBuild build_master(const Instance& inst, const std::vector<CutRecord>& cuts,
                         const BuildOptions& options = {});

struct CutConstraint {
    std::vector<std::pair<int, double>> terms; // includes eta
    double rhs = 0.0;                          // sense: >=
};

/// Optimality cut, scaled by 3 so every coefficient is an exact integer:
/// 3 eta - 4 (V-LB) sum_(i,j) (y_ij + x_i + x_j) >=
///   3 LB - 3 (V-LB)(|pi|-1) - 9 (V-LB)|pi|.
CutConstraint build_cut(const CutRecord& record, const FirstStageVars& vars, int eta_var);

/// Worst-case makespan MILP over the arcs of the extended network: a path
/// flow with budgeted delay variables linearized through w_ij.
mip::MipModel build_subproblem_milp(const Instance& inst, const FirstStageSolution& solution,
                                    BudgetGamma gamma);

/// Evaluates a first-stage solution. The dynamic program is the default
/// engine; the MILP form is kept for audits and must agree exactly.
WorstCaseResult solve_subproblem(const Instance& inst, const FirstStageSolution& solution,
                                 BudgetGamma gamma, SubproblemEngine engine,
                                 mip::SolverBackend* backend = nullptr);

struct BendersResult {
    FirstStageSolution incumbent;
    WorstCaseResult worst;
    BendersState state;
    mip::SolveOutcome outcome; // aggregated status/objective/bound/time
};

BendersResult run_benders(const Instance& inst, BudgetGamma gamma, mip::SolverBackend& backend,
                          const BendersOptions& options = {});

/// Trace CSV mirroring the per-iteration layout: t, LB, UB, eta, V, modes
/// (comma-joined, quoted), path (arrow-joined), stage timings.
std::string trace_to_csv(const Instance& inst, const BendersState& state);

} // namespace rmrcpsp
