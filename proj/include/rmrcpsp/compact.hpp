#pragma once

#include <string>
#include <vector>

#include "rmrcpsp/instance.hpp"
#include "rmrcpsp/mip/solve.hpp"
#include "rmrcpsp/network.hpp"

namespace rmrcpsp {

struct BuildOptions {
    /// Skip constraint rows and flow arcs that the base precedence closure
    /// already fixes inactive. Off = every printed family is generated.
    bool reductions = true;
    /// Aggregate the per-mode big-M rows into one row per pair using
    /// sum_m d_im x_im; default keeps one row per mode.
    bool aggregate_bigm = false;
};

/// Model indices of the first-stage variables; -1 where a variable is not
/// declared (reduced away).
struct FirstStageVars {
    std::vector<std::vector<int>> y;              // V x V
    std::vector<std::vector<int>> x;              // activity -> mode
    std::vector<std::vector<std::vector<int>>> f; // i x j x k
};

struct FirstStageSolution {
    ModeVector modes;
    ExtendedRelation relation;                        // transitive, contains E
    std::vector<std::vector<std::vector<double>>> flows; // f[i][j][k]
};

struct ExtractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shared sequencing/mode/flow block: precedence fixings, antisymmetry,
/// transitivity, resource flows with conservation, mode assignment and the
/// non-renewable budget, with variable domains.
FirstStageVars add_first_stage_block(mip::MipModel& model, const Instance& inst,
                                     const BuildOptions& options);

struct CompactBuild {
    mip::MipModel model;
    FirstStageVars first_stage;
    std::vector<std::vector<int>> s; // S variable index per (activity, level)
};

/// The compact robust model: min S[n+1][Gamma] over mode choice, transitive
/// selection, resource flows and the layered start-time variables.
CompactBuild build_compact(const Instance& inst, BudgetGamma gamma,
                           const BuildOptions& options = {});

/// Reads (modes, relation, flows) out of a solved model's variable values.
/// Throws ExtractionError when the rounded relation is not a transitive DAG
/// containing E (a backend tolerance problem).
FirstStageSolution extract_first_stage(const Instance& inst, const FirstStageVars& vars,
                                       const std::vector<double>& values);

struct CompactResult {
    FirstStageSolution solution;
    WorstCaseResult worst;
    mip::SolveOutcome outcome;
};

/// Build, solve, extract, then re-evaluate the worst case with the exact
/// dynamic program; the re-evaluated result is authoritative.
CompactResult solve_compact(const Instance& inst, BudgetGamma gamma,
                            mip::SolverBackend& backend, double time_limit_s,
                            const BuildOptions& options = {});

/// JSON solution document: modes, selection edges (relation minus the base
/// closure), nonzero flows, worst-case makespan and delayed set.
std::string solution_to_json(const Instance& inst, const FirstStageSolution& solution,
                             const WorstCaseResult& worst, const mip::SolveOutcome& outcome,
                             const std::string& method, int gamma);

} // namespace rmrcpsp
