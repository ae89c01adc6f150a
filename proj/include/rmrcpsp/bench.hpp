#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmrcpsp/instance.hpp"

namespace rmrcpsp {

struct ExperimentConfig {
    std::string instances_dir;
    std::vector<std::string> methods; // compact, benders
    std::vector<int> gammas;
    double time_limit_s = 7200.0;
    std::string backend = "bnb";
    int workers = 1;
    std::string deviation_factor = "0.7"; // exact decimal, applied before solving
    unsigned long seed = 0;               // recorded in the CSV metadata
};

/// Key-value config file ("key = value", '#' comments). Unknown keys and
/// malformed values are errors.
ExperimentConfig load_config(const std::string& path);

struct RunRecord {
    std::string instance;
    std::string method;
    int gamma = 0;
    std::string status; // optimal|feasible|infeasible|unbounded|error
    std::optional<double> objective;
    std::optional<double> bound;
    std::optional<double> gap_percent; // 0 when optimal
    double wall_seconds = 0.0;         // pinned to the time limit when unsolved
    int iterations = 0;                // benders only
    double per_iteration_seconds = 0.0;

    bool feasible() const { return status == "optimal" || status == "feasible"; }
};

struct ExperimentOutcome {
    std::vector<RunRecord> records; // everything in the CSV, resumed rows included
    int new_records = 0;
    int skipped_existing = 0;
    int failures = 0; // parse or solve errors
};

/// One record per (instance, method, gamma), appended to the CSV as each
/// solve finishes; reruns skip keys already present, so an interrupted sweep
/// resumes where it stopped.
ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::string& results_csv);

std::vector<RunRecord> read_records_csv(const std::string& path);

struct SummaryRow {
    std::string method;
    int gamma = 0;         // -1 on the per-method averages row
    bool average_row = false;
    int count = 0;
    double pct_solved = 0.0;
    double mean_gap = 0.0;  // over records with a feasible solution
    double mean_time = 0.0; // unsolved records counted at the time limit
    double mean_iterations = 0.0;
    double mean_iteration_seconds = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

/// Mean optimal objective per (method, gamma), computed only over instances
/// solved to optimality at every swept gamma for that method.
struct ObjectiveMeanRow {
    std::string method;
    int gamma = 0;
    int instance_count = 0;
    double mean_objective = 0.0;
};

std::vector<ObjectiveMeanRow> objective_means(const std::vector<RunRecord>& records);

struct PerformanceProfile {
    std::vector<std::string> methods;
    double cap_ratio = 0.0;                      // unsolved runs sit at this ratio
    std::vector<double> taus;                    // sampled at every distinct ratio
    std::vector<std::vector<double>> percentages; // [tau index][method index]
};

PerformanceProfile performance_profile(const std::vector<RunRecord>& records, double cap_ratio);

struct GapCurve {
    std::vector<std::string> methods;
    std::vector<double> thresholds;
    std::vector<std::vector<double>> percentages; // [threshold index][method index]
};

GapCurve gap_curve(const std::vector<RunRecord>& records);

std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::string objective_means_to_csv(const std::vector<ObjectiveMeanRow>& rows);
std::string profile_to_csv(const PerformanceProfile& profile);
std::string gap_curve_to_csv(const GapCurve& curve);

} // namespace rmrcpsp
