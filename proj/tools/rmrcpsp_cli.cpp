#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rmrcpsp/bench.hpp"
#include "rmrcpsp/benders.hpp"
#include "rmrcpsp/compact.hpp"
#include "rmrcpsp/oracle.hpp"
#include "rmrcpsp/psplib.hpp"

namespace {

rmrcpsp::Instance load_and_prepare(const std::string& path, const std::string& deviation_factor) {
    rmrcpsp::Instance inst = rmrcpsp::parse_mm_file(path);
    rmrcpsp::ValidationReport report = rmrcpsp::validate(inst);
    if (!report.ok()) {
        std::string what = "instance failed validation:";
        for (const auto& issue : report.issues) what += "\n  " + issue.message;
        throw std::runtime_error(what);
    }
    if (!deviation_factor.empty())
        inst = rmrcpsp::apply_deviation_rule(
            inst, rmrcpsp::Rational::from_decimal_string(deviation_factor));
    return inst;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver suite for the robust multi-mode RCPSP under budgeted uncertainty"};
    app.require_subcommand(1);

    // solve
    std::string instance_path, method = "compact", backend_spec = "bnb";
    std::string deviation_factor;
    std::string trace_path, lp_out;
    int gamma = 0;
    double time_limit = 7200.0;
    auto* solve = app.add_subcommand("solve", "Solve one instance with one method, print JSON");
    solve->add_option("--instance", instance_path, "PSPLIB .mm file")->required();
    solve->add_option("--method", method, "compact | benders")
        ->check(CLI::IsMember({"compact", "benders"}));
    solve->add_option("--gamma", gamma, "robustness budget (nonnegative integer)")->required();
    solve->add_option("--backend", backend_spec, "bnb | cmd:<command>");
    solve->add_option("--time-limit", time_limit, "seconds");
    solve->add_option("--deviation-factor", deviation_factor,
                      "apply max_deviation = floor(factor * duration), e.g. 0.7");
    solve->add_option("--trace", trace_path, "write the per-iteration trace CSV (benders)");

    // sweep
    std::string config_path, results_csv = "results.csv";
    auto* sweep = app.add_subcommand("sweep", "Run an experiment config over an instance set");
    sweep->add_option("--config", config_path, "key=value config file")->required();
    sweep->add_option("--out", results_csv, "results CSV (appended, resumable)");

    // report
    std::string report_csv, report_dir = ".";
    double cap_ratio = 0.0;
    auto* report = app.add_subcommand("report", "Summaries, profiles and gap curves from a results CSV");
    report->add_option("--results", report_csv, "results CSV")->required();
    report->add_option("--out-dir", report_dir, "output directory");
    report->add_option("--cap-ratio", cap_ratio, "performance ratio charged to unsolved runs");

    // oracle
    std::string oracle_instance;
    int oracle_gamma = 0;
    std::string oracle_factor;
    auto* oracle = app.add_subcommand("oracle", "Brute-force ground truth for tiny instances");
    oracle->add_option("--instance", oracle_instance, "PSPLIB .mm file")->required();
    oracle->add_option("--gamma", oracle_gamma, "robustness budget")->required();
    oracle->add_option("--deviation-factor", oracle_factor, "deviation rule factor");

    // export-lp
    std::string export_instance, export_out = "model.lp", export_model = "compact";
    int export_gamma = 0;
    std::string export_factor;
    auto* export_lp = app.add_subcommand("export-lp", "Write a model as CPLEX-style LP text");
    export_lp->add_option("--instance", export_instance, "PSPLIB .mm file")->required();
    export_lp->add_option("--gamma", export_gamma, "robustness budget")->required();
    export_lp->add_option("--model", export_model, "compact | master")
        ->check(CLI::IsMember({"compact", "master"}));
    export_lp->add_option("--out", export_out, "output path");
    export_lp->add_option("--deviation-factor", export_factor, "deviation rule factor");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            rmrcpsp::Instance inst = load_and_prepare(instance_path, deviation_factor);
            rmrcpsp::BudgetGamma budget = rmrcpsp::BudgetGamma::for_instance(gamma, inst);
            auto backend = rmrcpsp::mip::make_backend(backend_spec);
            if (method == "compact") {
                rmrcpsp::CompactResult res =
                    rmrcpsp::solve_compact(inst, budget, *backend, time_limit);
                if (!res.outcome.has_solution()) {
                    std::cerr << "no solution: " << rmrcpsp::mip::to_string(res.outcome.status)
                              << " " << res.outcome.message << "\n";
                    return 2;
                }
                std::cout << rmrcpsp::solution_to_json(inst, res.solution, res.worst, res.outcome,
                                                       "compact", gamma);
            } else {
                rmrcpsp::BendersOptions options;
                options.time_limit_s = time_limit;
                rmrcpsp::BendersResult res = rmrcpsp::run_benders(inst, budget, *backend, options);
                if (!trace_path.empty())
                    write_file(trace_path, rmrcpsp::trace_to_csv(inst, res.state));
                if (res.outcome.status == rmrcpsp::mip::SolveStatus::Error) {
                    std::cerr << "no solution: " << res.outcome.message << "\n";
                    return 2;
                }
                std::cout << rmrcpsp::solution_to_json(inst, res.incumbent, res.worst, res.outcome,
                                                       "benders", gamma);
            }
            return 0;
        }
        if (sweep->parsed()) {
            rmrcpsp::ExperimentConfig config;
            try {
                config = rmrcpsp::load_config(config_path);
            } catch (const std::exception& err) {
                std::cerr << "config error: " << err.what() << "\n";
                return 1;
            }
            rmrcpsp::ExperimentOutcome outcome = rmrcpsp::run_experiment(config, results_csv);
            std::cerr << "records: " << outcome.records.size() << " (" << outcome.new_records
                      << " new, " << outcome.skipped_existing << " resumed), failures: "
                      << outcome.failures << "\n";
            return outcome.failures > 0 ? 2 : 0;
        }
        if (report->parsed()) {
            std::vector<rmrcpsp::RunRecord> records = rmrcpsp::read_records_csv(report_csv);
            if (records.empty()) {
                std::cerr << "no records in " << report_csv << "\n";
                return 1;
            }
            namespace fs = std::filesystem;
            fs::create_directories(report_dir);
            write_file((fs::path(report_dir) / "summary.csv").string(),
                       rmrcpsp::summary_to_csv(rmrcpsp::summarize(records)));
            write_file((fs::path(report_dir) / "objective_means.csv").string(),
                       rmrcpsp::objective_means_to_csv(rmrcpsp::objective_means(records)));
            write_file((fs::path(report_dir) / "gap_curve.csv").string(),
                       rmrcpsp::gap_curve_to_csv(rmrcpsp::gap_curve(records)));
            std::set<std::string> methods;
            for (const auto& r : records) methods.insert(r.method);
            if (methods.size() >= 2)
                write_file((fs::path(report_dir) / "performance_profile.csv").string(),
                           rmrcpsp::profile_to_csv(
                               rmrcpsp::performance_profile(records, cap_ratio)));
            return 0;
        }
        if (oracle->parsed()) {
            rmrcpsp::Instance inst = load_and_prepare(oracle_instance, oracle_factor);
            rmrcpsp::OracleResult res = rmrcpsp::brute_force_solve_parallel(
                inst, rmrcpsp::BudgetGamma::for_instance(oracle_gamma, inst));
            std::cout << "{\n  \"instance\": \"" << inst.name << "\",\n  \"gamma\": "
                      << oracle_gamma << ",\n  \"worst_case_makespan\": " << res.makespan
                      << ",\n  \"modes\": [";
            for (int i = 0; i < res.modes.size(); ++i)
                std::cout << (i ? ", " : "") << res.modes[i];
            std::cout << "],\n  \"selection\": [";
            for (size_t e = 0; e < res.selection.size(); ++e)
                std::cout << (e ? ", " : "") << "[" << res.selection[e].first << ", "
                          << res.selection[e].second << "]";
            std::cout << "]\n}\n";
            return 0;
        }
        if (export_lp->parsed()) {
            rmrcpsp::Instance inst = load_and_prepare(export_instance, export_factor);
            rmrcpsp::BudgetGamma budget = rmrcpsp::BudgetGamma::for_instance(export_gamma, inst);
            std::string text;
            if (export_model == "compact")
                text = rmrcpsp::mip::write_lp(rmrcpsp::build_compact(inst, budget).model);
            else
                text = rmrcpsp::mip::write_lp(rmrcpsp::build_master(inst, {}).model);
            write_file(export_out, text);
            return 0;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
