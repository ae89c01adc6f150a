#include "rmrcpsp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "rmrcpsp/benders.hpp"
#include "rmrcpsp/compact.hpp"
#include "rmrcpsp/psplib.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmrcpsp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string piece;
    while (std::getline(in, piece, sep)) {
        piece = trim(piece);
        if (!piece.empty()) out.push_back(piece);
    }
    return out;
}

constexpr const char* kResultsHeader =
    "instance,method,gamma,status,objective,bound,gap_percent,wall_seconds,iterations,"
    "per_iteration_seconds";

std::string format_opt(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream out;
    out.precision(12);
    out << *v;
    return out.str();
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

std::string record_to_line(const RunRecord& r) {
    std::ostringstream out;
    out << r.instance << ',' << r.method << ',' << r.gamma << ',' << r.status << ','
        << format_opt(r.objective) << ',' << format_opt(r.bound) << ','
        << format_opt(r.gap_percent) << ',' << format_double(r.wall_seconds) << ','
        << r.iterations << ',' << format_double(r.per_iteration_seconds);
    return out.str();
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "instances_dir") {
                config.instances_dir = value;
            } else if (key == "methods") {
                config.methods = split(value, ',');
                for (const std::string& m : config.methods)
                    if (m != "compact" && m != "benders")
                        throw std::runtime_error("unknown method '" + m + "'");
            } else if (key == "gammas") {
                config.gammas.clear();
                for (const std::string& g : split(value, ',')) config.gammas.push_back(std::stoi(g));
            } else if (key == "time_limit_s") {
                config.time_limit_s = std::stod(value);
            } else if (key == "backend") {
                config.backend = value;
            } else if (key == "workers") {
                config.workers = std::stoi(value);
            } else if (key == "deviation_factor") {
                Rational::from_decimal_string(value); // validate now
                config.deviation_factor = value;
            } else if (key == "seed") {
                config.seed = std::stoul(value);
            } else {
                throw std::runtime_error("unknown key '" + key + "'");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& err) {
            throw std::runtime_error("config line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    if (config.instances_dir.empty()) throw std::runtime_error("config: instances_dir is required");
    if (config.methods.empty()) throw std::runtime_error("config: methods is required");
    if (config.gammas.empty()) throw std::runtime_error("config: gammas is required");
    return config;
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
    std::vector<RunRecord> records;
    std::ifstream in(path);
    if (!in) return records;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line.rfind("instance,", 0) == 0) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() < 10) continue;
        RunRecord r;
        r.instance = fields[0];
        r.method = fields[1];
        r.gamma = std::stoi(fields[2]);
        r.status = fields[3];
        if (!fields[4].empty()) r.objective = std::stod(fields[4]);
        if (!fields[5].empty()) r.bound = std::stod(fields[5]);
        if (!fields[6].empty()) r.gap_percent = std::stod(fields[6]);
        r.wall_seconds = std::stod(fields[7]);
        r.iterations = std::stoi(fields[8]);
        r.per_iteration_seconds = std::stod(fields[9]);
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

RunRecord solve_one(const Instance& inst, const std::string& method, int gamma,
                    mip::SolverBackend& backend, double time_limit_s) {
    RunRecord r;
    r.instance = inst.name;
    r.method = method;
    r.gamma = gamma;
    BudgetGamma budget = BudgetGamma::for_instance(gamma, inst);
    try {
        mip::SolveOutcome outcome;
        Time authoritative = 0;
        bool have_solution = false;
        if (method == "compact") {
            CompactResult res = solve_compact(inst, budget, backend, time_limit_s);
            outcome = res.outcome;
            authoritative = res.worst.makespan;
            have_solution = outcome.has_solution();
        } else {
            BendersOptions options;
            options.time_limit_s = time_limit_s;
            BendersResult res = run_benders(inst, budget, backend, options);
            outcome = res.outcome;
            authoritative = res.worst.makespan;
            have_solution = outcome.status == mip::SolveStatus::Optimal ||
                            outcome.status == mip::SolveStatus::Feasible;
            r.iterations = res.state.iterations;
            r.per_iteration_seconds =
                res.state.iterations > 0 ? outcome.wall_seconds / res.state.iterations : 0.0;
        }
        r.status = mip::to_string(outcome.status);
        if (have_solution) {
            r.objective = static_cast<double>(authoritative);
            r.bound = outcome.best_bound;
            if (outcome.status == mip::SolveStatus::Optimal) {
                r.gap_percent = 0.0;
            } else {
                double obj = *r.objective;
                r.gap_percent = std::abs(obj) < 1e-9
                                    ? 0.0
                                    : 100.0 * (obj - outcome.best_bound) / obj;
            }
        }
        // Unsolved runs are charged the full limit, matching the reporting
        // convention the summary tables assume.
        r.wall_seconds =
            outcome.status == mip::SolveStatus::Optimal ? outcome.wall_seconds : time_limit_s;
    } catch (const std::exception& err) {
        r.status = "error";
        r.wall_seconds = time_limit_s;
        (void)err;
    }
    return r;
}

} // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::string& results_csv) {
    ExperimentOutcome outcome;

    InstanceSet set = load_instance_set(config.instances_dir, "*.mm");
    outcome.failures += static_cast<int>(set.failures.size());

    Rational factor = Rational::from_decimal_string(config.deviation_factor);
    std::vector<std::pair<std::string, Instance>> instances;
    instances.reserve(set.instances.size());
    for (auto& [name, inst] : set.instances)
        instances.emplace_back(name, apply_deviation_rule(inst, factor));

    std::vector<RunRecord> existing = read_records_csv(results_csv);
    std::set<std::string> done;
    for (const RunRecord& r : existing)
        done.insert(r.instance + "|" + r.method + "|" + std::to_string(r.gamma));

    struct WorkItem {
        const Instance* inst;
        std::string method;
        int gamma;
    };
    std::vector<WorkItem> work;
    for (const auto& [name, inst] : instances)
        for (const std::string& method : config.methods)
            for (int gamma : config.gammas) {
                if (done.count(inst.name + "|" + method + "|" + std::to_string(gamma))) {
                    ++outcome.skipped_existing;
                    continue;
                }
                work.push_back({&inst, method, gamma});
            }

    const bool fresh_file = !std::filesystem::exists(results_csv);
    std::ofstream out(results_csv, std::ios::app);
    if (!out) throw std::runtime_error("cannot open results file " + results_csv);
    if (fresh_file) {
        out << "# rmrcpsp results v1; backend=" << config.backend
            << " time_limit_s=" << config.time_limit_s
            << " deviation_factor=" << config.deviation_factor << " seed=" << config.seed << "\n";
        out << "# wall_seconds equals time_limit_s for every record not solved to optimality\n";
        out << kResultsHeader << "\n";
        out.flush();
    }

    std::vector<RunRecord> fresh(work.size());
    const int workers = std::max(1, config.workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (long long w = 0; w < static_cast<long long>(work.size()); ++w) {
        const WorkItem& item = work[static_cast<size_t>(w)];
        // Each worker owns a backend instance; solves are independent.
        auto backend = mip::make_backend(config.backend);
        RunRecord r =
            solve_one(*item.inst, item.method, item.gamma, *backend, config.time_limit_s);
        fresh[static_cast<size_t>(w)] = r;
#ifdef _OPENMP
#pragma omp critical(rmrcpsp_results_append)
#endif
        {
            out << record_to_line(r) << "\n";
            out.flush();
        }
    }
    (void)workers;

    for (RunRecord& r : fresh) {
        if (r.status == "error") ++outcome.failures;
        ++outcome.new_records;
        existing.push_back(std::move(r));
    }
    outcome.records = std::move(existing);
    return outcome;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
    if (records.empty()) return {};
    std::map<std::pair<std::string, int>, std::vector<const RunRecord*>> groups;
    for (const RunRecord& r : records) groups[{r.method, r.gamma}].push_back(&r);

    std::vector<SummaryRow> rows;
    std::map<std::string, std::vector<SummaryRow>> per_method;
    for (const auto& [key, group] : groups) {
        SummaryRow row;
        row.method = key.first;
        row.gamma = key.second;
        row.count = static_cast<int>(group.size());
        int solved = 0, feas = 0;
        double gap_sum = 0, time_sum = 0, iter_sum = 0, iter_time_sum = 0;
        for (const RunRecord* r : group) {
            if (r->status == "optimal") ++solved;
            if (r->feasible() && r->gap_percent) {
                ++feas;
                gap_sum += *r->gap_percent;
            }
            time_sum += r->wall_seconds;
            iter_sum += r->iterations;
            iter_time_sum += r->per_iteration_seconds;
        }
        row.pct_solved = 100.0 * solved / row.count;
        row.mean_gap = feas > 0 ? gap_sum / feas : 0.0;
        row.mean_time = time_sum / row.count;
        row.mean_iterations = static_cast<double>(iter_sum) / row.count;
        row.mean_iteration_seconds = iter_time_sum / row.count;
        per_method[row.method].push_back(row);
        rows.push_back(row);
    }
    for (const auto& [method, group] : per_method) {
        SummaryRow avg;
        avg.method = method;
        avg.gamma = -1;
        avg.average_row = true;
        for (const SummaryRow& r : group) {
            avg.count += r.count;
            avg.pct_solved += r.pct_solved;
            avg.mean_gap += r.mean_gap;
            avg.mean_time += r.mean_time;
            avg.mean_iterations += r.mean_iterations;
            avg.mean_iteration_seconds += r.mean_iteration_seconds;
        }
        const double g = static_cast<double>(group.size());
        avg.pct_solved /= g;
        avg.mean_gap /= g;
        avg.mean_time /= g;
        avg.mean_iterations /= g;
        avg.mean_iteration_seconds /= g;
        rows.push_back(avg);
    }
    return rows;
}

std::vector<ObjectiveMeanRow> objective_means(const std::vector<RunRecord>& records) {
    std::map<std::string, std::set<int>> method_gammas;
    for (const RunRecord& r : records) method_gammas[r.method].insert(r.gamma);

    std::vector<ObjectiveMeanRow> rows;
    for (const auto& [method, gammas] : method_gammas) {
        std::map<std::string, std::map<int, double>> optimal_by_instance;
        for (const RunRecord& r : records)
            if (r.method == method && r.status == "optimal" && r.objective)
                optimal_by_instance[r.instance][r.gamma] = *r.objective;
        // Only instances optimal at every swept gamma enter the means.
        std::vector<const std::map<int, double>*> complete;
        for (const auto& [name, by_gamma] : optimal_by_instance)
            if (by_gamma.size() == gammas.size()) complete.push_back(&by_gamma);
        for (int gamma : gammas) {
            ObjectiveMeanRow row;
            row.method = method;
            row.gamma = gamma;
            row.instance_count = static_cast<int>(complete.size());
            double sum = 0;
            for (const auto* by_gamma : complete) sum += by_gamma->at(gamma);
            row.mean_objective = complete.empty() ? 0.0 : sum / complete.size();
            rows.push_back(row);
        }
    }
    return rows;
}

PerformanceProfile performance_profile(const std::vector<RunRecord>& records, double cap_ratio) {
    std::set<std::string> method_set;
    for (const RunRecord& r : records) method_set.insert(r.method);
    if (method_set.size() < 2)
        throw std::invalid_argument("performance profiles need at least two methods");

    PerformanceProfile profile;
    profile.methods.assign(method_set.begin(), method_set.end());
    auto method_index = [&](const std::string& m) {
        return static_cast<size_t>(std::find(profile.methods.begin(), profile.methods.end(), m) -
                                   profile.methods.begin());
    };

    std::map<std::pair<std::string, int>, std::vector<std::optional<double>>> keys;
    for (const RunRecord& r : records) {
        auto& times = keys[{r.instance, r.gamma}];
        times.resize(profile.methods.size());
        if (r.status == "optimal")
            times[method_index(r.method)] = std::max(r.wall_seconds, 1e-9);
    }

    std::vector<std::vector<double>> ratios(profile.methods.size());
    double max_ratio = 1.0;
    for (const auto& [key, times] : keys) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : times)
            if (t) best = std::min(best, *t);
        for (size_t m = 0; m < times.size(); ++m) {
            if (!times[m] || !std::isfinite(best)) continue;
            double ratio = *times[m] / best;
            ratios[m].push_back(ratio);
            max_ratio = std::max(max_ratio, ratio);
        }
    }
    profile.cap_ratio = std::max(cap_ratio, max_ratio);

    std::set<double> tau_set{1.0};
    for (const auto& r : ratios) tau_set.insert(r.begin(), r.end());
    profile.taus.assign(tau_set.begin(), tau_set.end());
    const double total = static_cast<double>(keys.size());
    for (double tau : profile.taus) {
        std::vector<double> pct(profile.methods.size(), 0.0);
        for (size_t m = 0; m < profile.methods.size(); ++m) {
            size_t within = 0;
            for (double r : ratios[m])
                if (r <= tau + 1e-12) ++within;
            pct[m] = total > 0 ? 100.0 * static_cast<double>(within) / total : 0.0;
        }
        profile.percentages.push_back(std::move(pct));
    }
    return profile;
}

GapCurve gap_curve(const std::vector<RunRecord>& records) {
    std::set<std::string> method_set;
    for (const RunRecord& r : records) method_set.insert(r.method);
    GapCurve curve;
    curve.methods.assign(method_set.begin(), method_set.end());
    auto method_index = [&](const std::string& m) {
        return static_cast<size_t>(std::find(curve.methods.begin(), curve.methods.end(), m) -
                                   curve.methods.begin());
    };

    std::set<std::pair<std::string, int>> keys;
    std::vector<std::vector<double>> gaps(curve.methods.size());
    std::set<double> thresholds{0.0};
    for (const RunRecord& r : records) {
        keys.insert({r.instance, r.gamma});
        if (r.feasible() && r.gap_percent) {
            gaps[method_index(r.method)].push_back(*r.gap_percent);
            thresholds.insert(*r.gap_percent);
        }
    }
    curve.thresholds.assign(thresholds.begin(), thresholds.end());
    const double total = static_cast<double>(keys.size());
    for (double g : curve.thresholds) {
        std::vector<double> pct(curve.methods.size(), 0.0);
        for (size_t m = 0; m < curve.methods.size(); ++m) {
            size_t within = 0;
            for (double gap : gaps[m])
                if (gap <= g + 1e-12) ++within;
            pct[m] = total > 0 ? 100.0 * static_cast<double>(within) / total : 0.0;
        }
        curve.percentages.push_back(std::move(pct));
    }
    return curve;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "method,gamma,count,pct_solved,mean_gap,mean_time,mean_iterations,"
           "mean_iteration_seconds\n";
    for (const SummaryRow& r : rows) {
        out << r.method << ',' << (r.average_row ? "avg" : std::to_string(r.gamma)) << ','
            << r.count << ',' << format_double(r.pct_solved) << ',' << format_double(r.mean_gap)
            << ',' << format_double(r.mean_time) << ',' << format_double(r.mean_iterations) << ','
            << format_double(r.mean_iteration_seconds) << '\n';
    }
    return out.str();
}

std::string objective_means_to_csv(const std::vector<ObjectiveMeanRow>& rows) {
    std::ostringstream out;
    out << "# means over instances solved to optimality at every swept gamma\n";
    out << "method,gamma,instances,mean_objective\n";
    for (const ObjectiveMeanRow& r : rows)
        out << r.method << ',' << r.gamma << ',' << r.instance_count << ','
            << format_double(r.mean_objective) << '\n';
    return out.str();
}

std::string profile_to_csv(const PerformanceProfile& profile) {
    std::ostringstream out;
    out << "# unsolved runs have performance ratio " << format_double(profile.cap_ratio) << "\n";
    out << "tau";
    for (const std::string& m : profile.methods) out << ',' << m;
    out << '\n';
    for (size_t i = 0; i < profile.taus.size(); ++i) {
        out << format_double(profile.taus[i]);
        for (double pct : profile.percentages[i]) out << ',' << format_double(pct);
        out << '\n';
    }
    return out.str();
}

std::string gap_curve_to_csv(const GapCurve& curve) {
    std::ostringstream out;
    out << "gap_percent";
    for (const std::string& m : curve.methods) out << ',' << m;
    out << '\n';
    for (size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << format_double(curve.thresholds[i]);
        for (double pct : curve.percentages[i]) out << ',' << format_double(pct);
        out << '\n';
    }
    return out.str();
}

} // namespace rmrcpsp
