#include "rmrcpsp/mip/subprocess_backend.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace rmrcpsp::mip {

namespace {

namespace fs = std::filesystem;

std::atomic<unsigned> g_solve_counter{0};

fs::path unique_work_dir() {
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    fs::path dir = fs::temp_directory_path() /
                   ("rmrcpsp_mip_" + std::to_string(static_cast<long long>(stamp)) + "_" +
                    std::to_string(g_solve_counter.fetch_add(1)));
    fs::create_directories(dir);
    return dir;
}

double decode_bound(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key) || j[key].is_null()) return fallback;
    return j[key].get<double>();
}

} // namespace

SolveOutcome SubprocessBackend::solve(const MipModel& model, const SolveParams& params) {
    const auto started = std::chrono::steady_clock::now();

    nlohmann::json request;
    request["sense"] = model.objective_sense() == ObjectiveSense::Minimize ? "min" : "max";
    request["time_limit_s"] = params.time_limit_s;
    auto& cols = request["columns"] = nlohmann::json::array();
    std::vector<double> objective(static_cast<size_t>(model.num_variables()), 0.0);
    for (auto [j, c] : model.objective()) objective[static_cast<size_t>(j)] += c;
    for (int j = 0; j < model.num_variables(); ++j) {
        const Variable& v = model.variables()[static_cast<size_t>(j)];
        nlohmann::json col;
        col["name"] = v.name;
        col["lb"] = v.lower <= -kInfinity ? nlohmann::json() : nlohmann::json(v.lower);
        col["ub"] = v.upper >= kInfinity ? nlohmann::json() : nlohmann::json(v.upper);
        col["integer"] = v.integer;
        col["obj"] = objective[static_cast<size_t>(j)];
        cols.push_back(std::move(col));
    }
    auto& rows = request["rows"] = nlohmann::json::array();
    for (const Constraint& c : model.constraints()) {
        nlohmann::json row;
        row["name"] = c.name;
        row["coeffs"] = nlohmann::json::array();
        for (auto [j, a] : c.terms) row["coeffs"].push_back({j, a});
        row["sense"] = c.sense == Sense::LessEqual ? "<=" : (c.sense == Sense::Equal ? "=" : ">=");
        row["rhs"] = c.rhs;
        rows.push_back(std::move(row));
    }

    fs::path dir = unique_work_dir();
    fs::path in_path = dir / "model.json";
    fs::path out_path = dir / "result.json";
    {
        std::ofstream out(in_path);
        out << request.dump();
    }

    std::string cmd = command_ + " \"" + in_path.string() + "\" \"" + out_path.string() + "\"";
    int rc = std::system(cmd.c_str());

    SolveOutcome outcome;
    outcome.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (rc != 0 || !fs::exists(out_path)) {
        std::error_code ec;
        fs::remove_all(dir, ec);
        throw BackendUnavailable("backend command failed (exit " + std::to_string(rc) +
                                 "): " + command_);
    }

    nlohmann::json reply;
    {
        std::ifstream in(out_path);
        in >> reply;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);

    std::string status = reply.value("status", "error");
    if (status == "optimal")
        outcome.status = SolveStatus::Optimal;
    else if (status == "feasible")
        outcome.status = SolveStatus::Feasible;
    else if (status == "infeasible")
        outcome.status = SolveStatus::Infeasible;
    else if (status == "unbounded")
        outcome.status = SolveStatus::Unbounded;
    else
        outcome.status = SolveStatus::Error;
    outcome.message = reply.value("message", "");
    if (reply.contains("values") && reply["values"].is_array())
        outcome.values = reply["values"].get<std::vector<double>>();
    outcome.objective = decode_bound(reply, "objective", 0.0);
    outcome.best_bound = decode_bound(reply, "bound", outcome.objective);
    return outcome;
}

} // namespace rmrcpsp::mip
