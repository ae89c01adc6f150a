#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmrcpsp/mip/model.hpp"

namespace rmrcpsp::mip {

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Error };

std::string to_string(SolveStatus status);

struct SolveOutcome {
    SolveStatus status = SolveStatus::Error;
    double objective = 0.0;
    double best_bound = 0.0;
    std::vector<double> values; // per declared variable; empty if none found
    double wall_seconds = 0.0;
    std::string message;

    bool has_solution() const {
        return (status == SolveStatus::Optimal || status == SolveStatus::Feasible) &&
               !values.empty();
    }
};

struct SolveParams {
    double time_limit_s = 7200.0;
    std::optional<std::vector<double>> warm_start;
};

/// Raised when a backend cannot run at all (missing executable, bad config).
/// Distinct from an infeasible model, which is an outcome, not an error.
struct BackendUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SolverBackend {
public:
    virtual ~SolverBackend() = default;
    virtual std::string name() const = 0;
    virtual bool supports_time_limit() const = 0;
    virtual bool supports_warm_start() const = 0;
    virtual bool supports_concurrent_solves() const = 0;
    virtual SolveOutcome solve(const MipModel& model, const SolveParams& params) = 0;
};

SolveOutcome solve(const MipModel& model, SolverBackend& backend, double time_limit_s,
                   const std::optional<std::vector<double>>& warm_start = std::nullopt);

/// Backend factory. Accepted specs: "bnb" (bundled branch and bound) or
/// "cmd:<command>" (external solver invoked as `<command> in.json out.json`).
std::unique_ptr<SolverBackend> make_backend(const std::string& spec);

std::unique_ptr<SolverBackend> make_bundled_backend();
std::unique_ptr<SolverBackend> make_subprocess_backend(const std::string& command);

} // namespace rmrcpsp::mip
