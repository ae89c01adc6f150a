#include "rmrcpsp/mip/solve.hpp"

#include "rmrcpsp/mip/branch_and_bound.hpp"
#include "rmrcpsp/mip/subprocess_backend.hpp"

namespace rmrcpsp::mip {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::Error: return "error";
    }
    return "error";
}

SolveOutcome solve(const MipModel& model, SolverBackend& backend, double time_limit_s,
                   const std::optional<std::vector<double>>& warm_start) {
    SolveParams params;
    params.time_limit_s = time_limit_s;
    if (warm_start && backend.supports_warm_start()) params.warm_start = warm_start;
    return backend.solve(model, params);
}

std::unique_ptr<SolverBackend> make_bundled_backend() {
    return std::make_unique<BranchAndBoundBackend>();
}

std::unique_ptr<SolverBackend> make_subprocess_backend(const std::string& command) {
    return std::make_unique<SubprocessBackend>(command);
}

std::unique_ptr<SolverBackend> make_backend(const std::string& spec) {
    if (spec.empty() || spec == "bnb") return make_bundled_backend();
    if (spec.rfind("cmd:", 0) == 0) return make_subprocess_backend(spec.substr(4));
    throw BackendUnavailable("unknown backend spec '" + spec + "' (expected 'bnb' or 'cmd:<command>')");
}

} // namespace rmrcpsp::mip
