#pragma once

#include "rmrcpsp/mip/solve.hpp"

namespace rmrcpsp::mip {

/// External solver bridge: serializes the model to a JSON file and runs
/// `<command> <model.json> <result.json>`. The bundled tools/milp_backend_scipy.py
/// speaks this protocol on top of SciPy's HiGHS interface.
class SubprocessBackend : public SolverBackend {
public:
    explicit SubprocessBackend(std::string command) : command_(std::move(command)) {}

    std::string name() const override { return "cmd:" + command_; }
    bool supports_time_limit() const override { return true; }
    bool supports_warm_start() const override { return false; }
    bool supports_concurrent_solves() const override { return true; }
    SolveOutcome solve(const MipModel& model, const SolveParams& params) override;

private:
    std::string command_;
};

} // namespace rmrcpsp::mip
