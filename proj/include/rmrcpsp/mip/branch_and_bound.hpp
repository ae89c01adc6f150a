#pragma once

#include "rmrcpsp/mip/solve.hpp"

namespace rmrcpsp::mip {

/// Bundled zero-dependency MIP backend: LP-based branch and bound with
/// integer bound propagation, branching on the most fractional variable.
/// Intended for the desk-scale models in this suite (up to a few hundred
/// variables); large runs should configure an external backend.
class BranchAndBoundBackend : public SolverBackend {
public:
    std::string name() const override { return "bnb"; }
    bool supports_time_limit() const override { return true; }
    bool supports_warm_start() const override { return true; }
    bool supports_concurrent_solves() const override { return true; }
    SolveOutcome solve(const MipModel& model, const SolveParams& params) override;
};

} // namespace rmrcpsp::mip
